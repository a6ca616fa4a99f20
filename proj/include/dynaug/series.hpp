#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dynaug {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One fixed-length sequence with a class label. values is [channels x length];
/// missing entries are represented as NaN until impute_missing() runs.
struct TimeSeries {
  Matrix values;   // C x T
  int label = 0;   // contiguous 0-based class index

  int channels() const { return static_cast<int>(values.rows()); }
  int length() const { return static_cast<int>(values.cols()); }
};

/// Archive-provided train/test splits of one dataset. Never reshuffled.
struct Dataset {
  std::vector<TimeSeries> train;
  std::vector<TimeSeries> test;
  int n_classes = 0;
  std::string name;

  /// Throws if any structural invariant is violated (shape mismatch between
  /// series, labels outside [0, n_classes), empty splits).
  void validate() const;

  int channels() const;
  int length() const;
};

/// Affine min-max map fitted on the training split only. Maps the fitted value
/// range onto [-1, 1]; test values outside the training range are not clipped.
struct Normalizer {
  double min_val = 0.0;
  double max_val = 0.0;

  double apply(double x) const {
    return 2.0 * (x - min_val) / (max_val - min_val) - 1.0;
  }
};

/// Parse UCR-archive text: one series per nonempty line, label first, fields
/// separated by tabs or commas. Missing values (`NaN` or an empty field) come
/// back as NaN. Labels are remapped to contiguous 0-based integers in order of
/// first appearance. Throws on ragged rows, non-numeric fields or empty input,
/// naming the offending line.
std::vector<TimeSeries> parse_ucr_tsv(const std::string& text);

/// Inverse of parse_ucr_tsv for univariate series (used by the augment CLI and
/// round-trip tests). NaN is written back as the literal `NaN`.
std::string serialize_ucr_tsv(const std::vector<TimeSeries>& series, char delim = '\t');

/// Global min/max over every finite value of the training split. Throws when
/// the split is empty or all finite values are identical.
Normalizer fit_normalizer(const std::vector<TimeSeries>& train);

/// Apply the normalizer to both splits; NaN entries pass through untouched.
Dataset apply_normalizer(const Normalizer& n, Dataset d);

/// Replace every NaN with 0.0 (the center of the normalized range); all other
/// values are untouched. Expects an already-normalized dataset.
Dataset impute_missing(Dataset d);

/// Load <name>_TRAIN.tsv / <name>_TEST.tsv with a label remap shared across
/// the two files, so the same raw archive label gets the same class index in
/// both splits.
Dataset load_dataset(const std::string& train_path, const std::string& test_path,
                     const std::string& name);

/// fit_normalizer + apply_normalizer + impute_missing in pipeline order.
Dataset prepare_dataset(Dataset d);

/// Plain-text manifest mapping dataset name to file paths. Lines look like
///   TwoPatterns.train = TwoPatterns/TwoPatterns_TRAIN.tsv
/// with `#` comments; relative paths resolve against the manifest directory.
struct DatasetPaths {
  std::string train;
  std::string test;
};
DatasetPaths manifest_lookup(const std::string& manifest_path, const std::string& name);

/// UCR 2018 on-disk convention: <root>/<name>/<name>_TRAIN.tsv etc.
DatasetPaths ucr_convention_paths(const std::string& root, const std::string& name);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dynaug
