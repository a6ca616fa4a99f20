#include "dynaug/series.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dynaug {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, delim)) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == delim) {
    out.emplace_back();
  }
  return out;
}

bool parse_double(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool is_nan_token(const std::string& raw) {
  std::string s = trim(raw);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s.empty() || s == "nan";
}

// Shared-label-map variant so train and test files of one dataset agree on the
// class index assigned to each raw archive label.
std::vector<TimeSeries> parse_with_map(const std::string& text,
                                       std::map<double, int>& label_map,
                                       std::vector<double>* label_order) {
  std::vector<TimeSeries> out;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  int expected_t = -1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    const std::vector<std::string> fields = split(line, delim);
    if (fields.size() < 2) {
      throw std::runtime_error("parse_ucr_tsv: line " + std::to_string(line_no) +
                               " has no value fields");
    }
    double raw_label = 0.0;
    if (!parse_double(fields[0], raw_label)) {
      throw std::runtime_error("parse_ucr_tsv: line " + std::to_string(line_no) +
                               ": non-numeric label '" + fields[0] + "'");
    }
    const int t = static_cast<int>(fields.size()) - 1;
    if (expected_t < 0) {
      expected_t = t;
    } else if (t != expected_t) {
      throw std::runtime_error("parse_ucr_tsv: line " + std::to_string(line_no) +
                               " has " + std::to_string(t) + " values, expected " +
                               std::to_string(expected_t));
    }
    TimeSeries ts;
    ts.values.resize(1, t);
    for (int i = 0; i < t; ++i) {
      const std::string& f = fields[i + 1];
      if (is_nan_token(f)) {
        ts.values(0, i) = kNaN;
        continue;
      }
      double v = 0.0;
      if (!parse_double(f, v)) {
        throw std::runtime_error("parse_ucr_tsv: line " + std::to_string(line_no) +
                                 ": non-numeric value '" + f + "'");
      }
      ts.values(0, i) = v;
    }
    auto it = label_map.find(raw_label);
    if (it == label_map.end()) {
      const int next = static_cast<int>(label_map.size());
      it = label_map.emplace(raw_label, next).first;
      if (label_order) label_order->push_back(raw_label);
    }
    ts.label = it->second;
    out.push_back(std::move(ts));
  }
  if (out.empty()) {
    throw std::runtime_error("parse_ucr_tsv: empty input");
  }
  return out;
}

}  // namespace

void Dataset::validate() const {
  if (train.empty() || test.empty()) {
    throw std::runtime_error("Dataset '" + name + "': empty split");
  }
  const int c = train.front().channels();
  const int t = train.front().length();
  auto check = [&](const std::vector<TimeSeries>& split, const char* which) {
    for (std::size_t i = 0; i < split.size(); ++i) {
      if (split[i].channels() != c || split[i].length() != t) {
        throw std::runtime_error("Dataset '" + name + "': " + which + " series " +
                                 std::to_string(i) + " has shape " +
                                 std::to_string(split[i].channels()) + "x" +
                                 std::to_string(split[i].length()) + ", expected " +
                                 std::to_string(c) + "x" + std::to_string(t));
      }
      if (split[i].label < 0 || split[i].label >= n_classes) {
        throw std::runtime_error("Dataset '" + name + "': " + which + " series " +
                                 std::to_string(i) + " label " +
                                 std::to_string(split[i].label) + " outside [0, " +
                                 std::to_string(n_classes) + ")");
      }
    }
  };
  check(train, "train");
  check(test, "test");
}

int Dataset::channels() const { return train.front().channels(); }
int Dataset::length() const { return train.front().length(); }

std::vector<TimeSeries> parse_ucr_tsv(const std::string& text) {
  std::map<double, int> label_map;
  return parse_with_map(text, label_map, nullptr);
}

std::string serialize_ucr_tsv(const std::vector<TimeSeries>& series, char delim) {
  std::ostringstream out;
  out.precision(17);
  for (const TimeSeries& ts : series) {
    if (ts.channels() != 1) {
      throw std::runtime_error("serialize_ucr_tsv: only univariate series supported");
    }
    out << ts.label;
    for (int t = 0; t < ts.length(); ++t) {
      const double v = ts.values(0, t);
      out << delim;
      if (std::isnan(v)) {
        out << "NaN";
      } else {
        out << v;
      }
    }
    out << '\n';
  }
  return out.str();
}

Normalizer fit_normalizer(const std::vector<TimeSeries>& train) {
  if (train.empty()) {
    throw std::runtime_error("fit_normalizer: empty training split");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const TimeSeries& ts : train) {
    for (int c = 0; c < ts.channels(); ++c) {
      for (int t = 0; t < ts.length(); ++t) {
        const double v = ts.values(c, t);
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::runtime_error("fit_normalizer: no finite values in training split");
  }
  if (!(hi > lo)) {
    throw std::runtime_error("fit_normalizer: degenerate value range [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return Normalizer{lo, hi};
}

Dataset apply_normalizer(const Normalizer& n, Dataset d) {
  auto map_split = [&](std::vector<TimeSeries>& split) {
    for (TimeSeries& ts : split) {
      for (int c = 0; c < ts.channels(); ++c) {
        for (int t = 0; t < ts.length(); ++t) {
          double& v = ts.values(c, t);
          if (!std::isnan(v)) {
            v = n.apply(v);
          }
        }
      }
    }
  };
  map_split(d.train);
  map_split(d.test);
  return d;
}

Dataset impute_missing(Dataset d) {
  auto fill = [](std::vector<TimeSeries>& split) {
    for (TimeSeries& ts : split) {
      for (int c = 0; c < ts.channels(); ++c) {
        for (int t = 0; t < ts.length(); ++t) {
          double& v = ts.values(c, t);
          if (std::isnan(v)) v = 0.0;
        }
      }
    }
  };
  fill(d.train);
  fill(d.test);
  return d;
}

Dataset load_dataset(const std::string& train_path, const std::string& test_path,
                     const std::string& name) {
  Dataset d;
  d.name = name;
  std::map<double, int> label_map;
  d.train = parse_with_map(read_text_file(train_path), label_map, nullptr);
  d.test = parse_with_map(read_text_file(test_path), label_map, nullptr);
  d.n_classes = static_cast<int>(label_map.size());
  d.validate();
  return d;
}

Dataset prepare_dataset(Dataset d) {
  const Normalizer n = fit_normalizer(d.train);
  return impute_missing(apply_normalizer(n, std::move(d)));
}

DatasetPaths manifest_lookup(const std::string& manifest_path, const std::string& name) {
  const std::string text = read_text_file(manifest_path);
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  std::istringstream lines(text);
  std::string line;
  DatasetPaths paths;
  while (std::getline(lines, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    std::filesystem::path p(value);
    if (p.is_relative()) p = base / p;
    if (key == name + ".train") paths.train = p.string();
    if (key == name + ".test") paths.test = p.string();
  }
  if (paths.train.empty() || paths.test.empty()) {
    throw std::runtime_error("manifest " + manifest_path + ": no entry for dataset '" +
                             name + "'");
  }
  return paths;
}

DatasetPaths ucr_convention_paths(const std::string& root, const std::string& name) {
  const std::filesystem::path base = std::filesystem::path(root) / name;
  return DatasetPaths{(base / (name + "_TRAIN.tsv")).string(),
                      (base / (name + "_TEST.tsv")).string()};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << content;
}

}  // namespace dynaug
