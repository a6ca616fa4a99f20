#pragma once

#include <cstdint>
#include <vector>

#include "dynaug/rng.hpp"
#include "dynaug/series.hpp"

namespace dynaug::augment {

/// Hyperparameters of the five augmentation methods. Defaults follow the usual
/// time-series conventions: jitter sigma 0.03; magnitude/time warp built from
/// four interior spline knots with sigma 0.2 around a multiplicative mean of 1;
/// window warp stretches a 10% window by 0.5x or 2x.
struct AugmentConfig {
  double jitter_sigma = 0.03;
  int mw_knots = 4;
  double mw_mu = 1.0;
  double mw_sigma = 0.2;
  int tw_knots = 4;
  double tw_mu = 1.0;
  double tw_sigma = 0.2;
  double ww_ratio = 0.10;
  std::vector<double> ww_scales{0.5, 2.0};

  void validate() const;
};

/// The N parallel views of one input, identity always first. View order is
/// fixed: identity, jitter, magnitude warp, time warp, window warp.
struct AugmentedBundle {
  std::vector<Matrix> views;
  int source_label = 0;
};

inline constexpr int kNumMethods = 5;
const char* method_name(int index);  // "identity", "jitter", ...

/// Smooth random curve: spline through n_knots interior knots drawn from
/// Normal(mu, sigma^2), evenly spaced over [0, T-1] between two fixed endpoint
/// knots pinned at mu, evaluated at integer positions 0..T-1.
Vector random_smooth_curve(int length, int n_knots, double mu, double sigma,
                           RngStream& rng);

/// x + elementwise Gaussian noise with standard deviation sigma.
Matrix jitter(const Matrix& x, double sigma, RngStream& rng);

/// Elementwise multiplication by one random smooth curve shared across channels.
Matrix magnitude_warp(const Matrix& x, const AugmentConfig& cfg, RngStream& rng);

/// Smooth distortion of the time axis driven by a random speed curve.
Matrix time_warp(const Matrix& x, const AugmentConfig& cfg, RngStream& rng);

/// Deterministic core of time_warp given the speed curve; exposed so tests can
/// drive it with known curves. speed entries are clamped to >= 0.1 to keep the
/// cumulative time strictly monotone.
Matrix time_warp_with_curve(const Matrix& x, const Vector& speed);

/// Stretch or compress a random window, then resample back to the original length.
Matrix window_warp(const Matrix& x, const AugmentConfig& cfg, RngStream& rng);

/// Deterministic core of window_warp given window start, length and scale.
Matrix window_warp_with(const Matrix& x, int start, int window_len, double scale);

/// Piecewise-linear resampling onto new_len points; endpoints map exactly.
Vector resample_linear(const Vector& v, int new_len);

/// All five views of one series, drawn in the fixed method order with fresh
/// randomness from rng.
AugmentedBundle apply_all(const TimeSeries& x, const AugmentConfig& cfg, RngStream& rng);

/// Number of transform invocations since the last reset; used to assert that
/// augmentation-free code paths really never augment.
std::uint64_t invocation_count();
void reset_invocation_count();

}  // namespace dynaug::augment
