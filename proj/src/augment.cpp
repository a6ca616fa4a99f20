#include "dynaug/augment.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "dynaug/spline.hpp"

namespace dynaug::augment {

namespace {

std::atomic<std::uint64_t> g_invocations{0};

void count_invocation() { g_invocations.fetch_add(1, std::memory_order_relaxed); }

constexpr double kMinWarpSpeed = 0.1;

double interp_at(const Eigen::Ref<const Eigen::RowVectorXd>& v, double pos) {
  const int last = static_cast<int>(v.size()) - 1;
  if (pos <= 0.0) return v(0);
  if (pos >= last) return v(last);
  const int j = static_cast<int>(pos);
  const double frac = pos - j;
  if (frac == 0.0) return v(j);
  return v(j) + frac * (v(j + 1) - v(j));
}

}  // namespace

void AugmentConfig::validate() const {
  if (jitter_sigma < 0 || mw_sigma < 0 || tw_sigma < 0) {
    throw std::invalid_argument("AugmentConfig: sigmas must be >= 0");
  }
  if (mw_knots < 2 || tw_knots < 2) {
    throw std::invalid_argument("AugmentConfig: knot counts must be >= 2");
  }
  if (!(ww_ratio > 0.0 && ww_ratio < 1.0)) {
    throw std::invalid_argument("AugmentConfig: ww_ratio must be in (0, 1)");
  }
  if (ww_scales.empty()) {
    throw std::invalid_argument("AugmentConfig: ww_scales must be nonempty");
  }
  for (double s : ww_scales) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("AugmentConfig: ww_scales must be positive");
    }
  }
}

const char* method_name(int index) {
  static const char* names[kNumMethods] = {"identity", "jitter", "magnitude_warp",
                                           "time_warp", "window_warp"};
  if (index < 0 || index >= kNumMethods) {
    throw std::out_of_range("method_name: index out of range");
  }
  return names[index];
}

Vector random_smooth_curve(int length, int n_knots, double mu, double sigma,
                           RngStream& rng) {
  if (length < 2) throw std::invalid_argument("random_smooth_curve: length must be >= 2");
  if (n_knots < 2) throw std::invalid_argument("random_smooth_curve: n_knots must be >= 2");

  // n_knots interior random knots plus fixed endpoint knots at mu, evenly
  // spaced over [0, T-1].
  const int total = n_knots + 2;
  std::vector<double> kx(total), ky(total);
  const double step = static_cast<double>(length - 1) / (total - 1);
  for (int i = 0; i < total; ++i) {
    kx[i] = i * step;
  }
  kx.back() = static_cast<double>(length - 1);
  ky.front() = mu;
  ky.back() = mu;
  for (int i = 1; i <= n_knots; ++i) {
    ky[i] = rng.normal(mu, sigma);
  }

  const CubicSpline spline(kx, ky);
  Vector out(length);
  for (int t = 0; t < length; ++t) {
    out(t) = spline.eval(static_cast<double>(t));
  }
  return out;
}

Matrix jitter(const Matrix& x, double sigma, RngStream& rng) {
  if (sigma < 0) throw std::invalid_argument("jitter: sigma must be >= 0");
  count_invocation();
  Matrix out = x;
  for (int c = 0; c < out.rows(); ++c) {
    for (int t = 0; t < out.cols(); ++t) {
      out(c, t) += rng.normal(0.0, sigma);
    }
  }
  return out;
}

Matrix magnitude_warp(const Matrix& x, const AugmentConfig& cfg, RngStream& rng) {
  cfg.validate();
  count_invocation();
  const Vector w =
      random_smooth_curve(static_cast<int>(x.cols()), cfg.mw_knots, cfg.mw_mu,
                          cfg.mw_sigma, rng);
  // One curve shared across channels.
  return x.array().rowwise() * w.transpose().array();
}

Matrix time_warp_with_curve(const Matrix& x, const Vector& speed) {
  const int t_len = static_cast<int>(x.cols());
  if (speed.size() != t_len) {
    throw std::invalid_argument("time_warp_with_curve: speed length mismatch");
  }
  // Cumulative time, rescaled so tau[0] = 0 and tau[T-1] = T-1. Clamping the
  // speed keeps tau strictly increasing.
  Vector tau(t_len);
  double acc = 0.0;
  for (int t = 0; t < t_len; ++t) {
    acc += std::max(speed(t), kMinWarpSpeed);
    tau(t) = acc;
  }
  const double t0 = tau(0);
  const double span = tau(t_len - 1) - t0;
  for (int t = 0; t < t_len; ++t) {
    tau(t) = (tau(t) - t0) * (t_len - 1) / span;
  }
  tau(0) = 0.0;
  tau(t_len - 1) = static_cast<double>(t_len - 1);

  // Each output index t reads the input at the (fractional) time where tau
  // crosses t.
  Matrix out(x.rows(), t_len);
  int seg = 0;
  for (int t = 0; t < t_len; ++t) {
    const double target = static_cast<double>(t);
    while (seg + 1 < t_len - 1 && tau(seg + 1) < target) {
      ++seg;
    }
    double pos;
    if (target <= tau(0)) {
      pos = 0.0;
    } else {
      const double lo = tau(seg), hi = tau(seg + 1);
      pos = seg + (target - lo) / (hi - lo);
    }
    for (int c = 0; c < x.rows(); ++c) {
      out(c, t) = interp_at(x.row(c), pos);
    }
  }
  return out;
}

Matrix time_warp(const Matrix& x, const AugmentConfig& cfg, RngStream& rng) {
  cfg.validate();
  count_invocation();
  const Vector speed =
      random_smooth_curve(static_cast<int>(x.cols()), cfg.tw_knots, cfg.tw_mu,
                          cfg.tw_sigma, rng);
  return time_warp_with_curve(x, speed);
}

Vector resample_linear(const Vector& v, int new_len) {
  const int l = static_cast<int>(v.size());
  if (l < 2) throw std::invalid_argument("resample_linear: input length must be >= 2");
  if (new_len < 2) throw std::invalid_argument("resample_linear: new_len must be >= 2");
  Vector out(new_len);
  const double scale = static_cast<double>(l - 1) / (new_len - 1);
  for (int i = 0; i < new_len; ++i) {
    const double pos = i * scale;
    const int j = std::min(static_cast<int>(pos), l - 2);
    const double frac = pos - j;
    out(i) = frac == 0.0 ? v(j) : v(j) + frac * (v(j + 1) - v(j));
  }
  out(0) = v(0);
  out(new_len - 1) = v(l - 1);
  return out;
}

Matrix window_warp_with(const Matrix& x, int start, int window_len, double scale) {
  const int t_len = static_cast<int>(x.cols());
  if (start < 0 || window_len < 2 || start + window_len > t_len) {
    throw std::invalid_argument("window_warp_with: window outside series");
  }
  const int warped_len = std::max(2, static_cast<int>(std::lround(scale * window_len)));
  const int mid_len = t_len - window_len + warped_len;
  Matrix out(x.rows(), t_len);
  for (int c = 0; c < x.rows(); ++c) {
    const Vector window = x.row(c).segment(start, window_len);
    const Vector warped = resample_linear(window, warped_len);
    Vector full(mid_len);
    full.head(start) = x.row(c).head(start);
    full.segment(start, warped_len) = warped;
    full.tail(t_len - start - window_len) =
        x.row(c).tail(t_len - start - window_len);
    out.row(c) = resample_linear(full, t_len);
  }
  return out;
}

Matrix window_warp(const Matrix& x, const AugmentConfig& cfg, RngStream& rng) {
  cfg.validate();
  count_invocation();
  const int t_len = static_cast<int>(x.cols());
  const int w = std::max(2, static_cast<int>(std::lround(cfg.ww_ratio * t_len)));
  if (w > t_len) {
    throw std::invalid_argument("window_warp: window longer than series");
  }
  const int start = rng.uniform_int(0, t_len - w);
  const double scale =
      cfg.ww_scales[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(cfg.ww_scales.size()) - 1))];
  return window_warp_with(x, start, w, scale);
}

AugmentedBundle apply_all(const TimeSeries& x, const AugmentConfig& cfg, RngStream& rng) {
  cfg.validate();
  AugmentedBundle bundle;
  bundle.source_label = x.label;
  bundle.views.reserve(kNumMethods);
  bundle.views.push_back(x.values);
  bundle.views.push_back(jitter(x.values, cfg.jitter_sigma, rng));
  bundle.views.push_back(magnitude_warp(x.values, cfg, rng));
  bundle.views.push_back(time_warp(x.values, cfg, rng));
  bundle.views.push_back(window_warp(x.values, cfg, rng));
  return bundle;
}

std::uint64_t invocation_count() {
  return g_invocations.load(std::memory_order_relaxed);
}

void reset_invocation_count() { g_invocations.store(0, std::memory_order_relaxed); }

}  // namespace dynaug::augment
