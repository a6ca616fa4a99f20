#include "dynaug/spline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace dynaug {

CubicSpline::CubicSpline(std::vector<double> knot_x, std::vector<double> knot_y)
    : x_(std::move(knot_x)), y_(std::move(knot_y)) {
  const std::size_t n = x_.size();
  if (n < 2) {
    throw std::invalid_argument("CubicSpline: need at least two knots");
  }
  if (y_.size() != n) {
    throw std::invalid_argument("CubicSpline: knot_x and knot_y differ in length");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument(
          "CubicSpline: knot_x must be strictly increasing (violated at index " +
          std::to_string(i) + ")");
    }
  }

  // Solve the tridiagonal system for the second derivatives m_ with natural
  // boundary conditions m_[0] = m_[n-1] = 0 (Thomas algorithm).
  m_.assign(n, 0.0);
  if (n == 2) {
    return;  // linear segment, second derivatives stay zero
  }

  const std::size_t interior = n - 2;
  std::vector<double> diag(interior), rhs(interior), upper(interior);
  for (std::size_t i = 0; i < interior; ++i) {
    const double h0 = x_[i + 1] - x_[i];
    const double h1 = x_[i + 2] - x_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
  }
  // Forward sweep; the sub-diagonal entry for row i is h_i = x_[i+1]-x_[i].
  for (std::size_t i = 1; i < interior; ++i) {
    const double sub = x_[i + 1] - x_[i];
    const double w = sub / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[interior] = rhs[interior - 1] / diag[interior - 1];
  for (std::size_t i = interior - 1; i > 0; --i) {
    m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
  }
}

double CubicSpline::eval(double x) const {
  if (x < x_.front() || x > x_.back()) {
    throw std::domain_error("CubicSpline: query " + std::to_string(x) +
                            " outside knot span [" + std::to_string(x_.front()) +
                            ", " + std::to_string(x_.back()) + "]");
  }
  // Locate the segment [x_[j], x_[j+1]] containing x.
  std::size_t lo = 0, hi = x_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (x_[mid] <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * (h * h) / 6.0;
}

std::vector<double> CubicSpline::eval(const std::vector<double>& xs) const {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    out.push_back(eval(x));
  }
  return out;
}

std::vector<double> cubic_spline_eval(const std::vector<double>& knot_x,
                                      const std::vector<double>& knot_y,
                                      const std::vector<double>& query_x) {
  return CubicSpline(knot_x, knot_y).eval(query_x);
}

}  // namespace dynaug
