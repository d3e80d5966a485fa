// extrapolation.cpp

#include "collider/extrapolation.hpp"

#include <cmath>

namespace collider {

Matrix extrapolate_to_zero(std::span<const double> h, std::span<const Matrix> values) {
  if (h.size() != values.size() || h.empty()) {
    throw std::invalid_argument("extrapolation needs matching, non-empty step and value lists");
  }
  std::vector<Matrix> t(values.begin(), values.end());
  const std::size_t n = t.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double hi = h[i];
      const double hj = h[i + level];
      if (hi == hj) throw std::invalid_argument("extrapolation steps must be distinct");
      // Neville recurrence evaluated at 0.
      t[i] = (hi * t[i + 1] - hj * t[i]) / (hi - hj);
    }
  }
  return t.front();
}

Matrix richardson_pair(double h1, const Matrix& f1, double h2, const Matrix& f2, double p) {
  const double w = std::pow(h1 / h2, p);
  return (w * f2 - f1) / (w - 1.0);
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit needs matching sample lists");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  PowerLawFit fit;
  fit.points = lx.size();
  if (lx.size() < 2) {
    fit.exponent = std::nan("");
    fit.prefactor = std::nan("");
    fit.r_squared = std::nan("");
    return fit;
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

bool decreases_with(std::span<const double> y) {
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] > y[i - 1]) return false;
  }
  return true;
}

}  // namespace collider
