// extrapolation.hpp - zero-step extrapolation and convergence-order fits

#pragma once

#include <span>
#include <vector>

#include "collider/operator.hpp"

namespace collider {

// Polynomial (Neville) extrapolation of samples f(h_k) to h = 0. Uses every
// sample, so the error terms h, h^2, ..., h^(n-1) are all eliminated.
Matrix extrapolate_to_zero(std::span<const double> h, std::span<const Matrix> values);

// One level of pairwise Richardson elimination with leading error order p:
// (r^p f(h2) - f(h1)) / (r^p - 1) with r = h1 / h2.
Matrix richardson_pair(double h1, const Matrix& f1, double h2, const Matrix& f2, double p = 1.0);

struct PowerLawFit {
  double exponent = 0.0;   // slope of log y against log x
  double prefactor = 0.0;  // y ~ prefactor * x^exponent
  double r_squared = 0.0;
  std::size_t points = 0;  // positive samples used
};

// Least-squares line through (log x, log y) over samples with y > 0.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

// Non-increasing as x decreases, for x listed in decreasing order.
bool decreases_with(std::span<const double> y);

}  // namespace collider
