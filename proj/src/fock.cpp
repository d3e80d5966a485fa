// fock.cpp - truncated bosonic operators and Gaussian ancilla states

#include "collider/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace collider::fock {

FockMode::FockMode(int n_max) : cutoff(n_max) {
  if (n_max < 1) throw DimensionError("Fock cutoff must be at least 1");
}

SqueezeParams::SqueezeParams(double magnitude, double phase) : r(magnitude), psi(phase) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw std::invalid_argument("squeeze magnitude must be a finite non-negative number");
  }
  if (!std::isfinite(phase)) throw std::invalid_argument("squeeze phase must be finite");
  psi = std::fmod(phase, 2.0 * M_PI);
  if (psi < 0.0) psi += 2.0 * M_PI;
}

double thermal_tail(double mean_number, int cutoff) {
  if (mean_number <= 0.0) return 0.0;
  return std::pow(mean_number / (mean_number + 1.0), cutoff + 1);
}

int default_cutoff(double n1, double n2, const SqueezeParams& zeta) {
  const double c2 = std::cosh(zeta.r) * std::cosh(zeta.r);
  const double s2 = std::sinh(zeta.r) * std::sinh(zeta.r);
  // Marginal occupations of the squeezed thermal state.
  const double occ1 = c2 * n1 + s2 * (n2 + 1.0);
  const double occ2 = c2 * n2 + s2 * (n1 + 1.0);
  int n = static_cast<int>(std::ceil(10.0 * std::max(1.0, s2)));
  while (thermal_tail(occ1, n) > kTailTolerance || thermal_tail(occ2, n) > kTailTolerance) ++n;
  return n;
}

Operator annihilation(const FockMode& mode) {
  Matrix b = Matrix::Zero(mode.dim(), mode.dim());
  for (int n = 1; n < mode.dim(); ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(b));
}

Operator creation(const FockMode& mode) { return annihilation(mode).adjoint(); }

Operator number(const FockMode& mode) { return creation(mode) * annihilation(mode); }

Truncated thermal_state(const FockMode& mode, double mean_number) {
  if (!(mean_number >= 0.0) || !std::isfinite(mean_number)) {
    throw std::invalid_argument("mean photon number must be finite and non-negative");
  }
  const double tail = thermal_tail(mean_number, mode.cutoff);
  if (tail > kTailTolerance) {
    throw CutoffInsufficient("cutoff " + std::to_string(mode.cutoff) +
                             " leaves thermal tail weight " + std::to_string(tail) +
                             " for N = " + std::to_string(mean_number));
  }
  const double q = mean_number / (mean_number + 1.0);
  RealVector p(mode.dim());
  double w = 1.0;
  for (int n = 0; n < mode.dim(); ++n) {
    p(n) = w;
    w *= q;
  }
  p /= p.sum();
  return {Operator(p.cast<cplx>().asDiagonal().toDenseMatrix()), tail};
}

Operator squeeze_generator(const FockMode& m1, const FockMode& m2, double psi) {
  const Operator b1 = kron(annihilation(m1), Operator::identity(m2.dims()));
  const Operator b2 = kron(Operator::identity(m1.dims()), annihilation(m2));
  const Operator pair = b1.adjoint() * b2.adjoint();
  const cplx phase = std::polar(1.0, psi);
  return kI * (phase * pair - std::conj(phase) * pair.adjoint());
}

Truncated two_mode_squeeze(const FockMode& m1, const FockMode& m2, const SqueezeParams& zeta) {
  if (m1.cutoff != m2.cutoff) throw DimensionError("two-mode squeeze needs equal cutoffs");
  // exp(zeta b1^dag b2^dag - zeta^* b1 b2) = exp(-i r G)
  const Operator gen = squeeze_generator(m1, m2, zeta.psi);
  Operator s = expm(gen, -kI * zeta.r);
  const double defect = s.unitarity_defect();
  if (defect > 1e-6) {
    throw CutoffInsufficient("squeeze operator unitarity defect " + std::to_string(defect));
  }
  return {std::move(s), defect};
}

Truncated entangled_thermal_state(const FockMode& m1, const FockMode& m2, const SqueezeParams& zeta,
                                  double n1, double n2) {
  const Truncated th1 = thermal_state(m1, n1);
  const Truncated th2 = thermal_state(m2, n2);
  const Truncated s = two_mode_squeeze(m1, m2, zeta);
  const Operator product = kron(th1.op, th2.op);
  Operator rho = s.op * product * s.op.adjoint();
  rho = hermitian_part(rho);

  // Population sitting on the top level of either mode.
  double boundary = 0.0;
  const int d = m1.dim();
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < m2.dim(); ++b) {
      if (a == m1.cutoff || b == m2.cutoff) boundary += rho(a * m2.dim() + b, a * m2.dim() + b).real();
    }
  }
  const double defect =
      std::max({th1.truncation_defect, th2.truncation_defect, s.truncation_defect, boundary});
  return {std::move(rho), defect};
}

}  // namespace collider::fock
