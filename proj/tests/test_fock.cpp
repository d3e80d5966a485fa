#include <gtest/gtest.h>

#include <cmath>

#include "collider/fock.hpp"
#include "oracles.hpp"

using namespace collider;
using namespace collider::fock;

namespace {

Matrix ladder(int dim) {
  Matrix b = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

// Largest entry difference over rows and columns whose two-mode excitation
// numbers both stay at or below `low`.
double low_block_gap(const Matrix& a, const Matrix& b, int dim, int low) {
  double worst = 0.0;
  for (int i1 = 0; i1 <= low; ++i1)
    for (int i2 = 0; i2 <= low; ++i2)
      for (int j1 = 0; j1 <= low; ++j1)
        for (int j2 = 0; j2 <= low; ++j2) {
          const Eigen::Index r = i1 * dim + i2;
          const Eigen::Index c = j1 * dim + j2;
          worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
        }
  return worst;
}

}  // namespace

TEST(Fock, LadderOperators) {
  const FockMode mode(6);
  const Matrix b = annihilation(mode).data();
  EXPECT_NEAR((b - ladder(7)).norm(), 0.0, 0.0);
  const Matrix comm = b * b.adjoint() - b.adjoint() * b;
  // [b, b^dag] = 1 except on the truncated top level.
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(std::abs(comm(n, n) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(comm(6, 6).real(), -6.0, 1e-14);
  EXPECT_NEAR((number(mode).data().diagonal().real() - RealVector::LinSpaced(7, 0, 6)).norm(), 0.0, 1e-14);
  EXPECT_THROW(FockMode(0), DimensionError);
}

TEST(Fock, ThermalStateIsNormalizedGeometric) {
  const FockMode mode(60);
  for (double n_mean : {0.0, 0.2, 0.5, 1.3}) {
    const Truncated th = thermal_state(mode, n_mean);
    EXPECT_TRUE(th.op.is_density_matrix(1e-12));
    EXPECT_NEAR(th.op.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR((th.op * number(mode)).trace().real(), n_mean, 1e-8);
    EXPECT_LE(th.truncation_defect, kTailTolerance);
    if (n_mean > 0) {
      for (int n = 1; n < 10; ++n) {
        EXPECT_NEAR(th.op(n, n).real() / th.op(n - 1, n - 1).real(), n_mean / (n_mean + 1.0), 1e-12);
      }
    }
  }
}

TEST(Fock, ThermalCutoffTooSmall) {
  EXPECT_THROW(thermal_state(FockMode(3), 2.0), CutoffInsufficient);
  EXPECT_THROW(thermal_state(FockMode(3), -0.1), std::invalid_argument);
}

TEST(Fock, DefaultCutoffCoversMarginals) {
  const SqueezeParams zeta(0.4, 0.7);
  const int n = default_cutoff(0.2, 0.5, zeta);
  const double s2 = std::sinh(0.4) * std::sinh(0.4);
  const double c2 = std::cosh(0.4) * std::cosh(0.4);
  EXPECT_LE(thermal_tail(c2 * 0.5 + s2 * 1.2, n), kTailTolerance);
  EXPECT_GT(thermal_tail(c2 * 0.5 + s2 * 1.2, n - 1), kTailTolerance);
  EXPECT_GE(n, 10);
}

TEST(Fock, SqueezeMatchesTaylorExponential) {
  const int cutoff = 12;
  const FockMode mode(cutoff);
  const SqueezeParams zeta(0.4, 0.7);
  const Matrix id = Matrix::Identity(cutoff + 1, cutoff + 1);
  const Matrix b1 = oracle::kron(ladder(cutoff + 1), id);
  const Matrix b2 = oracle::kron(id, ladder(cutoff + 1));
  const cplx z = zeta.zeta();
  const Matrix s = oracle::expm(z * b1.adjoint() * b2.adjoint() - std::conj(z) * b1 * b2);
  const Truncated lib = two_mode_squeeze(mode, mode, zeta);
  EXPECT_NEAR((lib.op.data() - s).norm(), 0.0, 1e-11);
  EXPECT_TRUE(lib.op.is_unitary(1e-10));
}

TEST(Fock, SqueezeIdentitiesOnLowExcitationBlock) {
  const int cutoff = 30;
  const int dim = cutoff + 1;
  const FockMode mode(cutoff);
  const double r = 0.4;
  const double psi = 0.7;
  const Matrix s = two_mode_squeeze(mode, mode, SqueezeParams(r, psi)).op.data();
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix b1 = oracle::kron(ladder(dim), id);
  const Matrix b2 = oracle::kron(id, ladder(dim));
  const cplx e = std::polar(1.0, psi);
  const Matrix lhs1 = s.adjoint() * b1 * s;
  const Matrix rhs1 = std::cosh(r) * b1 + e * std::sinh(r) * b2.adjoint();
  const Matrix lhs2 = s.adjoint() * b2 * s;
  const Matrix rhs2 = std::cosh(r) * b2 + e * std::sinh(r) * b1.adjoint();
  EXPECT_LE(low_block_gap(lhs1, rhs1, dim, 5), 1e-8);
  EXPECT_LE(low_block_gap(lhs2, rhs2, dim, 5), 1e-8);
}

TEST(Fock, EntangledThermalStateMoments) {
  const double r = 0.4, psi = 0.7, n1 = 0.2, n2 = 0.5;
  const SqueezeParams zeta(r, psi);
  const FockMode mode(default_cutoff(n1, n2, zeta));
  const Truncated rho = entangled_thermal_state(mode, mode, zeta, n1, n2);
  EXPECT_TRUE(rho.op.is_density_matrix(1e-10));
  EXPECT_NEAR(rho.op.trace().real(), 1.0, 1e-12);
  EXPECT_LE(rho.truncation_defect, 1e-8);

  const Operator id = Operator::identity(mode.dims());
  const Operator b1 = kron(annihilation(mode), id);
  const Operator b2 = kron(id, annihilation(mode));
  const double c = std::cosh(r), s = std::sinh(r);
  auto mean = [&](const Operator& x) { return (x * rho.op).trace(); };
  // Moments of S^dag b S under the product thermal state.
  EXPECT_NEAR(mean(b1.adjoint() * b1).real(), c * c * n1 + s * s * (n2 + 1), 1e-8);
  EXPECT_NEAR(mean(b2.adjoint() * b2).real(), c * c * n2 + s * s * (n1 + 1), 1e-8);
  EXPECT_NEAR(std::abs(mean(b1 * b2) - c * s * std::polar(1.0, psi) * (n1 + n2 + 1)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(mean(b1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(mean(b1 * b2.adjoint())), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(mean(b1 * b1)), 0.0, 1e-12);
}

TEST(Fock, StatesArePsdAcrossParameters) {
  const std::pair<double, double> cases[] = {{0.0, 0.0}, {0.0, 0.4}, {0.3, 0.4}, {0.8, 0.0}};
  for (const auto& [r, n_mean] : cases) {
    const SqueezeParams zeta(r, 1.1);
    const FockMode mode(default_cutoff(n_mean, n_mean, zeta));
    const Truncated rho = entangled_thermal_state(mode, mode, zeta, n_mean, n_mean);
    EXPECT_GE(rho.op.min_eigenvalue(), -1e-12);
    EXPECT_NEAR(rho.op.trace().real(), 1.0, 1e-12);
  }
}
