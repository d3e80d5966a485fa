// random_ops.cpp

#include "collider/random_ops.hpp"

namespace collider {

Matrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cplx(normal(rng), normal(rng));
  }
  return m;
}

Operator random_hermitian(const HilbertDims& dims, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  const Matrix a = random_complex(n, n, rng);
  return Operator(dims, 0.5 * (a + a.adjoint()));
}

Operator random_density(const HilbertDims& dims, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  const Matrix a = random_complex(n, n, rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  return Operator(dims, 0.5 * (rho + rho.adjoint()));
}

Operator random_pure(const HilbertDims& dims, Rng& rng) {
  Vector psi = random_complex(static_cast<Eigen::Index>(dims.total()), 1, rng);
  psi.normalize();
  return Operator(dims, psi * psi.adjoint());
}

Matrix random_psd(Eigen::Index n, Rng& rng, double scale) {
  const Matrix a = random_complex(n, n, rng);
  Matrix p = a * a.adjoint();
  p = 0.5 * (p + p.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(p, Eigen::EigenvaluesOnly);
  return p * (scale / es.eigenvalues().maxCoeff());
}

GklsSpec random_gkls(const GksBasis& basis, Rng& rng) {
  Operator h = random_hermitian(basis.system(), rng);
  Matrix traceless = h.data();
  traceless.diagonal().array() -= h.trace() / static_cast<double>(h.dim());
  return {basis, Operator(basis.system(), traceless), random_psd(static_cast<Eigen::Index>(basis.size()), rng)};
}

AncillaPrep random_parity_prep(Rng& rng) {
  const HilbertDims dims{2, 2};
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PrepComponent> components;
  const int n = count(rng);
  double total = 0.0;
  for (int c = 0; c < n; ++c) {
    PrepComponent pc;
    pc.weight = 0.1 + unit(rng);
    total += pc.weight;
    const int k = kind(rng);
    if (k == 2) {
      // Parity-preserving entangler acting on the ground state.
      pc.state = Operator::projector(dims, 0);
      pc.h_e = kron(pauli::x(), pauli::x()) + unit(rng) * kron(pauli::y(), pauli::y());
      pc.mu = 2.0 * M_PI * unit(rng);
    } else {
      // k = 0: span{|00>, |11>}; k = 1: span{|01>, |10>}
      Vector psi = Vector::Zero(4);
      const Matrix amp = random_complex(2, 1, rng);
      psi(k == 0 ? 0 : 1) = amp(0);
      psi(k == 0 ? 3 : 2) = amp(1);
      psi.normalize();
      pc.state = Operator(dims, psi * psi.adjoint());
    }
    components.push_back(std::move(pc));
  }
  for (PrepComponent& pc : components) pc.weight /= total;
  return AncillaPrep::mixture(std::move(components));
}

}  // namespace collider
