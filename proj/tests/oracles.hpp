// Brute-force reference implementations used only by the tests. Nothing here
// calls into the library's numerics.

#pragma once

#include <cmath>
#include <vector>

#include "collider/collision.hpp"

namespace oracle {

using collider::cplx;
using collider::Matrix;

inline std::vector<int> digits(std::size_t index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (std::size_t f = dims.size(); f-- > 0;) {
    out[f] = static_cast<int>(index % static_cast<std::size_t>(dims[f]));
    index /= static_cast<std::size_t>(dims[f]);
  }
  return out;
}

inline std::size_t total(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Sum over every full index pair whose traced digits agree.
inline Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
  std::vector<int> kept_dims;
  for (int f : keep) kept_dims.push_back(dims[static_cast<std::size_t>(f)]);
  const auto n = static_cast<Eigen::Index>(total(kept_dims));
  Matrix out = Matrix::Zero(n, n);
  const std::size_t full = total(dims);
  for (std::size_t i = 0; i < full; ++i) {
    const auto di = digits(i, dims);
    for (std::size_t j = 0; j < full; ++j) {
      const auto dj = digits(j, dims);
      bool traced_equal = true;
      for (std::size_t f = 0; f < dims.size() && traced_equal; ++f) {
        bool kept = false;
        for (int k : keep) kept = kept || k == static_cast<int>(f);
        if (!kept && di[f] != dj[f]) traced_equal = false;
      }
      if (!traced_equal) continue;
      Eigen::Index a = 0;
      Eigen::Index b = 0;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        a = a * kept_dims[k] + di[static_cast<std::size_t>(keep[k])];
        b = b * kept_dims[k] + dj[static_cast<std::size_t>(keep[k])];
      }
      out(a, b) += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

// op on `sites` (first listed slowest), identity elsewhere.
inline Matrix embed(const Matrix& op, const std::vector<int>& sites, const std::vector<int>& dims) {
  const std::size_t full = total(dims);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(full));
  for (std::size_t i = 0; i < full; ++i) {
    const auto di = digits(i, dims);
    for (std::size_t j = 0; j < full; ++j) {
      const auto dj = digits(j, dims);
      bool rest_equal = true;
      Eigen::Index a = 0;
      Eigen::Index b = 0;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        bool targeted = false;
        for (int s : sites) targeted = targeted || s == static_cast<int>(f);
        if (!targeted && di[f] != dj[f]) rest_equal = false;
      }
      if (!rest_equal) continue;
      for (int s : sites) {
        a = a * dims[static_cast<std::size_t>(s)] + di[static_cast<std::size_t>(s)];
        b = b * dims[static_cast<std::size_t>(s)] + dj[static_cast<std::size_t>(s)];
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = op(a, b);
    }
  }
  return out;
}

// Truncated Taylor series with scaling and squaring.
inline Matrix expm(const Matrix& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Matrix a = m / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

// -i[H, rho] + sum_jk c_jk (F_j rho F_k^dag - 1/2 {F_k^dag F_j, rho})
inline Matrix gkls_action(const Matrix& h, const std::vector<Matrix>& f, const Matrix& c, const Matrix& rho) {
  const cplx i{0.0, 1.0};
  Matrix out = -i * (h * rho - rho * h);
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const cplx g = c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (g == cplx(0.0)) continue;
      const Matrix kj = f[k].adjoint() * f[j];
      out += g * (f[j] * rho * f[k].adjoint() - 0.5 * (kj * rho + rho * kj));
    }
  }
  return out;
}

template <class F>
Matrix rk4(F&& rhs, Matrix rho, double t, int steps) {
  const double h = t / steps;
  for (int n = 0; n < steps; ++n) {
    const Matrix k1 = rhs(rho);
    const Matrix k2 = rhs(rho + 0.5 * h * k1);
    const Matrix k3 = rhs(rho + 0.5 * h * k2);
    const Matrix k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

inline double coupling(const collider::ScalingRule& r, collider::Coupling c, double dt) {
  switch (c) {
    case collider::Coupling::interaction: return std::sqrt(r.gamma / dt);
    case collider::Coupling::system: return r.g_s;
    case collider::Coupling::fast_environment: return r.mu / dt;
    case collider::Coupling::slow_environment: return r.kappa * std::pow(dt, -r.s);
  }
  return 0.0;
}

// Literal timestep: every stage unitary on the full joint space, applied to
// rho (x) rho_E, then the ancillas are traced out.
inline Matrix step(const collider::CollisionSchedule& s, const Matrix& rho, double dt) {
  const std::vector<int> dims = s.joint().values();
  const cplx i{0.0, 1.0};
  Matrix joint = kron(rho, s.prep.state().data());
  for (const collider::Stage& stage : s.stages) {
    Matrix h = Matrix::Zero(joint.rows(), joint.cols());
    for (const collider::GeneratorTerm& t : stage.terms) {
      h += coupling(s.rule, t.coupling, dt) * t.weight * embed(t.generator.data(), t.targets, dims);
    }
    const Matrix u = expm(-i * stage.fraction * dt * h);
    joint = (u * joint * u.adjoint()).eval();
  }
  std::vector<int> keep;
  for (int f = 0; f < s.system_factors(); ++f) keep.push_back(f);
  return partial_trace(joint, dims, keep);
}

}  // namespace oracle
