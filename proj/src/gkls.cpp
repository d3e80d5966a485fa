// gkls.cpp - Liouvillian construction, propagation and generator decomposition

#include "collider/gkls.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace collider {

namespace {

Matrix kron_m(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Matrix identity_m(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

// ---------------------------------------------------------------------------
// GksBasis

GksBasis::GksBasis(HilbertDims system, std::vector<GksElement> elements, double tol)
    : system_(std::move(system)), elements_(std::move(elements)) {
  std::map<int, std::vector<std::size_t>> by_site;
  std::set<std::pair<int, std::string>> seen;
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    const GksElement& e = elements_[j];
    if (e.site < 0 || static_cast<std::size_t>(e.site) >= system_.size()) {
      throw DimensionError("GKS element '" + e.label + "' has site " + std::to_string(e.site) +
                           " outside " + to_string(system_));
    }
    if (e.op.dims() != HilbertDims({system_[static_cast<std::size_t>(e.site)]})) {
      throw DimensionError("GKS element '" + e.label + "' does not match its site dimension");
    }
    if (!seen.insert({e.site, e.label}).second) {
      throw std::invalid_argument("duplicate GKS element (" + std::to_string(e.site) + ", " +
                                  e.label + ")");
    }
    if (std::abs(e.op.trace()) > tol) {
      throw std::invalid_argument("GKS element '" + e.label + "' is not traceless");
    }
    by_site[e.site].push_back(j);
  }
  for (const auto& [site, idx] : by_site) {
    const int d = system_[static_cast<std::size_t>(site)];
    if (idx.size() > static_cast<std::size_t>(d * d - 1)) {
      throw std::invalid_argument("site " + std::to_string(site) + " has more than d^2-1 GKS operators");
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        const cplx g = (elements_[idx[a]].op.data() * elements_[idx[b]].op.data().adjoint()).trace();
        const double expected = a == b ? 1.0 : 0.0;
        if (std::abs(g - expected) > tol) {
          throw std::invalid_argument("GKS elements on site " + std::to_string(site) +
                                      " are not orthonormal");
        }
      }
    }
  }
  embedded_.reserve(elements_.size());
  weight_.reserve(elements_.size());
  for (const GksElement& e : elements_) {
    embedded_.push_back(embed_local(e.op, e.site, system_));
    weight_.push_back(static_cast<double>(system_.total()) /
                      system_[static_cast<std::size_t>(e.site)]);
  }
}

GksBasis GksBasis::standard(const HilbertDims& system) {
  std::vector<GksElement> elements;
  for (std::size_t s = 0; s < system.size(); ++s) {
    const int d = system[s];
    const int site = static_cast<int>(s);
    if (d == 2) {
      elements.push_back({site, "minus", pauli::minus()});
      elements.push_back({site, "plus", pauli::plus()});
      elements.push_back({site, "z", (1.0 / std::sqrt(2.0)) * pauli::z()});
      continue;
    }
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a == b) continue;
        Matrix m = Matrix::Zero(d, d);
        m(a, b) = 1.0;
        elements.push_back({site, "e" + std::to_string(a) + std::to_string(b), Operator(std::move(m))});
      }
    }
    for (int l = 1; l < d; ++l) {
      Matrix m = Matrix::Zero(d, d);
      const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
      for (int a = 0; a < l; ++a) m(a, a) = norm;
      m(l, l) = -l * norm;
      elements.push_back({site, "d" + std::to_string(l), Operator(std::move(m))});
    }
  }
  return GksBasis(system, std::move(elements));
}

GksBasis GksBasis::ladder(const HilbertDims& system) {
  std::vector<GksElement> elements;
  for (std::size_t s = 0; s < system.size(); ++s) {
    if (system[s] != 2) throw DimensionError("ladder basis needs qubit sites");
    elements.push_back({static_cast<int>(s), "minus", pauli::minus()});
    elements.push_back({static_cast<int>(s), "plus", pauli::plus()});
  }
  return GksBasis(system, std::move(elements));
}

std::optional<std::size_t> GksBasis::find(int site, const std::string& label) const {
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    if (elements_[j].site == site && elements_[j].label == label) return j;
  }
  return std::nullopt;
}

std::size_t GksBasis::index(int site, const std::string& label) const {
  if (auto j = find(site, label)) return *j;
  throw std::invalid_argument("no GKS element (" + std::to_string(site) + ", " + label + ")");
}

std::vector<std::size_t> GksBasis::canonical_order() const {
  std::vector<std::size_t> order(elements_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const auto& ea = elements_[a];
    const auto& eb = elements_[b];
    return std::tie(ea.site, ea.label) < std::tie(eb.site, eb.label);
  });
  return order;
}

GksBasis::Expansion GksBasis::expand(const Operator& x) const {
  if (x.dims() != system_) throw DimensionError("expanded operator does not live on the system");
  Expansion out;
  out.coefficients = Vector::Zero(static_cast<Eigen::Index>(elements_.size()));
  Matrix rest = x.data();
  const auto n = static_cast<double>(system_.total());
  out.trace_part = x.trace() / n;
  rest.diagonal().array() -= out.trace_part;
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    const Matrix& f = embedded_[j].data();
    const cplx c = (f.adjoint() * x.data()).trace() / weight_[j];
    out.coefficients(static_cast<Eigen::Index>(j)) = c;
    rest -= c * f;
  }
  out.remainder = rest.norm();
  return out;
}

GksBasis::Expansion GksBasis::expand_local(const Operator& x, int site) const {
  return expand(embed_local(x, site, system_));
}

Matrix GksBasis::dagger_map() const {
  const auto n = static_cast<Eigen::Index>(elements_.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto& ek = elements_[static_cast<std::size_t>(k)];
      const auto& eb = elements_[static_cast<std::size_t>(b)];
      if (ek.site != eb.site) continue;
      // coefficient of F_b^dag along F_k
      p(k, b) = (ek.op.data().adjoint() * eb.op.data().adjoint()).trace();
    }
  }
  return p;
}

double GksBasis::adjoint_closure_defect() const {
  double worst = 0.0;
  for (const GksElement& e : elements_) {
    worst = std::max(worst, expand_local(e.op.adjoint(), e.site).remainder);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Superoperator

Superoperator::Superoperator(HilbertDims dims, Matrix data) : dims_(std::move(dims)), data_(std::move(data)) {
  const auto side = static_cast<Eigen::Index>(dims_.total() * dims_.total());
  if (data_.rows() != side || data_.cols() != side) {
    throw DimensionError("superoperator side does not match D^2 for dims " + to_string(dims_));
  }
}

Superoperator Superoperator::identity(const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total() * dims.total());
  return Superoperator(dims, identity_m(n));
}

Superoperator Superoperator::zero(const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total() * dims.total());
  return Superoperator(dims, Matrix::Zero(n, n));
}

Operator Superoperator::apply(const Operator& rho) const {
  if (rho.dims() != dims_) throw DimensionError("superoperator applied to operator of wrong dims");
  return Operator(dims_, devectorize(data_ * vectorize(rho.data()), rho.dim()));
}

Superoperator& Superoperator::operator+=(const Superoperator& o) {
  if (o.dims_ != dims_) throw DimensionError("superoperator dims mismatch");
  data_ += o.data_;
  return *this;
}

Superoperator& Superoperator::operator-=(const Superoperator& o) {
  if (o.dims_ != dims_) throw DimensionError("superoperator dims mismatch");
  data_ -= o.data_;
  return *this;
}

Superoperator& Superoperator::operator*=(cplx s) {
  data_ *= s;
  return *this;
}

Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
Superoperator operator-(Superoperator a, const Superoperator& b) { return a -= b; }
Superoperator operator*(cplx s, Superoperator a) { return a *= s; }

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dims() != b.dims()) throw DimensionError("superoperator dims mismatch");
  return Superoperator(a.dims(), a.data() * b.data());
}

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix devectorize(const Vector& v, Eigen::Index side) {
  if (v.size() != side * side) throw DimensionError("vector length is not side^2");
  return Eigen::Map<const Matrix>(v.data(), side, side);
}

// ---------------------------------------------------------------------------
// GklsSpec

void GklsSpec::validate(double tol) const {
  if (hamiltonian.dims() != basis.system()) {
    throw DimensionError("H_eff dims " + to_string(hamiltonian.dims()) + " do not match basis system " +
                         to_string(basis.system()));
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (kossakowski.rows() != n || kossakowski.cols() != n) {
    throw DimensionError("Kossakowski matrix is not indexed by the basis");
  }
  if (!hamiltonian.is_hermitian(tol)) throw std::invalid_argument("H_eff is not Hermitian");
  if ((kossakowski - kossakowski.adjoint()).norm() > tol * std::max(1.0, kossakowski.norm())) {
    throw std::invalid_argument("Kossakowski matrix is not Hermitian");
  }
}

double GklsSpec::min_kossakowski_eigenvalue() const {
  if (kossakowski.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (kossakowski + kossakowski.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool GklsSpec::is_valid_gkls(double tol) const {
  try {
    validate(tol);
  } catch (const std::exception&) {
    return false;
  }
  return min_kossakowski_eigenvalue() >= -tol;
}

// ---------------------------------------------------------------------------
// Liouvillians

Superoperator hamiltonian_superop(const Operator& h) {
  const Eigen::Index n = h.dim();
  const Matrix id = identity_m(n);
  return Superoperator(h.dims(), -kI * (kron_m(id, h.data()) - kron_m(h.data().transpose(), id)));
}

Superoperator dissipator_superop(const Operator& f, const Operator& g, cplx c) {
  if (f.dims() != g.dims()) throw DimensionError("dissipator operands live on different spaces");
  const Eigen::Index n = f.dim();
  const Matrix id = identity_m(n);
  const Matrix k = g.data().adjoint() * f.data();
  Matrix data = kron_m(g.data().conjugate(), f.data()) - 0.5 * kron_m(id, k) - 0.5 * kron_m(k.transpose(), id);
  return Superoperator(f.dims(), c * data);
}

Superoperator build_liouvillian(const GklsSpec& spec) {
  spec.validate();
  const HilbertDims& dims = spec.basis.system();
  const auto n = static_cast<Eigen::Index>(dims.total());
  const Matrix id = identity_m(n);
  Superoperator l = hamiltonian_superop(spec.hamiltonian);
  Matrix jump = Matrix::Zero(n * n, n * n);
  Matrix k = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < spec.basis.size(); ++a) {
    const Matrix& fa = spec.basis.embedded(a).data();
    for (std::size_t b = 0; b < spec.basis.size(); ++b) {
      const cplx c = spec.kossakowski(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (c == cplx(0.0)) continue;
      const Matrix& fb = spec.basis.embedded(b).data();
      jump += c * kron_m(fb.conjugate(), fa);
      k += c * (fb.adjoint() * fa);
    }
  }
  Matrix diss = jump - 0.5 * kron_m(id, k) - 0.5 * kron_m(k.transpose(), id);
  return l + Superoperator(dims, std::move(diss));
}

double trace_annihilation_defect(const Superoperator& l) {
  const auto n = static_cast<Eigen::Index>(l.dims().total());
  double worst = 0.0;
  for (Eigen::Index col = 0; col < l.data().cols(); ++col) {
    cplx tr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) tr += l.data()(i + i * n, col);
    worst = std::max(worst, std::abs(tr));
  }
  return worst;
}

Operator propagate(const Superoperator& l, const Operator& rho0, double t) {
  if (!std::isfinite(t)) throw NumericalError("propagation time is not finite");
  if (rho0.dims() != l.dims()) throw DimensionError("initial state does not match the Liouvillian");
  if (t == 0.0) return rho0;
  const Matrix flow = expm(Matrix(l.data() * t));
  return Operator(rho0.dims(), devectorize(flow * vectorize(rho0.data()), rho0.dim()));
}

std::vector<Operator> traceless_hermitian_basis(const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  std::vector<Operator> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Matrix sym = Matrix::Zero(n, n);
      sym(j, k) = s;
      sym(k, j) = s;
      out.emplace_back(dims, std::move(sym));
      Matrix asym = Matrix::Zero(n, n);
      asym(j, k) = -kI * s;
      asym(k, j) = kI * s;
      out.emplace_back(dims, std::move(asym));
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    Matrix diag = Matrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index a = 0; a < l; ++a) diag(a, a) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    out.emplace_back(dims, std::move(diag));
  }
  return out;
}

Decomposition decompose_generator(const Superoperator& l, const GksBasis& basis) {
  if (l.dims() != basis.system()) throw DimensionError("generator and basis live on different systems");
  const double scale = std::max(1.0, l.data().norm());
  if (trace_annihilation_defect(l) > 1e-6 * scale) {
    throw NumericalError("generator is not trace-annihilating; cannot decompose");
  }
  const HilbertDims& dims = basis.system();
  const std::vector<Operator> hbasis = traceless_hermitian_basis(dims);
  const std::size_t nh = hbasis.size();
  const std::size_t nb = basis.size();
  // Every design column is a short sum of kron(B, A) terms, so the Gram
  // matrix and projections reduce to Hilbert-Schmidt products of factors.
  struct Term {
    cplx c;
    Eigen::Index b, a;
  };
  const auto n = static_cast<Eigen::Index>(dims.total());
  std::vector<Matrix> factors{identity_m(n)};
  auto add = [&](Matrix m) {
    factors.push_back(std::move(m));
    return static_cast<Eigen::Index>(factors.size() - 1);
  };
  std::vector<std::vector<Term>> columns;
  for (const Operator& g : hbasis) {
    columns.push_back({{-kI, 0, add(g.data())}, {kI, add(g.data().transpose()), 0}});
  }
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      const Matrix& f = basis.embedded(a).data();
      const Matrix& g = basis.embedded(b).data();
      const Matrix k = g.adjoint() * f;
      columns.push_back({{1.0, add(g.conjugate()), add(f)}, {-0.5, 0, add(k)}, {-0.5, add(k.transpose()), 0}});
    }
  }
  Matrix v(n * n, static_cast<Eigen::Index>(factors.size()));
  for (std::size_t i = 0; i < factors.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = vectorize(factors[i]);
  const Matrix overlap = v.adjoint() * v;
  // R(p + qn, r + sn) = L(pn + r, qn + s), so <kron(B, A), L> = vec(B)^dag R conj(vec(A)).
  Matrix realigned(n * n, n * n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      realigned.row(p + q * n) = vectorize(l.data().block(p * n, q * n, n, n)).transpose();
    }
  }
  const Matrix projected = v.adjoint() * realigned * v.conjugate();

  const auto ncol = static_cast<Eigen::Index>(columns.size());
  Matrix gram(ncol, ncol);
  Vector rhs(ncol);
  for (Eigen::Index i = 0; i < ncol; ++i) {
    cplx acc = 0.0;
    for (const Term& t : columns[static_cast<std::size_t>(i)]) acc += std::conj(t.c) * projected(t.b, t.a);
    rhs(i) = acc;
    for (Eigen::Index j = i; j < ncol; ++j) {
      cplx g = 0.0;
      for (const Term& s : columns[static_cast<std::size_t>(i)]) {
        for (const Term& t : columns[static_cast<std::size_t>(j)]) {
          g += std::conj(s.c) * t.c * overlap(s.b, t.b) * overlap(s.a, t.a);
        }
      }
      gram(i, j) = g;
      gram(j, i) = std::conj(g);
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const RealVector& ev = eig.eigenvalues();
  const double cond = ev(0) > 0.0 ? ev(ncol - 1) / ev(0) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw NumericalError("generator decomposition is ill-conditioned (Gram condition " +
                         std::to_string(cond) + ")");
  }
  const Vector x = eig.eigenvectors() * (ev.cwiseInverse().cast<cplx>().asDiagonal() *
                                         (eig.eigenvectors().adjoint() * rhs));

  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(dims.total()), static_cast<Eigen::Index>(dims.total()));
  for (std::size_t a = 0; a < nh; ++a) h += x(static_cast<Eigen::Index>(a)).real() * hbasis[a].data();
  Matrix c(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          x(static_cast<Eigen::Index>(nh + a * nb + b));
    }
  }
  c = 0.5 * (c + c.adjoint()).eval();

  Decomposition out;
  out.spec = GklsSpec{basis, Operator(dims, 0.5 * (h + h.adjoint())), std::move(c)};
  out.residual = (build_liouvillian(out.spec).data() - l.data()).norm();
  out.gram_condition = cond;
  return out;
}

// ---------------------------------------------------------------------------
// Cross terms and the Lamb shift

Operator lamb_shift(std::span<const CrossTerm> terms, const HilbertDims& dims) {
  Operator h = Operator::zero(dims);
  for (const CrossTerm& t : terms) {
    const Operator fwd = t.first * t.second.adjoint();
    const Operator bwd = t.second * t.first.adjoint();
    h += (t.coefficient * fwd - std::conj(t.coefficient) * bwd) * (1.0 / (2.0 * kI));
  }
  return hermitian_part(h);
}

Superoperator global_dissipator(std::span<const CrossTerm> terms, const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  const Matrix id = identity_m(n);
  Matrix out = Matrix::Zero(n * n, n * n);
  for (const CrossTerm& t : terms) {
    const Matrix& f = t.first.data();
    const Matrix& fp = t.second.data();
    const cplx g = t.coefficient;
    // g F rho F'^dag - g F F'^dag rho
    out += g * (kron_m(fp.conjugate(), f) - kron_m(id, f * fp.adjoint()));
    // -g^* (rho F' F^dag - F' rho F^dag)
    out -= std::conj(g) * (kron_m((fp * f.adjoint()).transpose(), id) - kron_m(f.conjugate(), fp));
  }
  return Superoperator(dims, std::move(out));
}

Superoperator symmetric_cross_dissipator(std::span<const CrossTerm> terms, const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  const Matrix id = identity_m(n);
  Matrix out = Matrix::Zero(n * n, n * n);
  auto add = [&](const Matrix& a, const Matrix& b, cplx g) {
    // g (A rho B^dag - 1/2 {A B^dag, rho})
    const Matrix k = a * b.adjoint();
    out += g * (kron_m(b.conjugate(), a) - 0.5 * kron_m(id, k) - 0.5 * kron_m(k.transpose(), id));
  };
  for (const CrossTerm& t : terms) {
    add(t.first.data(), t.second.data(), t.coefficient);
    add(t.second.data(), t.first.data(), std::conj(t.coefficient));
  }
  return Superoperator(dims, std::move(out));
}

// ---------------------------------------------------------------------------
// Map diagnostics

Matrix choi_matrix(const Superoperator& map) {
  const auto n = static_cast<Eigen::Index>(map.dims().total());
  Matrix choi(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index col = i + j * n;
      for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index a = 0; a < n; ++a) {
          choi(i * n + a, j * n + b) = map.data()(a + b * n, col);
        }
      }
    }
  }
  return choi;
}

double min_choi_eigenvalue(const Superoperator& map) {
  const Matrix c = choi_matrix(map);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_preservation_defect(const Superoperator& map) {
  const auto n = static_cast<Eigen::Index>(map.dims().total());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index col = i + j * n;
      cplx tr = 0.0;
      for (Eigen::Index a = 0; a < n; ++a) tr += map.data()(a + a * n, col);
      const cplx expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(tr - expected));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Comparisons

Matrix kossakowski_in_basis(const GklsSpec& spec, const GksBasis& target) {
  const auto n = static_cast<Eigen::Index>(target.size());
  if (spec.basis.size() != target.size()) {
    throw std::invalid_argument("bases hold different numbers of elements");
  }
  std::vector<std::size_t> map(target.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    const auto& e = target.element(j);
    map[j] = spec.basis.index(e.site, e.label);
  }
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out(a, b) = spec.kossakowski(static_cast<Eigen::Index>(map[static_cast<std::size_t>(a)]),
                                   static_cast<Eigen::Index>(map[static_cast<std::size_t>(b)]));
    }
  }
  return out;
}

SpecDifference spec_difference(const GklsSpec& a, const GklsSpec& b) {
  if (a.basis.system() != b.basis.system()) throw DimensionError("specs live on different systems");
  const Matrix kb = kossakowski_in_basis(b, a.basis);
  const auto order = a.basis.canonical_order();
  const auto n = static_cast<Eigen::Index>(order.size());
  Matrix diff(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto oi = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
      const auto oj = static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]);
      diff(i, j) = a.kossakowski(oi, oj) - kb(oi, oj);
    }
  }
  Matrix hd = a.hamiltonian.data() - b.hamiltonian.data();
  const cplx tr = hd.trace() / static_cast<double>(hd.rows());
  hd.diagonal().array() -= tr;
  SpecDifference out;
  out.hamiltonian = hd.norm();
  out.kossakowski = diff.norm();
  out.max_entry = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const GksBasis& basis) {
  nlohmann::json elements = nlohmann::json::array();
  for (const GksElement& e : basis.elements()) {
    elements.push_back({{"site", e.site}, {"label", e.label}, {"op", e.op}});
  }
  j = {{"dims", basis.system()}, {"elements", std::move(elements)}};
}

namespace {

std::vector<GksElement> elements_from_json(const nlohmann::json& list) {
  std::vector<GksElement> elements;
  for (const auto& e : list) {
    elements.push_back({e.at("site").get<int>(), e.at("label").get<std::string>(), e.at("op").get<Operator>()});
  }
  return elements;
}

}  // namespace

void from_json(const nlohmann::json& j, GksBasis& basis) {
  basis = GksBasis(j.at("dims").get<HilbertDims>(), elements_from_json(j.at("elements")));
}

void to_json(nlohmann::json& j, const GklsSpec& spec) {
  nlohmann::json b;
  to_json(b, spec.basis);
  j = {{"dims", spec.basis.system()},
       {"H_eff", spec.hamiltonian},
       {"basis", b.at("elements")},
       {"kossakowski", matrix_to_json(spec.kossakowski)}};
}

void from_json(const nlohmann::json& j, GklsSpec& spec) {
  const auto dims = j.at("dims").get<HilbertDims>();
  spec.basis = GksBasis(dims, elements_from_json(j.at("basis")));
  spec.hamiltonian = Operator(dims, matrix_from_json(j.at("H_eff")));
  spec.kossakowski = matrix_from_json(j.at("kossakowski"));
  spec.validate();
}

}  // namespace collider
