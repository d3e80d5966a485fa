// operator.cpp - tensor-product operator algebra

#include "collider/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace collider {

// ---------------------------------------------------------------------------
// HilbertDims

HilbertDims::HilbertDims(std::initializer_list<int> dims) : dims_(dims) { validate(); }

HilbertDims::HilbertDims(std::vector<int> dims) : dims_(std::move(dims)) { validate(); }

void HilbertDims::validate() const {
  std::size_t total = 1;
  for (int d : dims_) {
    if (d < 2) {
      throw DimensionError("local dimension must be at least 2, got " + std::to_string(d));
    }
    total *= static_cast<std::size_t>(d);
    if (total > kMaxDimension) {
      throw CapacityError("Hilbert space dimension exceeds the dense budget of " +
                          std::to_string(kMaxDimension) + " rows");
    }
  }
}

std::size_t HilbertDims::total() const {
  std::size_t t = 1;
  for (int d : dims_) t *= static_cast<std::size_t>(d);
  return t;
}

HilbertDims HilbertDims::concat(const HilbertDims& other) const {
  std::vector<int> all = dims_;
  all.insert(all.end(), other.dims_.begin(), other.dims_.end());
  return HilbertDims(std::move(all));
}

HilbertDims HilbertDims::select(std::span<const int> factors) const {
  std::vector<int> out;
  out.reserve(factors.size());
  for (int f : factors) {
    if (f < 0 || static_cast<std::size_t>(f) >= dims_.size()) {
      throw DimensionError("factor index " + std::to_string(f) + " out of range for " +
                           to_string(*this));
    }
    out.push_back(dims_[static_cast<std::size_t>(f)]);
  }
  return HilbertDims(std::move(out));
}

std::vector<std::size_t> HilbertDims::offsets(std::span<const int> factors) const {
  const std::size_t n = dims_.size();
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * static_cast<std::size_t>(dims_[i]);

  std::vector<bool> seen(n, false);
  for (int f : factors) {
    if (f < 0 || static_cast<std::size_t>(f) >= n) {
      throw DimensionError("factor index " + std::to_string(f) + " out of range for " +
                           to_string(*this));
    }
    if (seen[static_cast<std::size_t>(f)]) {
      throw DimensionError("factor index " + std::to_string(f) + " listed twice");
    }
    seen[static_cast<std::size_t>(f)] = true;
  }

  std::vector<std::size_t> out{0};
  for (int f : factors) {
    const auto d = static_cast<std::size_t>(dims_[static_cast<std::size_t>(f)]);
    const std::size_t s = stride[static_cast<std::size_t>(f)];
    std::vector<std::size_t> next;
    next.reserve(out.size() * d);
    for (std::size_t base : out) {
      for (std::size_t a = 0; a < d; ++a) next.push_back(base + a * s);
    }
    out = std::move(next);
  }
  return out;
}

std::vector<int> HilbertDims::complement(std::span<const int> factors) const {
  std::vector<int> rest;
  for (int f = 0; f < static_cast<int>(dims_.size()); ++f) {
    if (std::find(factors.begin(), factors.end(), f) == factors.end()) rest.push_back(f);
  }
  return rest;
}

std::string to_string(const HilbertDims& dims) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(HilbertDims dims, Matrix data) : dims_(std::move(dims)), data_(std::move(data)) {
  const auto side = static_cast<Eigen::Index>(dims_.total());
  if (data_.rows() != data_.cols()) {
    throw DimensionError("operator matrix must be square");
  }
  if (data_.rows() != side) {
    throw DimensionError("operator side " + std::to_string(data_.rows()) +
                         " does not match dims " + to_string(dims_));
  }
}

Operator::Operator(Matrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) throw DimensionError("operator matrix must be square");
  dims_ = HilbertDims({static_cast<int>(data_.rows())});
}

Operator Operator::identity(const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  return Operator(dims, Matrix::Identity(n, n));
}

Operator Operator::zero(const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  return Operator(dims, Matrix::Zero(n, n));
}

Operator Operator::projector(const HilbertDims& dims, std::size_t index) {
  Operator p = zero(dims);
  if (index >= dims.total()) throw DimensionError("projector index out of range");
  p.data_(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return p;
}

Operator Operator::adjoint() const { return Operator(dims_, data_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
  return (data_ - data_.adjoint()).norm() <= tol * std::max(1.0, data_.norm());
}

double Operator::unitarity_defect() const {
  return (data_.adjoint() * data_ - Matrix::Identity(dim(), dim())).norm();
}

bool Operator::is_unitary(double tol) const { return unitarity_defect() <= tol; }

double Operator::min_eigenvalue() const {
  const Matrix h = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool Operator::is_density_matrix(double tol) const {
  if (!is_hermitian(tol)) return false;
  if (std::abs(trace() - cplx(1.0)) > tol) return false;
  return min_eigenvalue() >= -tol;
}

Operator& Operator::operator+=(const Operator& o) {
  if (o.dims_ != dims_) throw DimensionError("operator dims mismatch in addition");
  data_ += o.data_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  if (o.dims_ != dims_) throw DimensionError("operator dims mismatch in subtraction");
  data_ -= o.data_;
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  data_ *= s;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dims() != b.dims()) throw DimensionError("operator dims mismatch in product");
  return Operator(a.dims(), a.data() * b.data());
}

Operator operator*(cplx s, Operator a) { return a *= s; }
Operator operator*(Operator a, cplx s) { return a *= s; }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator hermitian_part(const Operator& a) {
  return Operator(a.dims(), 0.5 * (a.data() + a.data().adjoint()));
}

double relative_distance(const Operator& a, const Operator& b) {
  const double diff = (a.data() - b.data()).norm();
  const double ref = b.data().norm();
  return ref > 0.0 ? diff / ref : diff;
}

// ---------------------------------------------------------------------------
// Tensor structure

Operator kron(const Operator& a, const Operator& b) {
  const HilbertDims dims = a.dims().concat(b.dims());
  Matrix data = Eigen::kroneckerProduct(a.data(), b.data()).eval();
  return Operator(dims, std::move(data));
}

Operator kron(std::span<const Operator> ops) {
  if (ops.empty()) throw DimensionError("kron of an empty operator list");
  Operator out = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) out = kron(out, ops[i]);
  return out;
}

Operator partial_trace(const Operator& a, std::span<const int> keep) {
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw DimensionError("partial_trace keep-set has duplicates");
  }
  const HilbertDims& dims = a.dims();
  const std::vector<int> traced = dims.complement(kept);
  const auto keep_off = dims.offsets(kept);
  const auto trace_off = dims.offsets(traced);

  const auto n = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(n, n);
  const Matrix& m = a.data();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (std::size_t t : trace_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(i)] + t),
                 static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(j)] + t));
      }
      out(i, j) = acc;
    }
  }
  if (kept.empty()) return Operator(HilbertDims{}, std::move(out));
  return Operator(dims.select(kept), std::move(out));
}

Operator embed(const Operator& op, std::span<const int> sites, const HilbertDims& dims) {
  const HilbertDims local = dims.select(sites);
  if (local != op.dims()) {
    throw DimensionError("embedded operator dims " + to_string(op.dims()) +
                         " do not match target factors " + to_string(local));
  }
  const auto site_off = dims.offsets(sites);
  const auto rest_off = dims.offsets(dims.complement(sites));
  const auto n = static_cast<Eigen::Index>(dims.total());
  Matrix out = Matrix::Zero(n, n);
  const Matrix& m = op.data();
  const auto k = static_cast<Eigen::Index>(site_off.size());
  for (std::size_t r : rest_off) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto col = static_cast<Eigen::Index>(site_off[static_cast<std::size_t>(b)] + r);
      for (Eigen::Index a = 0; a < k; ++a) {
        const cplx v = m(a, b);
        if (v != cplx(0.0)) {
          out(static_cast<Eigen::Index>(site_off[static_cast<std::size_t>(a)] + r), col) = v;
        }
      }
    }
  }
  return Operator(dims, std::move(out));
}

Operator embed_local(const Operator& op, int site, const HilbertDims& dims) {
  if (site < 0 || static_cast<std::size_t>(site) >= dims.size()) {
    throw DimensionError("site " + std::to_string(site) + " out of range for " + to_string(dims));
  }
  const int sites[] = {site};
  return embed(op, sites, dims);
}

void apply_local(Matrix& states, const Matrix& op, std::span<const int> sites,
                 const HilbertDims& dims) {
  if (states.rows() != static_cast<Eigen::Index>(dims.total())) {
    throw DimensionError("state length does not match dims " + to_string(dims));
  }
  const auto site_off = dims.offsets(sites);
  if (op.rows() != static_cast<Eigen::Index>(site_off.size()) || op.cols() != op.rows()) {
    throw DimensionError("local operator does not match target factors");
  }
  const auto rest_off = dims.offsets(dims.complement(sites));
  std::vector<Eigen::Index> rows(site_off.size());
  Matrix block(op.rows(), states.cols());
  for (std::size_t r : rest_off) {
    for (std::size_t a = 0; a < site_off.size(); ++a) {
      rows[a] = static_cast<Eigen::Index>(site_off[a] + r);
    }
    block = states(rows, Eigen::all);
    states(rows, Eigen::all) = op * block;
  }
}

// ---------------------------------------------------------------------------
// Matrix exponential

namespace {

bool all_finite(const Matrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("expm of a non-square matrix");
  if (!all_finite(m)) throw NumericalError("expm argument has non-finite entries");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  const double scale = std::max(1.0, m.norm());
  const double skew = (m + m.adjoint()).norm();
  const double herm = (m - m.adjoint()).norm();

  if (skew <= 1e-14 * scale) {
    // m = i K with K Hermitian.
    const Matrix k = -kI * m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()));
    const Vector phases =
        es.eigenvalues().unaryExpr([](double x) { return std::exp(kI * x); }).cast<cplx>();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  if (herm <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    const Vector growth =
        es.eigenvalues().unaryExpr([](double x) { return std::exp(x); }).cast<cplx>();
    return es.eigenvectors() * growth.asDiagonal() * es.eigenvectors().adjoint();
  }
  Matrix out = m.exp();
  if (!all_finite(out)) throw NumericalError("expm overflowed");
  return out;
}

Operator expm(const Operator& a, cplx scale) {
  if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag())) {
    throw NumericalError("expm scale is not finite");
  }
  return Operator(a.dims(), expm(Matrix(scale * a.data())));
}

// ---------------------------------------------------------------------------
// Named single-qubit operators

namespace pauli {

namespace {
Operator qubit(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return Operator(std::move(m));
}
}  // namespace

Operator identity() { return qubit(1, 0, 0, 1); }
Operator x() { return qubit(0, 1, 1, 0); }
Operator y() { return qubit(0, -kI, kI, 0); }
Operator z() { return qubit(1, 0, 0, -1); }
Operator plus() { return qubit(0, 0, 1, 0); }
Operator minus() { return qubit(0, 1, 0, 0); }
Operator ground() { return qubit(1, 0, 0, 0); }
Operator excited() { return qubit(0, 0, 0, 1); }

}  // namespace pauli

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const HilbertDims& dims) { j = dims.values(); }

void from_json(const nlohmann::json& j, HilbertDims& dims) {
  dims = HilbertDims(j.get<std::vector<int>>());
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> rr(static_cast<std::size_t>(m.cols()));
    std::vector<double> ii(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr[static_cast<std::size_t>(c)] = m(r, c).real();
      ii[static_cast<std::size_t>(c)] = m(r, c).imag();
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(re.at(0).size()) : 0;
  Matrix m = Matrix::Zero(rows, cols);
  const bool has_im = j.contains("im");
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = re.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw DimensionError("ragged matrix literal");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double x = row.at(static_cast<std::size_t>(c)).get<double>();
      const double y =
          has_im ? j.at("im").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>()
                 : 0.0;
      m(r, c) = cplx(x, y);
    }
  }
  return m;
}

void to_json(nlohmann::json& j, const Operator& op) {
  j = matrix_to_json(op.data());
  j["dims"] = op.dims().values();
}

void from_json(const nlohmann::json& j, Operator& op) {
  Matrix m = matrix_from_json(j);
  if (j.contains("dims")) {
    op = Operator(j.at("dims").get<HilbertDims>(), std::move(m));
  } else {
    op = Operator(std::move(m));
  }
}

}  // namespace collider
