// operator.hpp - dense operators on finite tensor-product Hilbert spaces

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace collider {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Largest joint dimension any dense operator may have.
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 14;

// Default tolerances; every check that uses them also takes an override.
inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kEqualityTol = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered local dimensions of a tensor product. Factor 0 is the slowest index.
class HilbertDims {
 public:
  HilbertDims() = default;
  HilbertDims(std::initializer_list<int> dims);
  explicit HilbertDims(std::vector<int> dims);

  std::size_t size() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }
  int operator[](std::size_t i) const { return dims_.at(i); }
  const std::vector<int>& values() const { return dims_; }

  // Product of the local dimensions (1 for the empty product).
  std::size_t total() const;

  HilbertDims concat(const HilbertDims& other) const;
  HilbertDims select(std::span<const int> factors) const;

  // Offset of each configuration of the listed factors inside the full index,
  // enumerated with the first listed factor slowest.
  std::vector<std::size_t> offsets(std::span<const int> factors) const;
  // Factors not in the list, ascending.
  std::vector<int> complement(std::span<const int> factors) const;

  bool operator==(const HilbertDims&) const = default;

 private:
  void validate() const;
  std::vector<int> dims_;
};

std::string to_string(const HilbertDims& dims);

class Operator {
 public:
  Operator() = default;
  Operator(HilbertDims dims, Matrix data);
  // Single-factor operator; dims = {rows}.
  explicit Operator(Matrix data);

  static Operator identity(const HilbertDims& dims);
  static Operator zero(const HilbertDims& dims);
  // |index><index| on the given space.
  static Operator projector(const HilbertDims& dims, std::size_t index);

  const HilbertDims& dims() const { return dims_; }
  const Matrix& data() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  Operator adjoint() const;
  cplx trace() const { return data_.trace(); }
  double norm() const { return data_.norm(); }

  bool is_hermitian(double tol = kStructuralTol) const;
  bool is_unitary(double tol = kStructuralTol) const;
  bool is_density_matrix(double tol = kStructuralTol) const;
  // Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  double unitarity_defect() const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s);

 private:
  HilbertDims dims_;
  Matrix data_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx s, Operator a);
Operator operator*(Operator a, cplx s);

Operator commutator(const Operator& a, const Operator& b);
Operator hermitian_part(const Operator& a);

// Frobenius distance relative to ||b|| (absolute when b vanishes).
double relative_distance(const Operator& a, const Operator& b);

Operator kron(const Operator& a, const Operator& b);
Operator kron(std::span<const Operator> ops);

// Traces out every factor not listed in keep. Kept factors retain their
// original order; an empty keep-set yields a 1x1 operator holding the trace.
Operator partial_trace(const Operator& a, std::span<const int> keep);
inline Operator partial_trace(const Operator& a, std::initializer_list<int> keep) {
  return partial_trace(a, std::span<const int>(keep.begin(), keep.size()));
}

// exp(scale * a). Hermitian and skew-Hermitian arguments go through an
// eigendecomposition, everything else through Pade scaling and squaring.
Operator expm(const Operator& a, cplx scale = 1.0);
Matrix expm(const Matrix& m);

// op acts on factor `site` of dims; identity elsewhere.
Operator embed_local(const Operator& op, int site, const HilbertDims& dims);
// op acts on the listed factors (first listed slowest inside op).
Operator embed(const Operator& op, std::span<const int> sites, const HilbertDims& dims);

// Applies op (acting on `sites`, first listed slowest) to every column of
// `states`, each column a vector on `dims`.
void apply_local(Matrix& states, const Matrix& op, std::span<const int> sites,
                 const HilbertDims& dims);

namespace pauli {
Operator identity();
Operator x();
Operator y();
Operator z();
// |0> is the ground state; sigma_plus |0> = |1>.
Operator plus();
Operator minus();
Operator ground();
Operator excited();
}  // namespace pauli

void to_json(nlohmann::json& j, const HilbertDims& dims);
void from_json(const nlohmann::json& j, HilbertDims& dims);
// {dims: [..], re: [[..]], im: [[..]]}, rows listed first.
void to_json(nlohmann::json& j, const Operator& op);
void from_json(const nlohmann::json& j, Operator& op);
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace collider
