// gkls.hpp - GKLS master equations: basis, Liouvillian assembly and decomposition

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collider/operator.hpp"

namespace collider {

// One GKS operator, local on a single system site.
struct GksElement {
  int site = 0;
  std::string label;
  Operator op;  // dims {system_dims[site]}
};

// Orthonormal traceless local jump operators F_{m,alpha}. The order of the
// list fixes the row/column order of every Kossakowski matrix built on it.
class GksBasis {
 public:
  GksBasis() = default;
  GksBasis(HilbertDims system, std::vector<GksElement> elements, double tol = 1e-12);

  // Every site gets a complete local basis: off-diagonal units |a><b| and
  // normalized diagonal Gell-Mann matrices. Qubit labels: minus, plus, z.
  static GksBasis standard(const HilbertDims& system);
  // sigma_minus and sigma_plus on every (qubit) site.
  static GksBasis ladder(const HilbertDims& system);

  const HilbertDims& system() const { return system_; }
  std::size_t size() const { return elements_.size(); }
  const GksElement& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<GksElement>& elements() const { return elements_; }
  // F_j acting on the full system space.
  const Operator& embedded(std::size_t i) const { return embedded_.at(i); }

  std::optional<std::size_t> find(int site, const std::string& label) const;
  std::size_t index(int site, const std::string& label) const;

  // Order sorting the elements by (site, label).
  std::vector<std::size_t> canonical_order() const;

  struct Expansion {
    Vector coefficients;  // X = sum_j c_j F_j + trace_part * I + remainder
    cplx trace_part = 0.0;
    double remainder = 0.0;  // Frobenius norm of the unexplained part
  };
  // Expands an operator on the full system space.
  Expansion expand(const Operator& x) const;
  // Same, for an operator local on one site.
  Expansion expand_local(const Operator& x, int site) const;

  // P(k, b) = coefficient of F_b^dag along F_k. Turns a no-dagger coefficient
  // table T (terms F_a rho F_b) into the daggered convention c = T P^dag.
  Matrix dagger_map() const;
  // Largest remainder when expanding the adjoints of the elements.
  double adjoint_closure_defect() const;

 private:
  HilbertDims system_;
  std::vector<GksElement> elements_;
  std::vector<Operator> embedded_;
  std::vector<double> weight_;  // Tr[F~_j^dag F~_j] for the embedded element
};

class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(HilbertDims dims, Matrix data);

  static Superoperator identity(const HilbertDims& dims);
  static Superoperator zero(const HilbertDims& dims);

  const HilbertDims& dims() const { return dims_; }
  const Matrix& data() const { return data_; }

  Operator apply(const Operator& rho) const;

  Superoperator& operator+=(const Superoperator& o);
  Superoperator& operator-=(const Superoperator& o);
  Superoperator& operator*=(cplx s);

 private:
  HilbertDims dims_;
  Matrix data_;
};

Superoperator operator+(Superoperator a, const Superoperator& b);
Superoperator operator-(Superoperator a, const Superoperator& b);
Superoperator operator*(cplx s, Superoperator a);
Superoperator operator*(const Superoperator& a, const Superoperator& b);

// Column stacking: vec(rho)[i + j * D] = rho(i, j).
Vector vectorize(const Matrix& m);
Matrix devectorize(const Vector& v, Eigen::Index side);

struct GklsSpec {
  GksBasis basis;
  Operator hamiltonian;  // H_eff
  Matrix kossakowski;    // indexed by basis order

  // Throws on dimension mismatch or non-Hermitian H_eff / Kossakowski matrix.
  void validate(double tol = kStructuralTol) const;
  double min_kossakowski_eigenvalue() const;
  bool is_valid_gkls(double tol = kStructuralTol) const;
};

// -i[H, .]
Superoperator hamiltonian_superop(const Operator& h);
// c (F rho G^dag - 1/2 {G^dag F, rho})
Superoperator dissipator_superop(const Operator& f, const Operator& g, cplx c = 1.0);

Superoperator build_liouvillian(const GklsSpec& spec);

// max_j |Tr L[E_j]| over matrix units E_j.
double trace_annihilation_defect(const Superoperator& l);

Operator propagate(const Superoperator& l, const Operator& rho0, double t);

// Orthonormal traceless Hermitian basis of the full space (generalized
// Gell-Mann), Tr[G_a G_b] = delta_ab.
std::vector<Operator> traceless_hermitian_basis(const HilbertDims& dims);

struct Decomposition {
  GklsSpec spec;
  double residual = 0.0;        // Frobenius norm of the unexplained generator part
  double gram_condition = 0.0;  // condition number of the projection Gram matrix
};

// Least-squares projection of L onto -i[H,.] (H traceless) plus dissipator
// terms over the basis. Throws NumericalError when the Gram matrix is
// ill-conditioned beyond 1e12 or L is not trace-annihilating within 1e-6.
Decomposition decompose_generator(const Superoperator& l, const GksBasis& basis);

// A cross pair of jump operators (F_{m,a}, F_{m',a'}) with coefficient g.
struct CrossTerm {
  Operator first;
  Operator second;
  cplx coefficient = 0.0;
};

// sum (g F F'^dag - g^* F' F^dag) / (2i)
Operator lamb_shift(std::span<const CrossTerm> terms, const HilbertDims& dims);
// Raw causal form: sum g F[rho, F'^dag] - g^* [rho, F'] F^dag
Superoperator global_dissipator(std::span<const CrossTerm> terms, const HilbertDims& dims);
// Symmetric form: sum g (F rho F'^dag - 1/2{F F'^dag, rho}) + h.c. partner
Superoperator symmetric_cross_dissipator(std::span<const CrossTerm> terms, const HilbertDims& dims);

// Choi matrix sum_ij E_ij (x) Phi(E_ij) of a linear map.
Matrix choi_matrix(const Superoperator& map);
double min_choi_eigenvalue(const Superoperator& map);
// max_j |Tr Phi[E_j] - Tr E_j| over matrix units.
double trace_preservation_defect(const Superoperator& map);

struct SpecDifference {
  double hamiltonian = 0.0;   // Frobenius norm of the traceless H difference
  double kossakowski = 0.0;   // Frobenius norm of the Kossakowski difference
  double max_entry = 0.0;     // largest absolute Kossakowski entry difference
};
// Compares two specs whose bases hold the same (site, label) set, permuting
// to canonical order first.
SpecDifference spec_difference(const GklsSpec& a, const GklsSpec& b);

// Kossakowski matrix of `spec` re-indexed onto the (site, label) order of `target`.
Matrix kossakowski_in_basis(const GklsSpec& spec, const GksBasis& target);

void to_json(nlohmann::json& j, const GksBasis& basis);
void from_json(const nlohmann::json& j, GksBasis& basis);
void to_json(nlohmann::json& j, const GklsSpec& spec);
void from_json(const nlohmann::json& j, GklsSpec& spec);

}  // namespace collider
