// models.hpp - the four multipartite collision models and their predicted generators

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collider/collision.hpp"
#include "collider/fock.hpp"
#include "collider/gkls.hpp"

namespace collider {

// A schedule together with the master equation it should induce.
struct ModelBuild {
  CollisionSchedule schedule;
  GklsSpec predicted;
  std::vector<std::string> warnings;
};

// F (x) B, F on system site `site`, B on ancilla factor `ancilla` (counted
// from the first ancilla). Hermitian-conjugate partners are separate terms.
struct CouplingTerm {
  int site = 0;
  int ancilla = 0;
  Operator f;
  Operator b;
  std::string name;
};

// Adds the Hermitian-conjugate partner F^dag (x) B^dag of every term.
std::vector<CouplingTerm> with_conjugates(std::vector<CouplingTerm> terms);

// Kossakowski matrix (daggered convention, rows F_j, columns F_k^dag) of
// sum_uv table(u, v) F_u rho F_v, expanded over the basis.
Matrix no_dagger_to_kossakowski(const GksBasis& basis, const std::vector<CouplingTerm>& terms,
                                const Matrix& table);
// Inverse direction on the basis itself: T = c P, valid for adjoint-closed bases.
Matrix kossakowski_to_no_dagger(const GksBasis& basis, const Matrix& kossakowski);

// ---------------------------------------------------------------------------
// Multipartite collision model

struct McmAncillaSpec {
  int site1 = 0;
  std::string label1;
  cplx lambda1 = 1.0;
  int site2 = 0;
  std::string label2;
  cplx lambda2 = 1.0;
};

// One ancilla qubit per brick, colliding U1(dt/2) U2(dt) U1(dt/2) with
// H = lambda F (x) sigma_plus + h.c.
ModelBuild build_mcm_brick(const GksBasis& basis, const McmAncillaSpec& spec, double gamma);
ModelBuild build_mcm(const GksBasis& basis, const std::vector<McmAncillaSpec>& bricks, double gamma);

// One ancilla per positive eigenvalue of the target Kossakowski matrix, each
// colliding in a palindromic pattern over the involved basis elements,
// followed by a system stage carrying the target Hamiltonian.
ModelBuild compile_gkls_to_mcm(const GklsSpec& target);

// ---------------------------------------------------------------------------
// Cascade model

struct CascadeSpec {
  HilbertDims system;
  AncillaPrep prep;                 // one ancilla system shared by every site
  std::vector<CouplingTerm> terms;  // including h.c. partners; ancilla index ignored
  std::vector<int> order;           // collision order; empty = 0..M-1
  bool reversed = false;
  std::optional<Operator> h_s;
  double g_s = 1.0;
};

struct CascadeBuild : ModelBuild {
  std::vector<CrossTerm> cross_terms;  // causal pairs (first-collided site first)
  Operator lamb_shift;
  Superoperator raw_liouvillian;  // local dissipators + causal global dissipator, no H_LS split
};

CascadeBuild build_cascade(const CascadeSpec& spec, double gamma);

// ---------------------------------------------------------------------------
// Entangled-ancilla model (and the composite model as its one-site case)

struct EntangledModelSpec {
  HilbertDims system;
  AncillaPrep prep;
  std::vector<CouplingTerm> terms;  // including h.c. partners
  std::optional<Operator> h_e;      // entangling generator on all ancilla factors
  Coupling environment = Coupling::fast_environment;
  double mu = 0.0;
  double kappa = 0.0;
  double s = 0.5;
  std::optional<Operator> h_s;
  double g_s = 1.0;
};

struct EntangledCoefficients {
  Matrix table;              // gamma Tr[B_v B_u rho_E], coefficient of F_u rho F_v
  double max_asymmetry = 0;  // max |table(u,v) - table(v,u)| over pairs on different sites
  double max_mean = 0;       // max |Tr[B_u rho_E]|
};

// Ancilla state the interaction meets in the fast-environment limit.
Operator entangled_ancilla_state(const EntangledModelSpec& spec);
EntangledCoefficients predicted_entangled_coefficients(const EntangledModelSpec& spec, double gamma);

ModelBuild build_entangled(const EntangledModelSpec& spec, double gamma);

// Local collisions on one site, then a system stage exp(-i g_S H_S dt).
ModelBuild build_composite(const HilbertDims& system, int dissipating_site, const AncillaPrep& prep,
                           const std::vector<CouplingTerm>& local_collision, const Operator& h_s,
                           double g_s, double gamma);

// ---------------------------------------------------------------------------
// Two qubits coupled to two squeezed thermal bosonic modes

struct SqueezedExample {
  ModelBuild build;
  int cutoff = 0;
  double truncation_defect = 0.0;
  double gamma_down[2] = {0.0, 0.0};
  double gamma_up[2] = {0.0, 0.0};
  cplx gamma_c = 0.0;
  Matrix closed_form;  // Kossakowski matrix from the closed forms (standard basis)
  Matrix trace_form;   // from the brute-force trace formula
  double max_relative_error = 0.0;   // over the five closed-form coefficients
  double max_absolute_other = 0.0;   // entries predicted to vanish
};

// cutoff <= 0 selects fock::default_cutoff.
SqueezedExample squeezed_example(double r, double psi, double n1, double n2, double gamma, int cutoff = 0);

// ---------------------------------------------------------------------------
// Single-qubit amplitude damping with optional free Hamiltonian

enum class Splitting { joint, system_after, system_before };

std::string to_string(Splitting s);

// joint: exp(-i (g_S H_S + g_I H_I) dt); system_after: U_S U_I; system_before: U_I U_S.
ModelBuild amplitude_damping(double gamma, const std::optional<Operator>& h_s = std::nullopt,
                             double g_s = 1.0, Splitting splitting = Splitting::joint);

}  // namespace collider
