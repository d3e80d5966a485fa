// collision.hpp - collision schedules, step maps and generator extraction

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collider/gkls.hpp"
#include "collider/operator.hpp"

namespace collider {

// How a generator's coupling constant depends on the timestep.
enum class Coupling {
  interaction,       // g_I = sqrt(gamma / dt)
  system,            // g_S, fixed
  fast_environment,  // g_E = mu / dt
  slow_environment,  // g_E = kappa * dt^(-s)
};

std::string to_string(Coupling c);
Coupling coupling_from_string(const std::string& s);

struct ScalingRule {
  double gamma = 1.0;
  double g_s = 1.0;
  double mu = 0.0;
  double kappa = 0.0;
  double s = 0.5;

  double coupling(Coupling c, double dt) const;
  void validate() const;
};

// One Hermitian generator acting on a set of joint factors (system sites
// first, then ancillas; indices ascending).
struct GeneratorTerm {
  Coupling coupling = Coupling::interaction;
  std::vector<int> targets;
  Operator generator;  // dims = joint.select(targets)
  std::string name;    // registry reference used in exports
  double weight = 1.0;
};

// exp(-i sum_t g_t weight_t H_t * fraction * dt) on the union of the term targets.
struct Stage {
  std::string label;
  std::vector<GeneratorTerm> terms;
  double fraction = 1.0;

  std::vector<int> targets() const;
};

struct PrepComponent {
  double weight = 1.0;
  Operator state;                 // on the ancilla space
  std::optional<Operator> h_e;    // optional U_E(mu) = exp(-i mu H_E) applied to state
  double mu = 0.0;
};

// Ancilla state re-prepared every timestep: sum_k p_k U_k rho_k U_k^dag.
struct AncillaPrep {
  HilbertDims dims;
  std::vector<PrepComponent> components;

  static AncillaPrep ground(const HilbertDims& dims);
  static AncillaPrep explicit_state(const Operator& rho);
  static AncillaPrep entangled(const HilbertDims& dims, const Operator& h_e, double mu);
  static AncillaPrep mixture(std::vector<PrepComponent> components);

  Operator state() const;
  void validate(double tol = kStructuralTol) const;
};

struct CollisionSchedule {
  HilbertDims system;
  AncillaPrep prep;
  std::vector<Stage> stages;  // in order of application
  ScalingRule rule;
  std::vector<std::string> factor_names;  // optional, one per joint factor

  HilbertDims joint() const { return system.concat(prep.dims); }
  int system_factors() const { return static_cast<int>(system.size()); }
  std::string factor_name(int factor) const;
  void validate() const;
};

// The unitary of one stage at a given timestep, on its own targets.
Operator stage_unitary(const CollisionSchedule& schedule, const Stage& stage, double dt);

// Largest g_I * dt over the schedule; the map is only defined when it is < 1.
double interaction_strength(const CollisionSchedule& schedule, double dt);

// phi_dt as a superoperator on the system, built from a pure-state
// decomposition of the ancilla state.
Superoperator linearize_map(const CollisionSchedule& schedule, double dt);

Operator step_map(const CollisionSchedule& schedule, const Operator& rho, double dt);
std::vector<Operator> run_trajectory(const CollisionSchedule& schedule, const Operator& rho0, double dt,
                                     int n_steps);

// Mean-field drift: largest Frobenius norm of the traceless part of
// Tr_E[H_I (I (x) rho_E)] over the interaction terms. Zero when every
// interaction has zero mean on the ancilla state it meets.
double mean_field_drift(const CollisionSchedule& schedule, double dt);

inline constexpr double kDriftTolerance = 1e-10;

struct DtSample {
  double dt = 0.0;
  double frobenius_deviation = 0.0;  // ||L_dt - L_extrap||_F
  double trace_defect = 0.0;         // of phi_dt
  double min_choi_eig = 0.0;         // of phi_dt
};

struct ExtractionReport {
  Superoperator generator;  // extrapolated limit
  Decomposition decomposition;
  std::vector<DtSample> samples;
  std::vector<Superoperator> finite_generators;  // L_dt, same order as samples
  double order = 0.0;
  double order_r2 = 0.0;
  bool order_flagged = false;
  bool monotone = true;
  double drift = 0.0;
  std::vector<std::string> warnings;

  double residual() const { return decomposition.residual; }
};

// gamma * dt in {2^-4, ..., 2^-10} (dt itself when gamma is zero).
std::vector<double> default_dt_sequence(double gamma);

ExtractionReport extract_generator(const CollisionSchedule& schedule, const std::vector<double>& dt_sequence,
                                   const GksBasis& basis);
ExtractionReport extract_generator(const CollisionSchedule& schedule, const std::vector<double>& dt_sequence);

std::string report_csv(const ExtractionReport& report);
void to_json(nlohmann::json& j, const ExtractionReport& report);

// Fixed 17-significant-digit formatting used by every emitted number.
std::string format_double(double x);

}  // namespace collider
