// experiments.hpp - composite verification experiments built on the model library

#pragma once

#include <array>
#include <vector>

#include "collider/collision.hpp"
#include "collider/extrapolation.hpp"
#include "collider/models.hpp"

namespace collider {

// Two qubits, F_j = sigma_j^-, cascade vs MCM brick.
struct CascadeComparison {
  ExtractionReport cascade;
  ExtractionReport mcm;
  ExtractionReport countered;        // cascade plus a -H_LS system stage
  Operator lamb_shift_closed_form;   // gamma (l1 l2^* F1 F2^dag - l1^* l2 F1^dag F2) / (2i)
  Operator lamb_shift_predicted;     // from the cascade coefficient table
  Operator lamb_shift_extracted;     // Hamiltonian part of L_cas - L_mcm
  double difference_error = 0.0;     // ||(L_cas - L_mcm) + i[H_LS, .]||_F
  double counter_error = 0.0;        // ||L_countered - L_mcm||_F
  double cascade_raw_error = 0.0;    // ||L_cas - (local + causal global dissipator)||_F
  double cascade_predicted_error = 0.0;
  double mcm_predicted_error = 0.0;
  // Coefficients of rho F2^dag F1 and F1^dag F2 rho (cascade, MCM).
  std::array<cplx, 2> missing_cascade{};
  std::array<cplx, 2> missing_mcm{};
};

CascadeComparison compare_cascade_to_mcm(double gamma, cplx lambda1, cplx lambda2, const std::vector<double>& dt_sequence);

// Coefficient of the superoperator rho -> left rho right in L, by
// Hilbert-Schmidt projection.
cplx superop_coefficient(const Superoperator& l, const Operator& left, const Operator& right);

// Two qubits with entangling ancillas in the slow-environment regime.
struct SlowRegimeScaling {
  std::vector<double> dt;
  std::vector<double> max_cross;
  std::vector<double> max_local;
  std::vector<double> ratio;
  bool monotone = false;
  PowerLawFit fit;
};

SlowRegimeScaling slow_regime_scaling(double gamma, double kappa, double s, const std::vector<double>& dt_sequence);

// The entangled two-qubit model used by the slow-environment experiment:
// ground-state ancillas, H_E = sigma_x sigma_x, H_I = sum_m sigma_m^- sigma_Em^+ + h.c.
EntangledModelSpec entangled_qubit_pair(Coupling environment, double mu_or_kappa, double s = 0.5);

struct SplittingResult {
  std::array<ExtractionReport, 3> reports;  // joint, system_after, system_before
  double max_pairwise = 0.0;                // between extrapolated generators
  double finite_gap = 0.0;                  // largest pairwise gap at the smallest dt
  double gap_constant = 0.0;                // finite_gap / dt_min
};

SplittingResult run_splitting_equivalence(double gamma, const Operator& h_s, double g_s,
                                          const std::vector<double>& dt_sequence);

}  // namespace collider
