// experiments.cpp

#include "collider/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace collider {

cplx superop_coefficient(const Superoperator& l, const Operator& left, const Operator& right) {
  // rho -> A rho B is B^T (x) A under column stacking.
  const Matrix basis = Eigen::kroneckerProduct(right.data().transpose(), left.data()).eval();
  const double norm2 = basis.squaredNorm();
  if (norm2 == 0.0) throw std::invalid_argument("superoperator coefficient of a vanishing term");
  return (basis.conjugate().cwiseProduct(l.data())).sum() / norm2;
}

CascadeComparison compare_cascade_to_mcm(double gamma, cplx lambda1, cplx lambda2, const std::vector<double>& dt_sequence) {
  const HilbertDims system{2, 2};
  const GksBasis basis = GksBasis::standard(system);

  CascadeSpec cs;
  cs.system = system;
  cs.prep = AncillaPrep::ground(HilbertDims{2});
  cs.terms = with_conjugates({{0, 0, lambda1 * pauli::minus(), pauli::plus(), "lambda1 sigma1_minus sigma_E_plus"},
                              {1, 0, lambda2 * pauli::minus(), pauli::plus(), "lambda2 sigma2_minus sigma_E_plus"}});
  const CascadeBuild cascade = build_cascade(cs, gamma);
  const ModelBuild mcm = build_mcm_brick(basis, {0, "minus", lambda1, 1, "minus", lambda2}, gamma);

  CascadeSpec countered = cs;
  countered.h_s = -1.0 * cascade.lamb_shift;
  countered.g_s = 1.0;
  const CascadeBuild counter_build = build_cascade(countered, gamma);

  CascadeComparison out;
  out.cascade = extract_generator(cascade.schedule, dt_sequence, basis);
  out.mcm = extract_generator(mcm.schedule, dt_sequence, basis);
  out.countered = extract_generator(counter_build.schedule, dt_sequence, basis);

  const Operator f1 = embed_local(pauli::minus(), 0, system);
  const Operator f2 = embed_local(pauli::minus(), 1, system);
  out.lamb_shift_closed_form =
      (gamma * lambda1 * std::conj(lambda2)) * (f1 * f2.adjoint()) -
      (gamma * std::conj(lambda1) * lambda2) * (f1.adjoint() * f2);
  out.lamb_shift_closed_form *= 1.0 / (2.0 * kI);
  out.lamb_shift_predicted = cascade.lamb_shift;

  const Superoperator diff = out.cascade.generator - out.mcm.generator;
  out.lamb_shift_extracted = decompose_generator(diff, basis).spec.hamiltonian;
  out.difference_error = (diff - hamiltonian_superop(out.lamb_shift_closed_form)).data().norm();
  out.counter_error = (out.countered.generator - out.mcm.generator).data().norm();
  out.cascade_raw_error = (out.cascade.generator - cascade.raw_liouvillian).data().norm();
  out.cascade_predicted_error = (out.cascade.generator - build_liouvillian(cascade.predicted)).data().norm();
  out.mcm_predicted_error = (out.mcm.generator - build_liouvillian(mcm.predicted)).data().norm();

  const Operator id = Operator::identity(system);
  const Operator right = f2.adjoint() * f1;  // rho F2^dag F1
  const Operator left = f1.adjoint() * f2;   // F1^dag F2 rho
  out.missing_cascade = {superop_coefficient(out.cascade.generator, id, right),
                         superop_coefficient(out.cascade.generator, left, id)};
  out.missing_mcm = {superop_coefficient(out.mcm.generator, id, right),
                     superop_coefficient(out.mcm.generator, left, id)};
  return out;
}

EntangledModelSpec entangled_qubit_pair(Coupling environment, double mu_or_kappa, double s) {
  EntangledModelSpec spec;
  spec.system = HilbertDims{2, 2};
  spec.prep = AncillaPrep::ground(HilbertDims{2, 2});
  spec.terms = with_conjugates({{0, 0, pauli::minus(), pauli::plus(), "sigma1_minus sigma_E1_plus"},
                                {1, 1, pauli::minus(), pauli::plus(), "sigma2_minus sigma_E2_plus"}});
  spec.h_e = kron(pauli::x(), pauli::x());
  spec.environment = environment;
  if (environment == Coupling::slow_environment) {
    spec.kappa = mu_or_kappa;
    spec.s = s;
  } else {
    spec.mu = mu_or_kappa;
  }
  return spec;
}

SlowRegimeScaling slow_regime_scaling(double gamma, double kappa, double s, const std::vector<double>& dt_sequence) {
  const ModelBuild build = build_entangled(entangled_qubit_pair(Coupling::slow_environment, kappa, s), gamma);
  const HilbertDims& system = build.schedule.system;
  const GksBasis basis = GksBasis::standard(system);
  const Superoperator id = Superoperator::identity(system);

  SlowRegimeScaling out;
  for (double dt : dt_sequence) {
    const Superoperator phi = linearize_map(build.schedule, dt);
    const Matrix c = decompose_generator(Superoperator(system, (phi.data() - id.data()) / dt), basis).spec.kossakowski;
    double cross = 0.0;
    double local = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double v = std::abs(c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
        if (basis.element(j).site == basis.element(k).site) {
          local = std::max(local, v);
        } else {
          cross = std::max(cross, v);
        }
      }
    }
    out.dt.push_back(dt);
    out.max_cross.push_back(cross);
    out.max_local.push_back(local);
    out.ratio.push_back(local > 0.0 ? cross / local : 0.0);
  }
  out.monotone = out.ratio.size() >= 2;
  for (std::size_t i = 1; i < out.ratio.size(); ++i) {
    if (!(out.ratio[i] < out.ratio[i - 1])) out.monotone = false;
  }
  out.fit = fit_power_law(out.dt, out.ratio);
  return out;
}

SplittingResult run_splitting_equivalence(double gamma, const Operator& h_s, double g_s,
                                          const std::vector<double>& dt_sequence) {
  SplittingResult out;
  const Splitting kinds[3] = {Splitting::joint, Splitting::system_after, Splitting::system_before};
  for (int k = 0; k < 3; ++k) {
    out.reports[static_cast<std::size_t>(k)] =
        extract_generator(amplitude_damping(gamma, h_s, g_s, kinds[k]).schedule, dt_sequence);
  }
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      out.max_pairwise = std::max(
          out.max_pairwise, (out.reports[a].generator.data() - out.reports[b].generator.data()).norm());
      out.finite_gap = std::max(out.finite_gap, (out.reports[a].finite_generators.back().data() -
                                                 out.reports[b].finite_generators.back().data())
                                                    .norm());
    }
  }
  out.gap_constant = out.finite_gap / dt_sequence.back();
  return out;
}

}  // namespace collider
