#include <gtest/gtest.h>

#include "collider/experiments.hpp"
#include "collider/models.hpp"
#include "collider/random_ops.hpp"
#include "oracles.hpp"

using namespace collider;

namespace {

std::vector<std::pair<std::string, CollisionSchedule>> sample_schedules() {
  std::vector<std::pair<std::string, CollisionSchedule>> out;
  out.emplace_back("amplitude_damping", amplitude_damping(0.8, pauli::z(), 0.6).schedule);
  out.emplace_back("system_before", amplitude_damping(1.0, pauli::x(), 0.4, Splitting::system_before).schedule);
  const GksBasis basis = GksBasis::standard(HilbertDims{2, 2});
  out.emplace_back("mcm_brick", build_mcm_brick(basis, {0, "minus", {0.7, 0.2}, 1, "plus", 1.0}, 1.0).schedule);

  CascadeSpec cs;
  cs.system = HilbertDims{2, 2};
  cs.prep = AncillaPrep::explicit_state(0.7 * pauli::ground() + 0.3 * pauli::excited());
  cs.terms = with_conjugates({{0, 0, pauli::minus(), pauli::plus(), "a"}, {1, 0, pauli::minus(), pauli::plus(), "b"}});
  cs.h_s = kron(pauli::z(), pauli::x());
  out.emplace_back("cascade", build_cascade(cs, 1.0).schedule);

  Rng rng(21);
  EntangledModelSpec es = entangled_qubit_pair(Coupling::fast_environment, 0.5);
  es.prep = random_parity_prep(rng);
  out.emplace_back("entangled_fast", build_entangled(es, 1.0).schedule);
  out.emplace_back("entangled_slow", build_entangled(entangled_qubit_pair(Coupling::slow_environment, 1.0, 0.5), 1.0).schedule);
  return out;
}

}  // namespace

TEST(StepMap, LinearizedMapMatchesLiteralJointEvolution) {
  Rng rng(22);
  for (const auto& [name, s] : sample_schedules()) {
    for (double dt : {0.05, 0.01}) {
      const Operator rho = random_density(s.system, rng);
      const Matrix expected = oracle::step(s, rho.data(), dt);
      EXPECT_NEAR((linearize_map(s, dt).apply(rho).data() - expected).norm(), 0.0, 1e-12) << name << " dt=" << dt;
      EXPECT_NEAR((step_map(s, rho, dt).data() - expected).norm(), 0.0, 1e-12) << name << " dt=" << dt;
    }
  }
}

TEST(StepMap, EveryMapIsCptp) {
  for (const auto& [name, s] : sample_schedules()) {
    for (double dt : {0.0625, 0.01, 0.001}) {
      const Superoperator phi = linearize_map(s, dt);
      EXPECT_GE(min_choi_eigenvalue(phi), -1e-9) << name;
      EXPECT_LE(trace_preservation_defect(phi), 1e-12) << name;
    }
  }
}

TEST(StepMap, StageUnitaryMatchesTaylor) {
  const CollisionSchedule s = amplitude_damping(0.8, pauli::z(), 0.6).schedule;
  const double dt = 0.03;
  const Stage& stage = s.stages.front();
  // Targets {S0, E0} coincide with their positions inside the stage space.
  ASSERT_EQ(stage.targets(), (std::vector<int>{0, 1}));
  Matrix h = Matrix::Zero(4, 4);
  for (const GeneratorTerm& t : stage.terms) {
    h += oracle::coupling(s.rule, t.coupling, dt) * t.weight * oracle::embed(t.generator.data(), t.targets, {2, 2});
  }
  const Matrix expected = oracle::expm(cplx(0, -1) * stage.fraction * dt * h);
  EXPECT_NEAR((stage_unitary(s, stage, dt).data() - expected).norm(), 0.0, 1e-13);
}

TEST(StepMap, PerturbativeRegimeIsEnforced) {
  const CollisionSchedule s = amplitude_damping(1.0).schedule;
  EXPECT_NEAR(interaction_strength(s, 0.25), 0.5, 1e-15);
  EXPECT_THROW(linearize_map(s, 1.0), std::domain_error);
  EXPECT_THROW(linearize_map(s, 2.0), std::domain_error);
  EXPECT_THROW(linearize_map(s, 0.0), std::invalid_argument);
  EXPECT_THROW(linearize_map(s, -0.1), std::invalid_argument);
}

TEST(StepMap, ScheduleValidation) {
  CollisionSchedule s = amplitude_damping(1.0).schedule;
  s.stages.front().terms.front().generator = Operator(HilbertDims{2, 2}, kron(pauli::minus(), pauli::plus()).data());
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = amplitude_damping(1.0).schedule;
  s.stages.front().terms.front().targets = {0, 5};
  EXPECT_THROW(s.validate(), std::exception);
  s = amplitude_damping(1.0).schedule;
  s.stages.front().fraction = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = amplitude_damping(1.0).schedule;
  s.prep = AncillaPrep::explicit_state(Operator(HilbertDims{2}, 2.0 * pauli::ground().data()));
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Trajectory, RepeatsTheStepMap) {
  Rng rng(23);
  const CollisionSchedule s = amplitude_damping(1.0, pauli::z()).schedule;
  const Operator rho0 = random_density(s.system, rng);
  const auto states = run_trajectory(s, rho0, 0.01, 20);
  ASSERT_EQ(states.size(), 21u);
  EXPECT_EQ((states.front().data() - rho0.data()).norm(), 0.0);
  Matrix rho = rho0.data();
  for (int n = 0; n < 20; ++n) rho = oracle::step(s, rho, 0.01);
  EXPECT_NEAR((states.back().data() - rho).norm(), 0.0, 1e-12);
  for (const Operator& r : states) EXPECT_TRUE(r.is_density_matrix(1e-10));
}

TEST(Extraction, AmplitudeDampingRate) {
  for (double gamma : {0.5, 2.0}) {
    const ModelBuild b = amplitude_damping(gamma);
    const ExtractionReport r = extract_generator(b.schedule, default_dt_sequence(gamma), b.predicted.basis);
    const GksBasis& basis = r.decomposition.spec.basis;
    const auto m = static_cast<Eigen::Index>(basis.index(0, "minus"));
    EXPECT_NEAR(r.decomposition.spec.kossakowski(m, m).real(), gamma, 1e-3 * gamma);
    EXPECT_NEAR(r.order, 1.0, 0.1);
    EXPECT_GE(r.order_r2, 0.95);
    EXPECT_TRUE(r.monotone);
    EXPECT_EQ(r.samples.size(), 7u);
    EXPECT_NEAR(r.samples.front().dt, 0.0625 / gamma, 1e-15);
  }
}

TEST(Extraction, VanishingDeviationWarnsOrderUndefined) {
  // No stages: phi_dt is the identity at every dt, so L_dt has no error term.
  CollisionSchedule s;
  s.system = HilbertDims{2};
  s.prep = AncillaPrep::ground(HilbertDims{2});
  const ExtractionReport r = extract_generator(s, default_dt_sequence(1.0));
  bool warned = false;
  for (const auto& w : r.warnings) warned = warned || w.find("order") != std::string::npos;
  EXPECT_TRUE(warned);
  EXPECT_EQ(r.generator.data().norm(), 0.0);
}

TEST(Extraction, HamiltonianScheduleGivesCommutator) {
  CollisionSchedule s;
  s.system = HilbertDims{2};
  s.prep = AncillaPrep::ground(HilbertDims{2});
  s.rule.g_s = 0.7;
  s.stages.push_back({"U_S", {{Coupling::system, {0}, pauli::x(), "sigma_x", 1.0}}, 1.0});
  const ExtractionReport r = extract_generator(s, default_dt_sequence(1.0));
  EXPECT_NEAR((r.generator.data() - hamiltonian_superop(0.7 * pauli::x()).data()).norm(), 0.0, 1e-9);
  EXPECT_NEAR(r.order, 1.0, 0.1);
}

TEST(Extraction, MeanFieldDriftIsReported) {
  CollisionSchedule s = amplitude_damping(1.0).schedule;
  EXPECT_LE(mean_field_drift(s, 0.01), 1e-15);
  // An ancilla in |+> gives <sigma_plus> != 0.
  Matrix plus_state = Matrix::Constant(2, 2, 0.5);
  s.prep = AncillaPrep::explicit_state(Operator(HilbertDims{2}, plus_state));
  EXPECT_GT(mean_field_drift(s, 0.01), 1e-3);
  const ExtractionReport r = extract_generator(s, default_dt_sequence(1.0));
  bool warned = false;
  for (const auto& w : r.warnings) warned = warned || w.find("drift") != std::string::npos;
  EXPECT_TRUE(warned);
}

TEST(Extraction, RejectsBadDtSequences) {
  const CollisionSchedule s = amplitude_damping(1.0).schedule;
  EXPECT_THROW(extract_generator(s, {0.01, 0.005}), std::invalid_argument);
  EXPECT_THROW(extract_generator(s, {0.01, 0.02, 0.005}), std::invalid_argument);
  EXPECT_THROW(extract_generator(s, {0.01, 0.005, 0.0}), std::invalid_argument);
}

TEST(Extraction, ReportCsvFormat) {
  const ModelBuild b = amplitude_damping(1.0);
  const ExtractionReport r = extract_generator(b.schedule, {0.0625, 0.03125, 0.015625});
  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dt,frobenius_deviation,trace_defect,min_choi_eig");
  EXPECT_NE(csv.find("0.0625,"), std::string::npos);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}
