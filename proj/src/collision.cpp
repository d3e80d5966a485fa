// collision.cpp - timestep maps of collision schedules and their small-dt limit

#include "collider/collision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "collider/extrapolation.hpp"

namespace collider {

std::string to_string(Coupling c) {
  switch (c) {
    case Coupling::interaction: return "interaction";
    case Coupling::system: return "system";
    case Coupling::fast_environment: return "fast_environment";
    case Coupling::slow_environment: return "slow_environment";
  }
  return "unknown";
}

Coupling coupling_from_string(const std::string& s) {
  if (s == "interaction") return Coupling::interaction;
  if (s == "system") return Coupling::system;
  if (s == "fast_environment") return Coupling::fast_environment;
  if (s == "slow_environment") return Coupling::slow_environment;
  throw std::invalid_argument("unknown coupling kind '" + s + "'");
}

double ScalingRule::coupling(Coupling c, double dt) const {
  switch (c) {
    case Coupling::interaction: return std::sqrt(gamma / dt);
    case Coupling::system: return g_s;
    case Coupling::fast_environment: return mu / dt;
    case Coupling::slow_environment: return kappa * std::pow(dt, -s);
  }
  return 0.0;
}

void ScalingRule::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and >= 0");
  if (!std::isfinite(g_s)) throw std::invalid_argument("g_S must be finite");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (!std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("slow-environment exponent s must lie in (0, 1)");
}

std::vector<int> Stage::targets() const {
  std::vector<int> out;
  for (const GeneratorTerm& t : terms) out.insert(out.end(), t.targets.begin(), t.targets.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Ancilla preparation

AncillaPrep AncillaPrep::ground(const HilbertDims& dims) {
  return {dims, {{1.0, Operator::projector(dims, 0), std::nullopt, 0.0}}};
}

AncillaPrep AncillaPrep::explicit_state(const Operator& rho) {
  return {rho.dims(), {{1.0, rho, std::nullopt, 0.0}}};
}

AncillaPrep AncillaPrep::entangled(const HilbertDims& dims, const Operator& h_e, double mu) {
  return {dims, {{1.0, Operator::projector(dims, 0), h_e, mu}}};
}

AncillaPrep AncillaPrep::mixture(std::vector<PrepComponent> components) {
  if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
  AncillaPrep prep{components.front().state.dims(), std::move(components)};
  return prep;
}

Operator AncillaPrep::state() const {
  Operator rho = Operator::zero(dims);
  for (const PrepComponent& c : components) {
    if (c.h_e) {
      const Operator u = expm(*c.h_e, -kI * c.mu);
      rho += c.weight * (u * c.state * u.adjoint());
    } else {
      rho += c.weight * c.state;
    }
  }
  return hermitian_part(rho);
}

void AncillaPrep::validate(double tol) const {
  if (components.empty()) throw std::invalid_argument("ancilla preparation has no components");
  double total = 0.0;
  for (const PrepComponent& c : components) {
    if (!(c.weight >= 0.0)) throw std::invalid_argument("mixture weights must be non-negative");
    if (c.state.dims() != dims) throw DimensionError("ancilla component does not match ancilla dims");
    if (c.h_e && (c.h_e->dims() != dims || !c.h_e->is_hermitian(tol))) {
      throw std::invalid_argument("ancilla entangling generator must be Hermitian on the ancilla space");
    }
    if (!std::isfinite(c.mu)) throw std::invalid_argument("mu must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument("mixture weights must sum to 1");
  if (!state().is_density_matrix(tol)) throw std::invalid_argument("ancilla state is not a density matrix");
}

// ---------------------------------------------------------------------------
// Schedules

std::string CollisionSchedule::factor_name(int factor) const {
  if (!factor_names.empty()) return factor_names.at(static_cast<std::size_t>(factor));
  const int m = system_factors();
  return factor < m ? "S" + std::to_string(factor) : "E" + std::to_string(factor - m);
}

void CollisionSchedule::validate() const {
  rule.validate();
  prep.validate();
  const HilbertDims j = joint();
  if (!factor_names.empty() && factor_names.size() != j.size()) {
    throw std::invalid_argument("factor_names must name every joint factor");
  }
  for (const Stage& stage : stages) {
    if (!(stage.fraction > 0.0) || !std::isfinite(stage.fraction)) {
      throw std::invalid_argument("stage '" + stage.label + "' needs a positive duration fraction");
    }
    if (stage.terms.empty()) throw std::invalid_argument("stage '" + stage.label + "' has no terms");
    for (const GeneratorTerm& t : stage.terms) {
      if (t.targets.empty() || !std::is_sorted(t.targets.begin(), t.targets.end()) ||
          std::adjacent_find(t.targets.begin(), t.targets.end()) != t.targets.end()) {
        throw std::invalid_argument("stage '" + stage.label + "': term targets must be distinct and ascending");
      }
      for (int f : t.targets) {
        if (f < 0 || static_cast<std::size_t>(f) >= j.size()) {
          throw DimensionError("stage '" + stage.label + "' targets factor " + std::to_string(f) +
                               " outside " + to_string(j));
        }
      }
      if (t.generator.dims() != j.select(t.targets)) {
        throw DimensionError("stage '" + stage.label + "': generator dims " + to_string(t.generator.dims()) +
                             " do not match its targets");
      }
      if (!t.generator.is_hermitian()) {
        throw std::invalid_argument("stage '" + stage.label + "': generator is not Hermitian");
      }
    }
  }
}

Operator stage_unitary(const CollisionSchedule& schedule, const Stage& stage, double dt) {
  const HilbertDims j = schedule.joint();
  const std::vector<int> targets = stage.targets();
  const HilbertDims local = j.select(targets);
  Operator h = Operator::zero(local);
  for (const GeneratorTerm& t : stage.terms) {
    std::vector<int> pos;
    for (int f : t.targets) {
      pos.push_back(static_cast<int>(std::find(targets.begin(), targets.end(), f) - targets.begin()));
    }
    h += (schedule.rule.coupling(t.coupling, dt) * t.weight) * embed(t.generator, pos, local);
  }
  Operator u = expm(h, -kI * (stage.fraction * dt));
  if (!u.is_unitary()) throw NumericalError("stage '" + stage.label + "' unitary fails the unitarity check");
  return u;
}

double interaction_strength(const CollisionSchedule& schedule, double dt) {
  double worst = 0.0;
  for (const Stage& stage : schedule.stages) {
    for (const GeneratorTerm& t : stage.terms) {
      if (t.coupling == Coupling::interaction) {
        worst = std::max(worst, schedule.rule.coupling(t.coupling, dt) * dt);
      }
    }
  }
  return worst;
}

namespace {

bool on_ancillas(const CollisionSchedule& s, const Stage& stage) {
  const auto t = stage.targets();
  return t.front() >= s.system_factors();
}

bool on_system(const CollisionSchedule& s, const Stage& stage) {
  const auto t = stage.targets();
  return t.back() < s.system_factors();
}

std::vector<int> shifted(const std::vector<int>& targets, int by) {
  std::vector<int> out;
  for (int f : targets) out.push_back(f - by);
  return out;
}

void check_dt(const CollisionSchedule& schedule, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive and finite");
  const double strength = interaction_strength(schedule, dt);
  if (!std::isfinite(strength) || strength >= 1.0) {
    throw std::domain_error("g_I * dt = " + format_double(strength) + " leaves the perturbative regime (must be < 1)");
  }
}

// Ancilla state after the leading ancilla-only stages, and the index of the
// first stage not folded into it.
std::pair<Operator, std::size_t> prepared_ancilla(const CollisionSchedule& schedule, double dt) {
  Operator rho_e = schedule.prep.state();
  std::size_t first = 0;
  const int m = schedule.system_factors();
  while (first < schedule.stages.size() && on_ancillas(schedule, schedule.stages[first])) {
    const Stage& stage = schedule.stages[first];
    const Operator u = embed(stage_unitary(schedule, stage, dt), shifted(stage.targets(), m), schedule.prep.dims);
    rho_e = u * rho_e * u.adjoint();
    ++first;
  }
  return {hermitian_part(rho_e), first};
}

}  // namespace

Superoperator linearize_map(const CollisionSchedule& schedule, double dt) {
  schedule.validate();
  check_dt(schedule, dt);
  const HilbertDims joint = schedule.joint();
  const auto ds = static_cast<Eigen::Index>(schedule.system.total());
  const auto de = static_cast<Eigen::Index>(schedule.prep.dims.total());
  const auto dj = ds * de;

  auto [rho_e, first] = prepared_ancilla(schedule, dt);
  std::size_t last = schedule.stages.size();
  while (last > first && on_system(schedule, schedule.stages[last - 1])) --last;

  struct Local {
    Matrix u;
    std::vector<int> targets;
  };
  std::vector<Local> middle;
  for (std::size_t k = first; k < last; ++k) {
    const Stage& stage = schedule.stages[k];
    middle.push_back({stage_unitary(schedule, stage, dt).data(), stage.targets()});
  }
  Matrix post = Matrix::Identity(ds, ds);
  for (std::size_t k = last; k < schedule.stages.size(); ++k) {
    const Stage& stage = schedule.stages[k];
    post = embed(stage_unitary(schedule, stage, dt), stage.targets(), schedule.system).data() * post;
  }

  // rho_E = sum_k p_k |psi_k><psi_k|
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_e.data());
  std::vector<Vector> weighted;
  for (Eigen::Index k = 0; k < de; ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-15) weighted.push_back(std::sqrt(p) * es.eigenvectors().col(k));
  }

  // Q(s + i ds, s' + j ds) = phi(|i><j|)(s, s') before the trailing system stages.
  Matrix q = Matrix::Zero(ds * ds, ds * ds);
  const std::size_t chunk = 64;
  for (std::size_t k0 = 0; k0 < weighted.size(); k0 += chunk) {
    const std::size_t nk = std::min(chunk, weighted.size() - k0);
    Matrix states = Matrix::Zero(dj, ds * static_cast<Eigen::Index>(nk));
    for (std::size_t k = 0; k < nk; ++k) {
      for (Eigen::Index i = 0; i < ds; ++i) {
        states.col(static_cast<Eigen::Index>(k) * ds + i).segment(i * de, de) = weighted[k0 + k];
      }
    }
    for (const Local& l : middle) apply_local(states, l.u, l.targets, joint);
    for (std::size_t k = 0; k < nk; ++k) {
      Eigen::Map<const Matrix> g(states.col(static_cast<Eigen::Index>(k) * ds).data(), de, ds * ds);
      q.noalias() += g.transpose() * g.conjugate();
    }
  }

  Matrix phi(ds * ds, ds * ds);
  for (Eigen::Index j = 0; j < ds; ++j) {
    for (Eigen::Index i = 0; i < ds; ++i) {
      const Matrix image = post * q.block(i * ds, j * ds, ds, ds) * post.adjoint();
      phi.col(i + j * ds) = vectorize(image);
    }
  }
  return Superoperator(schedule.system, std::move(phi));
}

Operator step_map(const CollisionSchedule& schedule, const Operator& rho, double dt) {
  if (rho.dims() != schedule.system) throw DimensionError("state does not live on the schedule's system");
  return linearize_map(schedule, dt).apply(rho);
}

std::vector<Operator> run_trajectory(const CollisionSchedule& schedule, const Operator& rho0, double dt,
                                     int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  if (rho0.dims() != schedule.system) throw DimensionError("state does not live on the schedule's system");
  std::vector<Operator> out{rho0};
  if (n_steps == 0) return out;
  const Superoperator phi = linearize_map(schedule, dt);
  Vector v = vectorize(rho0.data());
  for (int n = 0; n < n_steps; ++n) {
    v = phi.data() * v;
    out.emplace_back(rho0.dims(), devectorize(v, rho0.dim()));
  }
  return out;
}

double mean_field_drift(const CollisionSchedule& schedule, double dt) {
  schedule.validate();
  const auto [rho_e, first] = prepared_ancilla(schedule, dt);
  const int m = schedule.system_factors();
  double worst = 0.0;
  for (std::size_t k = first; k < schedule.stages.size(); ++k) {
    for (const GeneratorTerm& t : schedule.stages[k].terms) {
      if (t.targets.front() >= m || t.targets.back() < m) continue;
      std::vector<int> sys_pos;
      std::vector<int> anc;
      for (std::size_t p = 0; p < t.targets.size(); ++p) {
        if (t.targets[p] < m) {
          sys_pos.push_back(static_cast<int>(p));
        } else {
          anc.push_back(t.targets[p] - m);
        }
      }
      const Operator rho_local = partial_trace(rho_e, anc);
      const HilbertDims local = t.generator.dims();
      const Operator env = kron(Operator::identity(local.select(sys_pos)), rho_local);
      Operator mean = partial_trace(t.generator * env, sys_pos);
      Matrix traceless = mean.data();
      traceless.diagonal().array() -= mean.trace() / static_cast<double>(mean.dim());
      worst = std::max(worst, t.weight * traceless.norm());
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Generator extraction

std::vector<double> default_dt_sequence(double gamma) {
  std::vector<double> out;
  const double unit = gamma > 0.0 ? 1.0 / gamma : 1.0;
  for (int e = 4; e <= 10; ++e) out.push_back(std::ldexp(unit, -e));
  return out;
}

ExtractionReport extract_generator(const CollisionSchedule& schedule, const std::vector<double>& dt_sequence) {
  return extract_generator(schedule, dt_sequence, GksBasis::standard(schedule.system));
}

ExtractionReport extract_generator(const CollisionSchedule& schedule, const std::vector<double>& dt_sequence,
                                   const GksBasis& basis) {
  if (dt_sequence.size() < 3) throw std::invalid_argument("dt sequence needs at least 3 values");
  for (std::size_t i = 0; i < dt_sequence.size(); ++i) {
    if (!(dt_sequence[i] > 0.0)) throw std::invalid_argument("dt values must be positive");
    if (i > 0 && !(dt_sequence[i] < dt_sequence[i - 1])) {
      throw std::invalid_argument("dt sequence must be strictly decreasing");
    }
  }
  ExtractionReport report;
  const HilbertDims& dims = schedule.system;
  const Superoperator id = Superoperator::identity(dims);
  std::vector<Matrix> finite;
  for (double dt : dt_sequence) {
    const Superoperator phi = linearize_map(schedule, dt);
    DtSample sample;
    sample.dt = dt;
    sample.trace_defect = trace_preservation_defect(phi);
    sample.min_choi_eig = min_choi_eigenvalue(phi);
    report.samples.push_back(sample);
    finite.push_back((phi.data() - id.data()) / dt);
    report.finite_generators.emplace_back(dims, finite.back());
  }
  report.generator = Superoperator(dims, extrapolate_to_zero(dt_sequence, finite));

  std::vector<double> dev;
  for (std::size_t i = 0; i < finite.size(); ++i) {
    report.samples[i].frobenius_deviation = (finite[i] - report.generator.data()).norm();
    dev.push_back(report.samples[i].frobenius_deviation);
  }
  const PowerLawFit fit = fit_power_law(dt_sequence, dev);
  report.order = fit.exponent;
  report.order_r2 = fit.r_squared;
  report.monotone = decreases_with(dev);
  const double scale = std::max(1.0, report.generator.data().norm());
  const bool vanishing = std::all_of(dev.begin(), dev.end(), [&](double d) { return d <= 1e-12 * scale; });
  if (vanishing) {
    report.warnings.push_back("finite-dt generators already equal the limit; convergence order undefined");
  } else {
    report.order_flagged = !(fit.r_squared >= 0.95);
    if (report.order_flagged) {
      report.warnings.push_back("convergence-order fit has R^2 = " + format_double(fit.r_squared) + " < 0.95");
    }
    if (!report.monotone) {
      report.warnings.push_back("deviations are not monotone in dt; dt may lie outside the asymptotic regime");
    }
  }
  report.drift = mean_field_drift(schedule, dt_sequence.back());
  if (report.drift > kDriftTolerance) {
    report.warnings.push_back("interaction has non-zero mean on the ancilla state (drift " +
                              format_double(report.drift) + ")");
  }
  report.decomposition = decompose_generator(report.generator, basis);
  return report;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string report_csv(const ExtractionReport& report) {
  std::ostringstream os;
  os << "dt,frobenius_deviation,trace_defect,min_choi_eig\n";
  for (const DtSample& s : report.samples) {
    os << format_double(s.dt) << ',' << format_double(s.frobenius_deviation) << ',' << format_double(s.trace_defect)
       << ',' << format_double(s.min_choi_eig) << '\n';
  }
  return os.str();
}

void to_json(nlohmann::json& j, const ExtractionReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (const DtSample& s : report.samples) {
    samples.push_back({{"dt", s.dt},
                       {"frobenius_deviation", s.frobenius_deviation},
                       {"trace_defect", s.trace_defect},
                       {"min_choi_eig", s.min_choi_eig}});
  }
  j = {{"spec", report.decomposition.spec},
       {"residual", report.decomposition.residual},
       {"gram_condition", report.decomposition.gram_condition},
       {"order", report.order},
       {"order_r2", report.order_r2},
       {"order_flagged", report.order_flagged},
       {"monotone", report.monotone},
       {"drift", report.drift},
       {"samples", std::move(samples)},
       {"warnings", report.warnings},
       {"generator", matrix_to_json(report.generator.data())}};
}

}  // namespace collider
