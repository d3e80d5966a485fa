// models.cpp - schedule constructors and closed-form predictions

#include "collider/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace collider {

namespace {

std::vector<int> range(int from, int to) {
  std::vector<int> out(static_cast<std::size_t>(std::max(0, to - from)));
  std::iota(out.begin(), out.end(), from);
  return out;
}

// Basis coefficients of a traceless operator local on `site`.
Vector local_coefficients(const GksBasis& basis, const Operator& op, int site) {
  const auto e = basis.expand_local(op, site);
  const double scale = std::max(1.0, op.norm());
  if (e.remainder > 1e-10 * scale) {
    throw std::invalid_argument("jump operator on site " + std::to_string(site) + " is outside the GKS basis span");
  }
  if (std::abs(e.trace_part) > 1e-12 * scale) {
    throw std::invalid_argument("jump operator on site " + std::to_string(site) + " must be traceless");
  }
  return e.coefficients;
}

Operator hc_pair(const Operator& f, const Operator& b) {
  const Operator fb = kron(f, b);
  return fb + fb.adjoint();
}

GeneratorTerm system_term(const HilbertDims& system, const Operator& h, std::string name) {
  return {Coupling::system, range(0, static_cast<int>(system.size())), h, std::move(name), 1.0};
}

GklsSpec make_spec(const GksBasis& basis, const Operator& h, Matrix c) {
  GklsSpec spec{basis, h, std::move(c)};
  spec.kossakowski = 0.5 * (spec.kossakowski + spec.kossakowski.adjoint()).eval();
  return spec;
}

Operator system_hamiltonian(const HilbertDims& system, const std::optional<Operator>& h_s, double g_s) {
  if (!h_s) return Operator::zero(system);
  if (h_s->dims() != system) throw DimensionError("H_S does not live on the system");
  return g_s * *h_s;
}

}  // namespace

std::vector<CouplingTerm> with_conjugates(std::vector<CouplingTerm> terms) {
  const std::size_t n = terms.size();
  for (std::size_t i = 0; i < n; ++i) {
    CouplingTerm partner = terms[i];
    partner.f = terms[i].f.adjoint();
    partner.b = terms[i].b.adjoint();
    partner.name = terms[i].name + "^dag";
    terms.push_back(std::move(partner));
  }
  return terms;
}

Matrix no_dagger_to_kossakowski(const GksBasis& basis, const std::vector<CouplingTerm>& terms,
                                const Matrix& table) {
  const auto nt = static_cast<Eigen::Index>(terms.size());
  const auto nb = static_cast<Eigen::Index>(basis.size());
  if (table.rows() != nt || table.cols() != nt) throw DimensionError("coefficient table does not match terms");
  Matrix x(nt, nb);
  Matrix z(nt, nb);
  for (Eigen::Index u = 0; u < nt; ++u) {
    const CouplingTerm& t = terms[static_cast<std::size_t>(u)];
    x.row(u) = local_coefficients(basis, t.f, t.site).transpose();
    z.row(u) = local_coefficients(basis, t.f.adjoint(), t.site).transpose();
  }
  // F_v = sum_k conj(z_vk) F_k^dag
  return x.transpose() * table * z.conjugate();
}

Matrix kossakowski_to_no_dagger(const GksBasis& basis, const Matrix& kossakowski) {
  return kossakowski * basis.dagger_map();
}

// ---------------------------------------------------------------------------
// MCM

ModelBuild build_mcm(const GksBasis& basis, const std::vector<McmAncillaSpec>& bricks, double gamma) {
  const HilbertDims& system = basis.system();
  const int m = static_cast<int>(system.size());
  ModelBuild out;
  out.schedule.system = system;
  out.schedule.prep = AncillaPrep::ground(HilbertDims(std::vector<int>(bricks.size(), 2)));
  out.schedule.rule.gamma = gamma;
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));

  for (std::size_t p = 0; p < bricks.size(); ++p) {
    const McmAncillaSpec& b = bricks[p];
    const std::size_t j1 = basis.index(b.site1, b.label1);
    const std::size_t j2 = basis.index(b.site2, b.label2);
    const int anc = m + static_cast<int>(p);
    auto collision = [&](std::size_t j, cplx lambda, double fraction) {
      const GksElement& e = basis.element(j);
      Stage stage;
      stage.label = "U_" + std::to_string(p) + "^(" + std::to_string(e.site) + "," + e.label + ")";
      stage.fraction = fraction;
      stage.terms.push_back({Coupling::interaction, {e.site, anc}, hc_pair(lambda * e.op, pauli::plus()),
                             "lambda F_(" + std::to_string(e.site) + "," + e.label + ") sigma_plus + h.c.", 1.0});
      return stage;
    };
    out.schedule.stages.push_back(collision(j1, b.lambda1, 0.5));
    out.schedule.stages.push_back(collision(j2, b.lambda2, 1.0));
    out.schedule.stages.push_back(collision(j1, b.lambda1, 0.5));

    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
    v(static_cast<Eigen::Index>(j1)) += b.lambda1;
    v(static_cast<Eigen::Index>(j2)) += b.lambda2;
    c += gamma * v * v.adjoint();
  }
  out.predicted = make_spec(basis, Operator::zero(system), std::move(c));
  return out;
}

ModelBuild build_mcm_brick(const GksBasis& basis, const McmAncillaSpec& spec, double gamma) {
  return build_mcm(basis, {spec}, gamma);
}

ModelBuild compile_gkls_to_mcm(const GklsSpec& target) {
  target.validate();
  const double min_eig = target.min_kossakowski_eigenvalue();
  if (min_eig < -kStructuralTol) {
    throw std::invalid_argument("target Kossakowski matrix is not positive semidefinite (min eigenvalue " +
                                format_double(min_eig) + ")");
  }
  const GksBasis& basis = target.basis;
  const HilbertDims& system = basis.system();
  const int m = static_cast<int>(system.size());

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (target.kossakowski + target.kossakowski.adjoint()));
  const double w_max = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
  std::vector<Vector> lambdas;
  for (Eigen::Index k = es.eigenvalues().size(); k-- > 0;) {
    const double w = es.eigenvalues()(k);
    if (w > 1e-12 * w_max && w > 0.0) lambdas.push_back(std::sqrt(w / w_max) * es.eigenvectors().col(k));
  }

  ModelBuild out;
  out.schedule.system = system;
  out.schedule.prep = AncillaPrep::ground(HilbertDims(std::vector<int>(lambdas.size(), 2)));
  out.schedule.rule.gamma = w_max > 0.0 ? w_max : 0.0;
  out.schedule.rule.g_s = 1.0;

  for (std::size_t p = 0; p < lambdas.size(); ++p) {
    const Vector& lambda = lambdas[p];
    std::vector<std::size_t> involved;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      if (std::abs(lambda(j)) > 1e-14) involved.push_back(static_cast<std::size_t>(j));
    }
    const int anc = m + static_cast<int>(p);
    auto collision = [&](std::size_t j, double fraction) {
      const GksElement& e = basis.element(j);
      Stage stage;
      stage.label = "U_" + std::to_string(p) + "^(" + std::to_string(e.site) + "," + e.label + ")";
      stage.fraction = fraction;
      stage.terms.push_back({Coupling::interaction, {e.site, anc},
                             hc_pair(lambda(static_cast<Eigen::Index>(j)) * e.op, pauli::plus()),
                             "lambda F_(" + std::to_string(e.site) + "," + e.label + ") sigma_plus + h.c.", 1.0});
      return stage;
    };
    // U_1(1/2) ... U_{n-1}(1/2) U_n(1) U_{n-1}(1/2) ... U_1(1/2)
    for (std::size_t a = 0; a + 1 < involved.size(); ++a) out.schedule.stages.push_back(collision(involved[a], 0.5));
    out.schedule.stages.push_back(collision(involved.back(), 1.0));
    for (std::size_t a = involved.size() - 1; a-- > 0;) out.schedule.stages.push_back(collision(involved[a], 0.5));
  }
  if (target.hamiltonian.norm() > 0.0) {
    Stage stage;
    stage.label = "U_S";
    stage.terms.push_back(system_term(system, target.hamiltonian, "H_eff"));
    out.schedule.stages.push_back(std::move(stage));
  }
  out.predicted = target;
  return out;
}

// ---------------------------------------------------------------------------
// Cascade

CascadeBuild build_cascade(const CascadeSpec& spec, double gamma) {
  const HilbertDims& system = spec.system;
  const int m = static_cast<int>(system.size());
  spec.prep.validate();
  const Operator rho_e = spec.prep.state();
  for (const CouplingTerm& t : spec.terms) {
    if (t.b.dims() != spec.prep.dims) throw DimensionError("cascade ancilla operator does not match the ancilla");
    if (t.f.dims() != HilbertDims({system[static_cast<std::size_t>(t.site)]})) {
      throw DimensionError("cascade system operator does not match its site");
    }
    if (std::abs((t.b * rho_e).trace()) > kStructuralTol) {
      throw std::invalid_argument("cascade ancilla operator '" + t.name + "' has non-zero mean on the ancilla state");
    }
  }
  std::vector<int> order = spec.order.empty() ? range(0, m) : spec.order;
  if (spec.reversed) std::reverse(order.begin(), order.end());
  std::vector<int> position(static_cast<std::size_t>(m), -1);
  for (std::size_t k = 0; k < order.size(); ++k) position.at(static_cast<std::size_t>(order[k])) = static_cast<int>(k);

  CascadeBuild out;
  CollisionSchedule& sched = out.schedule;
  sched.system = system;
  sched.prep = spec.prep;
  sched.rule.gamma = gamma;
  sched.rule.g_s = spec.g_s;
  const std::vector<int> anc = range(m, m + static_cast<int>(spec.prep.dims.size()));
  for (int site : order) {
    Operator h = Operator::zero(HilbertDims({system[static_cast<std::size_t>(site)]}).concat(spec.prep.dims));
    for (const CouplingTerm& t : spec.terms) {
      if (t.site == site) h += kron(t.f, t.b);
    }
    if (h.norm() == 0.0) continue;
    std::vector<int> targets{site};
    targets.insert(targets.end(), anc.begin(), anc.end());
    Stage stage;
    stage.label = "U_j," + std::to_string(site);
    if (!h.is_hermitian()) throw std::invalid_argument("cascade interaction on site " + std::to_string(site) + " is not Hermitian");
    stage.terms.push_back({Coupling::interaction, targets, h, "H_j," + std::to_string(site), 1.0});
    sched.stages.push_back(std::move(stage));
  }
  const Operator h_sys = system_hamiltonian(system, spec.h_s, spec.g_s);
  if (spec.h_s) {
    Stage stage;
    stage.label = "U_S";
    stage.terms.push_back(system_term(system, *spec.h_s, "H_S"));
    sched.stages.push_back(std::move(stage));
  }

  // C(u, v): coefficient of F_u rho F_v^dag in the symmetric form.
  const auto nt = static_cast<Eigen::Index>(spec.terms.size());
  Matrix local = Matrix::Zero(nt, nt);
  Matrix symmetric = Matrix::Zero(nt, nt);
  for (Eigen::Index u = 0; u < nt; ++u) {
    const CouplingTerm& tu = spec.terms[static_cast<std::size_t>(u)];
    for (Eigen::Index v = 0; v < nt; ++v) {
      const CouplingTerm& tv = spec.terms[static_cast<std::size_t>(v)];
      const cplx g = gamma * (tv.b.adjoint() * tu.b * rho_e).trace();
      const int pu = position[static_cast<std::size_t>(tu.site)];
      const int pv = position[static_cast<std::size_t>(tv.site)];
      if (tu.site == tv.site) {
        local(u, v) = g;
        symmetric(u, v) = g;
      } else if (pu < pv) {
        symmetric(u, v) += g;
        symmetric(v, u) += std::conj(g);
        out.cross_terms.push_back(
            {embed_local(tu.f, tu.site, system), embed_local(tv.f, tv.site, system), g});
      }
    }
  }
  out.lamb_shift = lamb_shift(out.cross_terms, system);

  const GksBasis basis = GksBasis::standard(system);
  // F_u = sum_j x_uj F_j, so F_u rho F_v^dag contributes x_uj conj(x_vk).
  auto to_basis = [&](const Matrix& table) {
    Matrix x(nt, static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index u = 0; u < nt; ++u) {
      const CouplingTerm& t = spec.terms[static_cast<std::size_t>(u)];
      x.row(u) = local_coefficients(basis, t.f, t.site).transpose();
    }
    return Matrix(x.transpose() * table * x.conjugate());
  };
  out.predicted = make_spec(basis, h_sys + out.lamb_shift, to_basis(symmetric));
  const GklsSpec local_spec = make_spec(basis, h_sys, to_basis(local));
  out.raw_liouvillian = build_liouvillian(local_spec) + global_dissipator(out.cross_terms, system);
  return out;
}

// ---------------------------------------------------------------------------
// Entangled ancillas

Operator entangled_ancilla_state(const EntangledModelSpec& spec) {
  Operator rho = spec.prep.state();
  if (spec.h_e && spec.environment == Coupling::fast_environment) {
    const Operator u = expm(*spec.h_e, -kI * spec.mu);
    rho = hermitian_part(u * rho * u.adjoint());
  }
  return rho;
}

namespace {

Operator embedded_ancilla_op(const EntangledModelSpec& spec, const CouplingTerm& t) {
  if (t.ancilla < 0 || static_cast<std::size_t>(t.ancilla) >= spec.prep.dims.size()) {
    throw DimensionError("coupling term '" + t.name + "' names a missing ancilla");
  }
  return embed_local(t.b, t.ancilla, spec.prep.dims);
}

}  // namespace

EntangledCoefficients predicted_entangled_coefficients(const EntangledModelSpec& spec, double gamma) {
  const Operator rho = entangled_ancilla_state(spec);
  const auto nt = static_cast<Eigen::Index>(spec.terms.size());
  std::vector<Operator> b;
  for (const CouplingTerm& t : spec.terms) b.push_back(embedded_ancilla_op(spec, t));
  EntangledCoefficients out;
  out.table = Matrix::Zero(nt, nt);
  for (Eigen::Index u = 0; u < nt; ++u) {
    out.max_mean = std::max(out.max_mean, std::abs((b[static_cast<std::size_t>(u)] * rho).trace()));
    for (Eigen::Index v = 0; v < nt; ++v) {
      out.table(u, v) = gamma * (b[static_cast<std::size_t>(v)] * b[static_cast<std::size_t>(u)] * rho).trace();
    }
  }
  for (Eigen::Index u = 0; u < nt; ++u) {
    for (Eigen::Index v = 0; v < nt; ++v) {
      if (spec.terms[static_cast<std::size_t>(u)].site == spec.terms[static_cast<std::size_t>(v)].site) continue;
      out.max_asymmetry = std::max(out.max_asymmetry, std::abs(out.table(u, v) - out.table(v, u)));
    }
  }
  return out;
}

ModelBuild build_entangled(const EntangledModelSpec& spec, double gamma) {
  const HilbertDims& system = spec.system;
  const int m = static_cast<int>(system.size());
  spec.prep.validate();
  ModelBuild out;
  CollisionSchedule& sched = out.schedule;
  sched.system = system;
  sched.prep = spec.prep;
  sched.rule.gamma = gamma;
  sched.rule.g_s = spec.g_s;
  sched.rule.mu = spec.mu;
  sched.rule.kappa = spec.kappa;
  sched.rule.s = spec.s;

  if (spec.h_e) {
    if (spec.environment != Coupling::fast_environment && spec.environment != Coupling::slow_environment) {
      throw std::invalid_argument("entangling stage needs an environment coupling");
    }
    Stage stage;
    stage.label = "U_E";
    stage.terms.push_back({spec.environment, range(m, m + static_cast<int>(spec.prep.dims.size())), *spec.h_e,
                           "H_E", 1.0});
    sched.stages.push_back(std::move(stage));
  }

  std::map<std::pair<int, int>, Operator> grouped;
  for (const CouplingTerm& t : spec.terms) {
    if (t.site < 0 || t.site >= m) throw DimensionError("coupling term '" + t.name + "' names a missing site");
    if (t.ancilla < 0 || static_cast<std::size_t>(t.ancilla) >= spec.prep.dims.size()) {
      throw DimensionError("coupling term '" + t.name + "' names a missing ancilla");
    }
    const Operator fb = kron(t.f, t.b);
    auto [it, fresh] = grouped.try_emplace({t.site, t.ancilla}, fb);
    if (!fresh) it->second += fb;
  }
  for (const auto& [key, h] : grouped) {
    Stage stage;
    stage.label = "U_I," + std::to_string(key.first);
    if (!h.is_hermitian()) throw std::invalid_argument("interaction on site " + std::to_string(key.first) + " is not Hermitian");
    stage.terms.push_back({Coupling::interaction, {key.first, m + key.second}, h,
                           "H_I," + std::to_string(key.first), 1.0});
    sched.stages.push_back(std::move(stage));
  }
  if (spec.h_s) {
    Stage stage;
    stage.label = "U_S";
    stage.terms.push_back(system_term(system, *spec.h_s, "H_S"));
    sched.stages.push_back(std::move(stage));
  }

  const EntangledCoefficients coeff = predicted_entangled_coefficients(spec, gamma);
  if (coeff.max_mean > kStructuralTol) {
    out.warnings.push_back("interaction has non-zero mean on the entangled ancilla state (" +
                           format_double(coeff.max_mean) + "); a first-order drift term appears");
  }
  const GksBasis basis = GksBasis::standard(system);
  out.predicted = make_spec(basis, system_hamiltonian(system, spec.h_s, spec.g_s),
                            no_dagger_to_kossakowski(basis, spec.terms, coeff.table));
  return out;
}

ModelBuild build_composite(const HilbertDims& system, int dissipating_site, const AncillaPrep& prep,
                           const std::vector<CouplingTerm>& local_collision, const Operator& h_s, double g_s,
                           double gamma) {
  EntangledModelSpec spec;
  spec.system = system;
  spec.prep = prep;
  for (CouplingTerm t : local_collision) {
    t.site = dissipating_site;
    spec.terms.push_back(std::move(t));
  }
  spec.h_s = h_s;
  spec.g_s = g_s;
  return build_entangled(spec, gamma);
}

// ---------------------------------------------------------------------------
// Squeezed thermal modes

SqueezedExample squeezed_example(double r, double psi, double n1, double n2, double gamma, int cutoff) {
  const fock::SqueezeParams zeta(r, psi);
  SqueezedExample out;
  out.cutoff = cutoff > 0 ? cutoff : fock::default_cutoff(n1, n2, zeta);
  const fock::FockMode mode(out.cutoff);
  const fock::Truncated rho = fock::entangled_thermal_state(mode, mode, zeta, n1, n2);
  out.truncation_defect = rho.truncation_defect;

  const Operator b = fock::annihilation(mode);
  EntangledModelSpec spec;
  spec.system = HilbertDims{2, 2};
  spec.prep = AncillaPrep::explicit_state(rho.op);
  spec.terms = with_conjugates({{0, 0, pauli::minus(), b.adjoint(), "sigma1_minus b1^dag"},
                                {1, 1, pauli::minus(), b.adjoint(), "sigma2_minus b2^dag"}});
  out.build = build_entangled(spec, gamma);
  out.trace_form = out.build.predicted.kossakowski;

  const double c2 = std::cosh(r) * std::cosh(r);
  const double s2 = std::sinh(r) * std::sinh(r);
  const double n[2] = {n1, n2};
  for (int j = 0; j < 2; ++j) {
    const double other = n[1 - j];
    out.gamma_down[j] = gamma * (c2 * (n[j] + 1.0) + s2 * other);
    out.gamma_up[j] = gamma * (c2 * n[j] + s2 * (other + 1.0));
  }
  out.gamma_c = gamma * std::cosh(r) * std::sinh(r) * std::polar(1.0, psi) * (n1 + n2 + 1.0);

  const GksBasis& basis = out.build.predicted.basis;
  const auto nb = static_cast<Eigen::Index>(basis.size());
  auto at = [&](int site, const char* label) { return static_cast<Eigen::Index>(basis.index(site, label)); };
  Matrix c = Matrix::Zero(nb, nb);
  for (int j = 0; j < 2; ++j) {
    c(at(j, "minus"), at(j, "minus")) = out.gamma_down[j];
    c(at(j, "plus"), at(j, "plus")) = out.gamma_up[j];
  }
  // sigma_1^+ rho sigma_2^+ and sigma_2^+ rho sigma_1^+ carry gamma_c; their
  // conjugates sigma^- rho sigma^- carry gamma_c^*.
  c(at(0, "plus"), at(1, "minus")) = out.gamma_c;
  c(at(1, "plus"), at(0, "minus")) = out.gamma_c;
  c(at(1, "minus"), at(0, "plus")) = std::conj(out.gamma_c);
  c(at(0, "minus"), at(1, "plus")) = std::conj(out.gamma_c);
  out.closed_form = c;

  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index k = 0; k < nb; ++k) {
      const double err = std::abs(out.trace_form(i, k) - c(i, k));
      if (std::abs(c(i, k)) > 0.0) {
        out.max_relative_error = std::max(out.max_relative_error, err / std::abs(c(i, k)));
      } else {
        out.max_absolute_other = std::max(out.max_absolute_other, err);
      }
    }
  }
  out.build.predicted.kossakowski = c;
  return out;
}

// ---------------------------------------------------------------------------
// Amplitude damping

std::string to_string(Splitting s) {
  switch (s) {
    case Splitting::joint: return "joint";
    case Splitting::system_after: return "system_after";
    case Splitting::system_before: return "system_before";
  }
  return "unknown";
}

ModelBuild amplitude_damping(double gamma, const std::optional<Operator>& h_s, double g_s, Splitting splitting) {
  const HilbertDims system{2};
  ModelBuild out;
  CollisionSchedule& sched = out.schedule;
  sched.system = system;
  sched.prep = AncillaPrep::ground(HilbertDims{2});
  sched.rule.gamma = gamma;
  sched.rule.g_s = g_s;

  GeneratorTerm interaction{Coupling::interaction, {0, 1}, hc_pair(pauli::minus(), pauli::plus()),
                            "sigma_minus sigma_E_plus + h.c.", 1.0};
  if (!h_s) {
    sched.stages.push_back({"U_I", {interaction}, 1.0});
  } else {
    GeneratorTerm free = system_term(system, *h_s, "H_S");
    switch (splitting) {
      case Splitting::joint: sched.stages.push_back({"U_C", {free, interaction}, 1.0}); break;
      case Splitting::system_after:
        sched.stages.push_back({"U_I", {interaction}, 1.0});
        sched.stages.push_back({"U_S", {free}, 1.0});
        break;
      case Splitting::system_before:
        sched.stages.push_back({"U_S", {free}, 1.0});
        sched.stages.push_back({"U_I", {interaction}, 1.0});
        break;
    }
  }
  const GksBasis basis = GksBasis::standard(system);
  Matrix c = Matrix::Zero(3, 3);
  c(static_cast<Eigen::Index>(basis.index(0, "minus")), static_cast<Eigen::Index>(basis.index(0, "minus"))) = gamma;
  out.predicted = make_spec(basis, system_hamiltonian(system, h_s, g_s), std::move(c));
  return out;
}

}  // namespace collider
