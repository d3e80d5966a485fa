// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "collider/experiments.hpp"
#include "collider/fock.hpp"
#include "collider/models.hpp"
#include "collider/random_ops.hpp"
#include "oracles.hpp"

using namespace collider;

namespace {

struct Line {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "  ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Worst CPTP figures over every timestep map sampled by any extraction.
struct StructuralTally {
  double min_choi = 0.0;
  double max_trace = 0.0;
  std::size_t maps = 0;

  void add(const ExtractionReport& r) {
    for (const DtSample& s : r.samples) {
      min_choi = std::min(min_choi, s.min_choi_eig);
      max_trace = std::max(max_trace, s.trace_defect);
      ++maps;
    }
  }
};

StructuralTally tally;

cplx coeff(const GklsSpec& spec, int s1, const char* l1, int s2, const char* l2) {
  return spec.kossakowski(static_cast<Eigen::Index>(spec.basis.index(s1, l1)),
                          static_cast<Eigen::Index>(spec.basis.index(s2, l2)));
}

Line ac1() {
  Line line;
  const auto t0 = std::chrono::steady_clock::now();
  const ModelBuild b = amplitude_damping(1.0);
  const ExtractionReport r = extract_generator(b.schedule, default_dt_sequence(1.0), GksBasis::standard(HilbertDims{2}));
  tally.add(r);
  const double gamma_hat = coeff(r.decomposition.spec, 0, "minus", 0, "minus").real();
  const double elapsed = seconds_since(t0);
  line.check(std::abs(gamma_hat - 1.0) <= 1e-3, "|gamma_hat-1|=" + num(std::abs(gamma_hat - 1.0)));
  line.check(r.order >= 0.9 && r.order <= 1.1, "order=" + num(r.order));
  line.check(elapsed < 5.0, "runtime=" + num(elapsed) + "s");
  return line;
}

Line ac2() {
  Line line;
  const SplittingResult r = run_splitting_equivalence(1.0, pauli::z(), 0.8, default_dt_sequence(1.0));
  for (const auto& rep : r.reports) tally.add(rep);
  line.check(r.max_pairwise <= 1e-6, "max pairwise ||L_a-L_b||_F=" + num(r.max_pairwise));
  line.check(true, "finite-dt gap at dt_min=" + num(r.finite_gap));
  return line;
}

Line ac3() {
  Line line;
  const auto t0 = std::chrono::steady_clock::now();
  const HilbertDims system{2, 2};
  const GksBasis basis = GksBasis::ladder(system);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const GklsSpec target{basis, Operator::zero(system), random_psd(4, rng)};
    const ModelBuild b = compile_gkls_to_mcm(target);
    const ExtractionReport r = extract_generator(b.schedule, default_dt_sequence(1.0), basis);
    tally.add(r);
    const double rel = spec_difference(r.decomposition.spec, target).kossakowski / target.kossakowski.norm();
    worst = std::max(worst, rel);
  }
  const double elapsed = seconds_since(t0);
  line.check(worst <= 1e-2, "worst relative Kossakowski error over 20 seeds=" + num(worst));
  line.check(elapsed < 120.0, "runtime=" + num(elapsed) + "s");
  return line;
}

// (sigma_1^- sigma_2^+ - sigma_1^+ sigma_2^-) / (2i), written out by hand.
Matrix lamb_shift_oracle() {
  Matrix h = Matrix::Zero(4, 4);
  // Basis |s1 s2>, index 2 s1 + s2; sigma_1^- sigma_2^+ maps |1 0> -> |0 1>.
  h(1, 2) = 1.0 / cplx(0, 2);
  h(2, 1) = -1.0 / cplx(0, 2);
  return h;
}

Line ac4_ac5(Line& ac5) {
  Line line;
  const double gamma = 1.0;
  const CascadeComparison r = compare_cascade_to_mcm(gamma, 1.0, 1.0, default_dt_sequence(gamma));
  tally.add(r.cascade);
  tally.add(r.mcm);
  tally.add(r.countered);
  const HilbertDims system{2, 2};
  const Superoperator lamb(system, -cplx(0, 1) * (oracle::kron(Matrix::Identity(4, 4), lamb_shift_oracle()) -
                                                  oracle::kron(lamb_shift_oracle().transpose(), Matrix::Identity(4, 4))));
  const double diff = (r.cascade.generator - r.mcm.generator - lamb).data().norm();
  line.check(diff <= 1e-2 * gamma, "||(L_cas-L_mcm)+i[H_LS,.]||_F=" + num(diff));
  line.check((r.lamb_shift_extracted.data() - lamb_shift_oracle()).norm() <= 1e-2 * gamma,
             "||H_LS extracted - closed form||_F=" + num((r.lamb_shift_extracted.data() - lamb_shift_oracle()).norm()));
  // The cascade lacks rho F2^dag F1 and F1^dag F2 rho while the MCM carries them.
  const double missing = std::max(std::abs(r.missing_cascade[0]), std::abs(r.missing_cascade[1]));
  const double present = std::min(std::abs(r.missing_mcm[0]), std::abs(r.missing_mcm[1]));
  line.check(missing <= 1e-2 * gamma && present > 0.25 * gamma,
             "cascade missing-term coeffs=" + num(missing) + " (mcm " + num(present) + ")");
  line.check(r.cascade_raw_error <= 1e-2 * gamma, "||L_cas - causal raw form||_F=" + num(r.cascade_raw_error));

  ac5.check(r.counter_error <= 1e-2 * gamma, "||L_cas+(-H_LS) - L_mcm||_F=" + num(r.counter_error));
  return line;
}

Line ac6() {
  Line line;
  const double gamma = 1.0;
  const HilbertDims system{2, 2};
  const Operator exchange = kron(pauli::plus(), pauli::minus()) + kron(pauli::minus(), pauli::plus());
  const ModelBuild b = build_composite(system, 0, AncillaPrep::ground(HilbertDims{2}),
                                       with_conjugates({{0, 0, pauli::minus(), pauli::plus(), "local"}}), exchange, 1.0,
                                       gamma);
  const ExtractionReport r = extract_generator(b.schedule, default_dt_sequence(gamma), GksBasis::standard(system));
  tally.add(r);
  const GklsSpec& ext = r.decomposition.spec;
  double cross = 0.0;
  for (std::size_t j = 0; j < ext.basis.size(); ++j) {
    for (std::size_t k = 0; k < ext.basis.size(); ++k) {
      if (ext.basis.element(j).site != ext.basis.element(k).site) {
        cross = std::max(cross, std::abs(ext.kossakowski(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))));
      }
    }
  }
  const double h_rel = (ext.hamiltonian.data() - exchange.data()).norm() / exchange.norm();
  line.check(cross <= 1e-3 * gamma, "max cross-site |c|=" + num(cross));
  line.check(h_rel <= 1e-2, "H relative error=" + num(h_rel));
  return line;
}

Line ac7() {
  Line line;
  const double gamma = 1.0;
  double predicted_asym = 0.0;
  double extracted_asym = 0.0;
  double modulus_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(100 + seed);
    EntangledModelSpec spec = entangled_qubit_pair(Coupling::fast_environment, 0.2 + 0.15 * static_cast<double>(seed));
    spec.prep = random_parity_prep(rng);
    const EntangledCoefficients pc = predicted_entangled_coefficients(spec, gamma);
    predicted_asym = std::max(predicted_asym, pc.max_asymmetry);

    const ModelBuild b = build_entangled(spec, gamma);
    const GksBasis basis = GksBasis::standard(spec.system);
    const ExtractionReport r = extract_generator(b.schedule, default_dt_sequence(gamma), basis);
    tally.add(r);
    // No-dagger table T(u, v): coefficient of F_u rho F_v.
    const Matrix t = kossakowski_to_no_dagger(basis, r.decomposition.spec.kossakowski);
    auto at = [&](int s, const char* l) { return static_cast<Eigen::Index>(basis.index(s, l)); };
    const char* labels[] = {"minus", "plus", "z"};
    for (const char* a : labels) {
      for (const char* c : labels) {
        extracted_asym = std::max(extracted_asym, std::abs(t(at(0, a), at(1, c)) - t(at(1, c), at(0, a))));
      }
    }
    // Emission/absorption partners are complex conjugates of each other.
    modulus_gap = std::max(modulus_gap, std::abs(std::abs(t(at(0, "minus"), at(1, "minus"))) -
                                                 std::abs(t(at(0, "plus"), at(1, "plus")))));
    modulus_gap = std::max(modulus_gap, std::abs(std::abs(t(at(0, "minus"), at(1, "plus"))) -
                                                 std::abs(t(at(0, "plus"), at(1, "minus")))));
  }
  line.check(predicted_asym <= 1e-14, "predicted max|T_uv-T_vu|=" + num(predicted_asym));
  line.check(extracted_asym <= 1e-2 * gamma, "extracted max|T_uv-T_vu|=" + num(extracted_asym));
  line.check(modulus_gap <= 1e-2 * gamma, "emission/absorption modulus gap=" + num(modulus_gap));
  return line;
}

Line ac8() {
  Line line;
  const auto t0 = std::chrono::steady_clock::now();
  const double r = 0.4, psi = 0.7, n1 = 0.2, n2 = 0.5, gamma = 1.0;
  const SqueezedExample ex = squeezed_example(r, psi, n1, n2, gamma);
  // Closed forms, with N_3 = N_1.
  const double c2 = std::cosh(r) * std::cosh(r);
  const double s2 = std::sinh(r) * std::sinh(r);
  const double n[3] = {n1, n2, n1};
  double rel = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double down = gamma * (c2 * (n[j] + 1) + s2 * n[j + 1]);
    const double up = gamma * (c2 * n[j] + s2 * (n[j + 1] + 1));
    rel = std::max({rel, std::abs(ex.gamma_down[j] - down) / down, std::abs(ex.gamma_up[j] - up) / up});
  }
  const cplx gc = gamma * std::cosh(r) * std::sinh(r) * std::polar(1.0, psi) * (n1 + n2 + 1);
  rel = std::max(rel, std::abs(ex.gamma_c - gc) / std::abs(gc));
  line.check(rel <= 1e-6 && ex.max_relative_error <= 1e-6,
             "trace vs closed form rel=" + num(std::max(rel, ex.max_relative_error)) + " (cutoff " +
                 std::to_string(ex.cutoff) + ")");
  const ExtractionReport rep = extract_generator(ex.build.schedule, default_dt_sequence(gamma), ex.build.predicted.basis);
  tally.add(rep);
  const double gen = (rep.generator.data() - build_liouvillian(ex.build.predicted).data()).norm();
  const double coef = spec_difference(rep.decomposition.spec, ex.build.predicted).max_entry;
  const double elapsed = seconds_since(t0);
  line.check(gen <= 1e-2 * gamma && coef <= 1e-2 * gamma,
             "||L_ext-L_pred||_F=" + num(gen) + " max coeff diff=" + num(coef));
  line.check(elapsed < 180.0, "runtime=" + num(elapsed) + "s");
  return line;
}

Line ac9() {
  Line line;
  const std::vector<double> dts = default_dt_sequence(1.0);
  const SlowRegimeScaling r = slow_regime_scaling(1.0, 1.0, 0.5, dts);
  std::string ratios;
  for (double x : r.ratio) ratios += (ratios.empty() ? "" : ",") + num(x);
  line.check(r.monotone && r.dt.size() >= 5, "ratios=[" + ratios + "]");
  line.check(true, "decay exponent=" + num(r.fit.exponent) + " (R^2 " + num(r.fit.r_squared) + ")");
  return line;
}

Line ac10() {
  Line line;
  // CPTP over a dedicated battery as well as every map sampled above.
  Rng rng(7);
  std::vector<CollisionSchedule> battery = {
      amplitude_damping(1.0, pauli::x(), 0.5).schedule,
      build_entangled(entangled_qubit_pair(Coupling::slow_environment, 1.0, 0.5), 1.0).schedule,
  };
  {
    EntangledModelSpec spec = entangled_qubit_pair(Coupling::fast_environment, 0.9);
    spec.prep = random_parity_prep(rng);
    battery.push_back(build_entangled(spec, 2.0).schedule);
  }
  for (const CollisionSchedule& s : battery) {
    for (double dt : {0.2, 0.05, 0.01, 0.001}) {
      if (interaction_strength(s, dt) >= 1.0) continue;
      const Superoperator phi = linearize_map(s, dt);
      tally.min_choi = std::min(tally.min_choi, min_choi_eigenvalue(phi));
      tally.max_trace = std::max(tally.max_trace, trace_preservation_defect(phi));
      ++tally.maps;
    }
  }
  line.check(tally.min_choi >= -1e-9 && tally.max_trace <= 1e-12,
             std::to_string(tally.maps) + " maps: min Choi eig=" + num(tally.min_choi) + " max trace defect=" +
                 num(tally.max_trace));

  double roundtrip = 0.0;
  for (const HilbertDims& dims : {HilbertDims{2}, HilbertDims{3}, HilbertDims{2, 2}, HilbertDims{2, 3}}) {
    for (const GksBasis& basis : {GksBasis::standard(dims)}) {
      for (int k = 0; k < 5; ++k) {
        const GklsSpec spec = random_gkls(basis, rng);
        const SpecDifference d = spec_difference(decompose_generator(build_liouvillian(spec), basis).spec, spec);
        roundtrip = std::max({roundtrip, d.max_entry, d.hamiltonian});
      }
    }
  }
  line.check(roundtrip <= 1e-9, "GKLS round trip max error=" + num(roundtrip));

  double fock_worst = 0.0;
  const std::pair<double, double> cases[] = {{0.0, 0.3}, {0.4, 0.2}, {0.7, 0.0}};
  for (const auto& [r, nm] : cases) {
    const fock::SqueezeParams zeta(r, 0.7);
    const fock::FockMode mode(fock::default_cutoff(nm, nm, zeta));
    const Operator th = fock::thermal_state(mode, nm).op;
    const Operator rho = fock::entangled_thermal_state(mode, mode, zeta, nm, nm).op;
    fock_worst = std::max({fock_worst, -th.min_eigenvalue(), std::abs(th.trace().real() - 1.0), -rho.min_eigenvalue(),
                           std::abs(rho.trace().real() - 1.0)});
  }
  line.check(fock_worst <= 1e-10, "Fock states worst PSD/trace defect=" + num(fock_worst));

  const int cutoff = 30;
  const int d = cutoff + 1;
  const fock::FockMode mode(cutoff);
  const Matrix s = fock::two_mode_squeeze(mode, mode, fock::SqueezeParams(0.4, 0.7)).op.data();
  Matrix b = Matrix::Zero(d, d);
  for (int k = 1; k < d; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Matrix id = Matrix::Identity(d, d);
  const Matrix b1 = oracle::kron(b, id);
  const Matrix b2 = oracle::kron(id, b);
  const cplx e = std::polar(1.0, 0.7);
  const Matrix g1 = s.adjoint() * b1 * s - (std::cosh(0.4) * b1 + e * std::sinh(0.4) * b2.adjoint());
  const Matrix g2 = s.adjoint() * b2 * s - (std::cosh(0.4) * b2 + e * std::sinh(0.4) * b1.adjoint());
  double squeeze = 0.0;
  for (int i1 = 0; i1 <= 5; ++i1)
    for (int i2 = 0; i2 <= 5; ++i2)
      for (int j1 = 0; j1 <= 5; ++j1)
        for (int j2 = 0; j2 <= 5; ++j2) {
          squeeze = std::max({squeeze, std::abs(g1(i1 * d + i2, j1 * d + j2)), std::abs(g2(i1 * d + i2, j1 * d + j2))});
        }
  line.check(squeeze <= 1e-8, "squeeze identities low block=" + num(squeeze));
  return line;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Line>> results;
  auto guarded = [&](const std::string& id, const std::function<Line()>& f) {
    try {
      results.emplace_back(id, f());
    } catch (const std::exception& e) {
      results.emplace_back(id, Line{false, std::string("exception: ") + e.what()});
    }
  };
  guarded("AC1", ac1);
  guarded("AC2", ac2);
  guarded("AC3", ac3);
  Line ac5;
  guarded("AC4", [&] { return ac4_ac5(ac5); });
  results.emplace_back("AC5", ac5);
  guarded("AC6", ac6);
  guarded("AC7", ac7);
  guarded("AC8", ac8);
  guarded("AC9", ac9);
  guarded("AC10", ac10);

  bool all = true;
  for (const auto& [id, line] : results) {
    std::printf("%-5s %s  %s\n", id.c_str(), line.pass ? "PASS" : "FAIL", line.detail.c_str());
    all = all && line.pass;
  }
  return all ? 0 : 1;
}
