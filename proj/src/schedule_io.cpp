// schedule_io.cpp

#include "collider/schedule_io.hpp"

#include "collider/fock.hpp"

namespace collider {

using nlohmann::json;

OperatorRegistry::OperatorRegistry() {
  define("I2", pauli::identity());
  define("sigma_x", pauli::x());
  define("sigma_y", pauli::y());
  define("sigma_z", pauli::z());
  define("sigma_plus", pauli::plus());
  define("sigma_minus", pauli::minus());
  define("ground", pauli::ground());
  define("excited", pauli::excited());
}

void OperatorRegistry::define(const std::string& name, Operator op) {
  if (name.empty()) throw std::invalid_argument("operator names must be non-empty");
  named_[name] = std::move(op);
}

const Operator& OperatorRegistry::at(const std::string& name) const {
  auto it = named_.find(name);
  if (it == named_.end()) throw std::invalid_argument("unknown operator '" + name + "'");
  return it->second;
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("complex numbers are written as a number or [re, im]");
}

json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

Operator OperatorRegistry::parse(const json& e) const {
  if (e.is_string()) return at(e.get<std::string>());
  if (!e.is_object()) throw std::invalid_argument("operator expression must be a name or an object");
  if (e.contains("re")) return e.get<Operator>();
  if (e.contains("matrix")) {
    const json& m = e.at("matrix");
    if (m.contains("dims")) return m.get<Operator>();
    return Operator(matrix_from_json(m));
  }
  auto list = [&](const char* key) {
    std::vector<Operator> ops;
    for (const json& item : e.at(key)) ops.push_back(parse(item));
    if (ops.empty()) throw std::invalid_argument(std::string("'") + key + "' needs at least one operand");
    return ops;
  };
  if (e.contains("kron")) return kron(list("kron"));
  if (e.contains("sum")) {
    auto ops = list("sum");
    Operator acc = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) acc += ops[i];
    return acc;
  }
  if (e.contains("product")) {
    auto ops = list("product");
    Operator acc = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) acc = acc * ops[i];
    return acc;
  }
  if (e.contains("scale")) return complex_from_json(e.at("scale")) * parse(e.at("op"));
  if (e.contains("dagger")) return parse(e.at("dagger")).adjoint();
  if (e.contains("hc")) {
    const Operator op = parse(e.at("hc"));
    return op + op.adjoint();
  }
  if (e.contains("identity")) return Operator::identity(HilbertDims({e.at("identity").get<int>()}));
  if (e.contains("projector")) {
    return Operator::projector(HilbertDims({e.at("dim").get<int>()}), e.at("projector").get<std::size_t>());
  }
  if (e.contains("boson")) {
    const fock::FockMode mode(e.at("cutoff").get<int>());
    const std::string kind = e.at("boson").get<std::string>();
    if (kind == "annihilation") return fock::annihilation(mode);
    if (kind == "creation") return fock::creation(mode);
    if (kind == "number") return fock::number(mode);
    throw std::invalid_argument("unknown bosonic operator '" + kind + "'");
  }
  throw std::invalid_argument("unrecognized operator expression " + e.dump());
}

OperatorRegistry registry_from_json(const json& operators) {
  OperatorRegistry reg;
  if (operators.is_null()) return reg;
  if (!operators.is_object()) throw std::invalid_argument("'operators' must be an object of name: expression");
  // Object keys come back sorted, so definitions may refer forward; resolve in passes.
  std::vector<std::pair<std::string, json>> pending;
  for (const auto& [name, expr] : operators.items()) pending.emplace_back(name, expr);
  while (!pending.empty()) {
    std::vector<std::pair<std::string, json>> next;
    std::string last_error;
    for (auto& [name, expr] : pending) {
      try {
        reg.define(name, reg.parse(expr));
      } catch (const std::invalid_argument& e) {
        last_error = e.what();
        next.emplace_back(name, expr);
      }
    }
    if (next.size() == pending.size()) throw std::invalid_argument(last_error);
    pending = std::move(next);
  }
  return reg;
}

// ---------------------------------------------------------------------------
// Preparations

AncillaPrep prep_from_json(const json& j, const OperatorRegistry& reg, const HilbertDims& dims) {
  const std::string kind = j.is_string() ? j.get<std::string>() : j.value("kind", std::string("ground"));
  if (kind == "ground") return AncillaPrep::ground(dims);
  if (kind == "state") return AncillaPrep::explicit_state(reg.parse(j.at("state")));
  if (kind == "entangled") {
    return AncillaPrep::entangled(dims, reg.parse(j.at("h_e")), j.at("mu").get<double>());
  }
  if (kind == "thermal_qubits") {
    std::vector<Operator> factors;
    for (const json& p : j.at("excited")) {
      const double pe = p.get<double>();
      if (!(pe >= 0.0 && pe <= 1.0)) throw std::invalid_argument("thermal excited population must lie in [0, 1]");
      factors.push_back((1.0 - pe) * pauli::ground() + pe * pauli::excited());
    }
    return AncillaPrep::explicit_state(kron(factors));
  }
  if (kind == "squeezed_thermal") {
    const fock::SqueezeParams zeta(j.at("r").get<double>(), j.value("psi", 0.0));
    const double n1 = j.value("n1", 0.0);
    const double n2 = j.value("n2", 0.0);
    const int cutoff = j.value("cutoff", 0) > 0 ? j.at("cutoff").get<int>() : fock::default_cutoff(n1, n2, zeta);
    const fock::FockMode mode(cutoff);
    return AncillaPrep::explicit_state(fock::entangled_thermal_state(mode, mode, zeta, n1, n2).op);
  }
  if (kind == "mixture") {
    std::vector<PrepComponent> components;
    for (const json& c : j.at("components")) {
      PrepComponent pc;
      pc.weight = c.at("weight").get<double>();
      pc.state = c.contains("state") ? reg.parse(c.at("state")) : Operator::projector(dims, 0);
      if (c.contains("h_e")) {
        pc.h_e = reg.parse(c.at("h_e"));
        pc.mu = c.value("mu", 0.0);
      }
      components.push_back(std::move(pc));
    }
    return AncillaPrep::mixture(std::move(components));
  }
  throw std::invalid_argument("unknown ancilla preparation kind '" + kind + "'");
}

json prep_to_json(const AncillaPrep& prep) {
  json components = json::array();
  for (const PrepComponent& c : prep.components) {
    json item = {{"weight", c.weight}, {"state", c.state}};
    if (c.h_e) {
      item["h_e"] = *c.h_e;
      item["mu"] = c.mu;
    }
    components.push_back(std::move(item));
  }
  return {{"kind", "mixture"}, {"dims", prep.dims}, {"components", std::move(components)}};
}

// ---------------------------------------------------------------------------
// Schedules

CollisionSchedule schedule_from_json(const json& j, const OperatorRegistry& reg) {
  CollisionSchedule s;
  s.system = j.at("system").get<HilbertDims>();
  const HilbertDims ancillas = j.value("ancillas", json::array()).get<HilbertDims>();
  s.prep = prep_from_json(j.value("prep", json("ground")), reg, ancillas);
  if (s.prep.dims != ancillas) throw DimensionError("ancilla preparation does not match 'ancillas'");
  if (j.contains("rule")) {
    const json& r = j.at("rule");
    s.rule.gamma = r.value("gamma", s.rule.gamma);
    s.rule.g_s = r.value("g_s", s.rule.g_s);
    s.rule.mu = r.value("mu", s.rule.mu);
    s.rule.kappa = r.value("kappa", s.rule.kappa);
    s.rule.s = r.value("s", s.rule.s);
  }
  if (j.contains("factor_names")) s.factor_names = j.at("factor_names").get<std::vector<std::string>>();
  for (const json& st : j.at("stages")) {
    Stage stage;
    stage.label = st.value("label", std::string());
    stage.fraction = st.value("fraction", 1.0);
    for (const json& t : st.at("terms")) {
      GeneratorTerm term;
      term.coupling = coupling_from_string(t.value("coupling", std::string("interaction")));
      term.targets = t.at("targets").get<std::vector<int>>();
      term.generator = reg.parse(t.at("generator"));
      term.name = t.value("name", t.at("generator").is_string() ? t.at("generator").get<std::string>() : std::string());
      term.weight = t.value("weight", 1.0);
      stage.terms.push_back(std::move(term));
    }
    s.stages.push_back(std::move(stage));
  }
  s.validate();
  return s;
}

json schedule_to_json(const CollisionSchedule& s) {
  json stages = json::array();
  for (const Stage& stage : s.stages) {
    json terms = json::array();
    for (const GeneratorTerm& t : stage.terms) {
      terms.push_back({{"coupling", to_string(t.coupling)},
                       {"targets", t.targets},
                       {"generator", t.generator},
                       {"name", t.name},
                       {"weight", t.weight}});
    }
    stages.push_back({{"label", stage.label}, {"fraction", stage.fraction}, {"terms", std::move(terms)}});
  }
  json out = {{"system", s.system},
              {"ancillas", s.prep.dims},
              {"prep", prep_to_json(s.prep)},
              {"rule", {{"gamma", s.rule.gamma}, {"g_s", s.rule.g_s}, {"mu", s.rule.mu}, {"kappa", s.rule.kappa}, {"s", s.rule.s}}},
              {"stages", std::move(stages)}};
  if (!s.factor_names.empty()) out["factor_names"] = s.factor_names;
  return out;
}

json export_schedule(const CollisionSchedule& s, double dt) {
  s.validate();
  json factors = json::array();
  for (int f = 0; f < static_cast<int>(s.joint().size()); ++f) factors.push_back(s.factor_name(f));
  json stages = json::array();
  for (const Stage& stage : s.stages) {
    json targets = json::array();
    for (int f : stage.targets()) targets.push_back(s.factor_name(f));
    json generators = json::array();
    for (const GeneratorTerm& t : stage.terms) {
      json names = json::array();
      for (int f : t.targets) names.push_back(s.factor_name(f));
      generators.push_back({{"name", t.name},
                            {"coupling", to_string(t.coupling)},
                            {"coupling_constant", s.rule.coupling(t.coupling, dt)},
                            {"weight", t.weight},
                            {"targets", std::move(names)},
                            {"op", t.generator}});
    }
    stages.push_back({{"label", stage.label},
                      {"targets", std::move(targets)},
                      {"generator", std::move(generators)},
                      {"duration_fraction", stage.fraction},
                      {"unitary", stage_unitary(s, stage, dt)}});
  }
  return {{"dt", dt}, {"factors", std::move(factors)}, {"prep", prep_to_json(s.prep)}, {"stages", std::move(stages)}};
}

}  // namespace collider
