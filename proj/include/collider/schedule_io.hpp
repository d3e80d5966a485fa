// schedule_io.hpp - JSON operator expressions, preparations, schedules and gate-list export

#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "collider/collision.hpp"

namespace collider {

// Named operators plus an expression grammar:
//   "name"                                registry entry
//   {"dims": [..], "re": [[..]], "im": [[..]]} or {"matrix": {...}}   inline literal
//   {"kron": [e, ...]}, {"sum": [e, ...]}, {"product": [e, ...]}
//   {"scale": c, "op": e}                 c a number or [re, im]
//   {"dagger": e}, {"hc": e}              e^dag, e + e^dag
//   {"identity": d}, {"projector": k, "dim": d}
//   {"boson": "annihilation" | "creation" | "number", "cutoff": n}
class OperatorRegistry {
 public:
  OperatorRegistry();

  void define(const std::string& name, Operator op);
  bool contains(const std::string& name) const { return named_.count(name) > 0; }
  const Operator& at(const std::string& name) const;

  Operator parse(const nlohmann::json& expr) const;

 private:
  std::map<std::string, Operator> named_;
};

// Registry with built-ins plus every entry of a config "operators" object,
// defined in order so later entries may reference earlier ones.
OperatorRegistry registry_from_json(const nlohmann::json& operators);

cplx complex_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(cplx c);

// "ground" | {"kind": "ground" | "state" | "entangled" | "mixture" |
// "thermal_qubits" | "squeezed_thermal", ...}. `dims` supplies the ancilla
// dimensions where the kind does not fix them.
AncillaPrep prep_from_json(const nlohmann::json& j, const OperatorRegistry& reg, const HilbertDims& dims);
nlohmann::json prep_to_json(const AncillaPrep& prep);

CollisionSchedule schedule_from_json(const nlohmann::json& j, const OperatorRegistry& reg);
nlohmann::json schedule_to_json(const CollisionSchedule& schedule);

// Gate list of one timestep: every stage with its target factor names,
// generators, duration fraction and instantiated unitary.
nlohmann::json export_schedule(const CollisionSchedule& schedule, double dt);

}  // namespace collider
