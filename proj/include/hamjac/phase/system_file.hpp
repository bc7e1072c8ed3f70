#pragma once

// System-definition files:
//   { "n": 1, "structure": "contact", "hamiltonian": "p1^2/2 + alpha*s",
//     "params": {"alpha": 0.1}, "section": ["q1"] }
// "section" is optional; "q_singular" (bool) optionally enables the
// integrator's singularity guard.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hamjac/errors.hpp"
#include "hamjac/phase/hamiltonian.hpp"
#include "hamjac/phase/point.hpp"

namespace hamjac {

struct SystemDefinition {
  std::size_t n = 1;
  StructureKind structure = StructureKind::symplectic;
  std::string hamiltonian;
  ParameterMap params;
  std::optional<std::vector<std::string>> section;
  bool q_singular = false;

  HamiltonianFunction make_hamiltonian() const {
    HamiltonianFunction h(hamiltonian, n, params);
    h.declare_q_singular(q_singular);
    return h;
  }
  std::optional<Section> make_section() const {
    if (!section) return std::nullopt;
    return Section(*section, n, params);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["structure"] = std::string(to_string(structure));
    j["hamiltonian"] = hamiltonian;
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : params) j["params"][k] = v;
    if (section) j["section"] = *section;
    if (q_singular) j["q_singular"] = true;
    return j;
  }
};

inline SystemDefinition parse_system_definition(const nlohmann::json& j) {
  auto fail = [](const std::string& what) -> SystemDefinition { throw InvalidArgument("system definition: " + what); };
  if (!j.is_object()) return fail("top level must be an object");
  SystemDefinition d;
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    return fail("\"n\" must be an integer >= 1");
  d.n = j["n"].get<std::size_t>();
  if (!j.contains("structure") || !j["structure"].is_string()) return fail("\"structure\" must be a string");
  auto kind = parse_structure_kind(j["structure"].get<std::string>());
  if (!kind) return fail("unknown structure '" + j["structure"].get<std::string>() + "'");
  d.structure = *kind;
  if (!j.contains("hamiltonian") || !j["hamiltonian"].is_string()) return fail("\"hamiltonian\" must be a string");
  d.hamiltonian = j["hamiltonian"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) return fail("\"params\" must be an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (!v.is_number()) return fail("parameter '" + k + "' must be a number");
      d.params[k] = v.get<double>();
    }
  }
  if (j.contains("section")) {
    if (!j["section"].is_array()) return fail("\"section\" must be an array of strings");
    std::vector<std::string> comps;
    for (const auto& c : j["section"]) {
      if (!c.is_string()) return fail("\"section\" must be an array of strings");
      comps.push_back(c.get<std::string>());
    }
    if (comps.size() != d.n) return fail("\"section\" needs exactly n components");
    d.section = std::move(comps);
  }
  if (j.contains("q_singular")) d.q_singular = j["q_singular"].get<bool>();
  return d;
}

inline SystemDefinition load_system_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open system definition '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what(), e.byte);
  }
  return parse_system_definition(j);
}

}  // namespace hamjac
