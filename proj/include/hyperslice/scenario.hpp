#pragma once

// Scenario documents: one self-contained JSON object describing (X, phi, n)
// with integer-coefficient expressions, so the same file instantiates over
// every GF(q) of a census.
//
//   {
//     "name": "quadric-y2x1",
//     "description": "optional free text",
//     "field": {"p": 5, "e": 1},                 // optional default field
//     "q_list": [3, 5, 7, 9],                    // optional default census list
//     "ambient": {"kind": "affine", "dim": 3, "variables": ["x1", "x2", "y"]},
//     "equations": ["y^2 - x1"],
//     "inequations": [],
//     "morphism": {"target_dim": 2, "components": ["1", "x1", "x2"]},
//     "r": 2,
//     "codim": 0,
//     "options": {"classifier": "threshold", "M": 2, "budget": 1000000000,
//                 "characteristic_blacklist": [2]}
//   }
//
// Unknown keys are rejected.

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/irreddetect.hpp>
#include <hyperslice/parse.hpp>
#include <hyperslice/variety.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hyperslice {

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t e = 1;

  std::uint64_t order() const { return checked_pow(p, e); }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct ScenarioOptions {
  ClassifierMode classifier = ClassifierMode::Threshold;
  std::uint32_t M = 2;
  std::uint64_t budget = kDefaultBudget;
  std::vector<std::uint32_t> characteristic_blacklist;

  friend bool operator==(const ScenarioOptions&, const ScenarioOptions&) = default;
};

struct Scenario {
  std::string name;
  std::string description;
  std::optional<FieldSpec> field;
  std::vector<std::uint64_t> q_list;
  AmbientKind kind = AmbientKind::Affine;
  unsigned dim = 1;
  std::vector<std::string> variables;
  std::vector<std::string> equations;
  std::vector<std::string> inequations;
  unsigned target_dim = 1;
  std::vector<std::string> components;
  unsigned r = 1;
  unsigned codim = 0;
  ScenarioOptions options;

  friend bool operator==(const Scenario&, const Scenario&) = default;

  /// The scenario over GF(q), modulus chosen with seed 0.  Throws
  /// InvalidScenario when q's characteristic is blacklisted.
  Instance instantiate(std::uint64_t q) const {
    const auto [p, e] = split_prime_power(q);
    const auto& bl = options.characteristic_blacklist;
    if (std::find(bl.begin(), bl.end(), p) != bl.end())
      throw Error(ErrorCode::InvalidScenario, "scenario '" + name + "' excludes characteristic " + std::to_string(p));
    return instantiate(make_field(p, e, 0));
  }

  Instance instantiate(const FieldPtr& k) const {
    Instance inst;
    auto& X = inst.variety;
    X.ambient = Ambient{kind, dim, variables};
    X.field = k;
    auto parse_all = [&](const std::vector<std::string>& src, std::vector<Poly>& dst, const char* what) {
      for (const auto& s : src) {
        try {
          dst.push_back(parse_poly(s, variables, k));
        } catch (const Error& err) {
          throw Error(err.code(), std::string(what) + " '" + s + "': " + err.what());
        }
      }
    };
    parse_all(equations, X.equations, "equation");
    parse_all(inequations, X.inequations, "inequation");
    inst.morphism.n = target_dim;
    parse_all(components, inst.morphism.components, "morphism component");
    X.validate();
    inst.morphism.validate(X);
    return inst;
  }

  /// Field order used when none is given on the command line.
  std::optional<std::uint64_t> default_q() const {
    if (field) return field->order();
    if (!q_list.empty()) return q_list.front();
    return std::nullopt;
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidScenario, where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw Error(ErrorCode::InvalidScenario, "unknown key '" + key + "' in " + where);
}

template <class T>
T required(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidScenario, "missing key '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidScenario, "bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

template <class T>
T optional_value(const nlohmann::json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return required<T>(j, key, where);
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::optional_value;
  using detail::required;
  detail::reject_unknown_keys(j,
                              {"name", "description", "field", "q_list", "ambient", "equations", "inequations", "morphism", "r",
                               "codim", "options"},
                              "scenario");
  Scenario s;
  s.name = required<std::string>(j, "name", "scenario");
  s.description = optional_value<std::string>(j, "description", "", "scenario");
  if (j.contains("field")) {
    const auto& f = j.at("field");
    detail::reject_unknown_keys(f, {"p", "e"}, "field");
    s.field = FieldSpec{required<std::uint32_t>(f, "p", "field"), optional_value<std::uint32_t>(f, "e", 1, "field")};
  }
  s.q_list = optional_value<std::vector<std::uint64_t>>(j, "q_list", {}, "scenario");
  if (!j.contains("ambient")) throw Error(ErrorCode::InvalidScenario, "missing key 'ambient' in scenario");
  const auto& a = j.at("ambient");
  detail::reject_unknown_keys(a, {"kind", "dim", "variables"}, "ambient");
  const auto kind = required<std::string>(a, "kind", "ambient");
  if (kind == "affine")
    s.kind = AmbientKind::Affine;
  else if (kind == "projective")
    s.kind = AmbientKind::Projective;
  else
    throw Error(ErrorCode::InvalidScenario, "ambient kind must be 'affine' or 'projective', got '" + kind + "'");
  s.dim = required<unsigned>(a, "dim", "ambient");
  s.variables = required<std::vector<std::string>>(a, "variables", "ambient");
  for (const auto& v : s.variables)
    if (!is_valid_variable_name(v)) throw Error(ErrorCode::InvalidScenario, "invalid variable name '" + v + "'");
  s.equations = optional_value<std::vector<std::string>>(j, "equations", {}, "scenario");
  s.inequations = optional_value<std::vector<std::string>>(j, "inequations", {}, "scenario");
  if (!j.contains("morphism")) throw Error(ErrorCode::InvalidScenario, "missing key 'morphism' in scenario");
  const auto& m = j.at("morphism");
  detail::reject_unknown_keys(m, {"target_dim", "components"}, "morphism");
  s.target_dim = required<unsigned>(m, "target_dim", "morphism");
  s.components = required<std::vector<std::string>>(m, "components", "morphism");
  s.r = required<unsigned>(j, "r", "scenario");
  s.codim = required<unsigned>(j, "codim", "scenario");
  if (j.contains("options")) {
    const auto& o = j.at("options");
    detail::reject_unknown_keys(o, {"classifier", "M", "budget", "characteristic_blacklist"}, "options");
    s.options.classifier = parse_classifier_mode(optional_value<std::string>(o, "classifier", "threshold", "options"));
    s.options.M = optional_value<std::uint32_t>(o, "M", 2, "options");
    s.options.budget = optional_value<std::uint64_t>(o, "budget", kDefaultBudget, "options");
    s.options.characteristic_blacklist =
        optional_value<std::vector<std::uint32_t>>(o, "characteristic_blacklist", {}, "options");
  }
  const std::size_t arity = s.kind == AmbientKind::Projective ? s.dim + 1 : s.dim;
  if (s.dim < 1 || s.variables.size() != arity)
    throw Error(ErrorCode::InvalidScenario, "ambient of dimension " + std::to_string(s.dim) + " needs " + std::to_string(arity) +
                                                " variables");
  if (s.components.size() != s.target_dim + 1)
    throw Error(ErrorCode::InvalidScenario, "morphism to P^" + std::to_string(s.target_dim) + " needs " +
                                                std::to_string(s.target_dim + 1) + " components");
  if (s.options.M < 1) throw Error(ErrorCode::InvalidScenario, "options.M must be >= 1");
  return s;
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  if (s.field) j["field"] = {{"p", s.field->p}, {"e", s.field->e}};
  if (!s.q_list.empty()) j["q_list"] = s.q_list;
  j["ambient"] = {{"kind", s.kind == AmbientKind::Projective ? "projective" : "affine"},
                  {"dim", s.dim},
                  {"variables", s.variables}};
  j["equations"] = s.equations;
  j["inequations"] = s.inequations;
  j["morphism"] = {{"target_dim", s.target_dim}, {"components", s.components}};
  j["r"] = s.r;
  j["codim"] = s.codim;
  j["options"] = {{"classifier", std::string(to_string(s.options.classifier))},
                  {"M", s.options.M},
                  {"budget", s.options.budget},
                  {"characteristic_blacklist", s.options.characteristic_blacklist}};
  return j;
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidScenario, std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidScenario, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

}  // namespace hyperslice
