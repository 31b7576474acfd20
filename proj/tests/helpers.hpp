#pragma once

#include <hyperslice/hyperslice.hpp>

#include <optional>
#include <string>
#include <vector>

namespace testing_helpers {

using namespace hyperslice;

inline ConstructibleSet make_set(const FieldPtr& k, AmbientKind kind, std::vector<std::string> vars,
                                 const std::vector<std::string>& eqs, const std::vector<std::string>& ineqs = {}) {
  ConstructibleSet X;
  const unsigned dim = static_cast<unsigned>(kind == AmbientKind::Projective ? vars.size() - 1 : vars.size());
  X.ambient = Ambient{kind, dim, vars};
  X.field = k;
  for (const auto& e : eqs) X.equations.push_back(parse_poly(e, vars, k));
  for (const auto& g : ineqs) X.inequations.push_back(parse_poly(g, vars, k));
  X.validate();
  return X;
}

inline MorphismToPn make_map(const ConstructibleSet& X, const std::vector<std::string>& comps) {
  MorphismToPn phi;
  phi.n = static_cast<unsigned>(comps.size() - 1);
  for (const auto& c : comps) phi.components.push_back(parse_poly(c, X.ambient.variables, X.field));
  phi.validate(X);
  return phi;
}

inline Hyperplane hyperplane(const Field& k, std::initializer_list<std::int64_t> c) {
  std::vector<Elem> v;
  for (auto x : c) v.push_back(k.from_int(x));
  return make_projective<Hyperplane>(k, std::move(v));
}

inline std::string scenario_path(const std::string& name) { return std::string(HYPERSLICE_SCENARIOS) + "/" + name + ".json"; }

/// Code of the hyperslice::Error thrown by fn, or nullopt when none is thrown.
template <class Fn>
std::optional<ErrorCode> error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing_helpers
