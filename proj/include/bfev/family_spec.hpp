#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfev/copulas.hpp"
#include "bfev/dist_core.hpp"
#include "bfev/extremes.hpp"

namespace bfev {

/// `name:key=val,key=val` split into its parts. Items without '=' are kept in
/// order as positional values.
struct FamilySpec {
  std::string name;
  std::map<std::string, std::string> kv;
  std::vector<std::string> positional;
  std::string raw;

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  /// Throws unless every key is in `allowed`.
  void only(std::initializer_list<const char*> allowed) const;
};

FamilySpec parse_spec(const std::string& text);

/// Parses a real number, accepting "inf" and "-inf"; throws on trailing text.
double parse_number(const std::string& text);
/// "a,b,c" -> numbers.
std::vector<double> parse_number_list(const std::string& text);

PickandsFn parse_pickands(const std::string& text);
Copula parse_copula(const std::string& text);
UnivariateDF parse_marginal(const std::string& text);
/// A file path (JSON grid DF), `@path`, or `dirac:x,y`.
BivariateDF parse_bivariate(const std::string& text);
/// A JSON measure file, `@path`, or `dirac:x,y` (unit mass).
DiscreteMeasure parse_measure(const std::string& text);

/// GEV parameters of a named free extreme type (exponential, pareto, beta,
/// free-gev), or of a classical `gev:` spec.
std::optional<GEVParams> extreme_type_params(const std::string& text);

}  // namespace bfev
