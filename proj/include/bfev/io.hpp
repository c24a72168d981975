#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfev/dist_core.hpp"
#include "bfev/verdict.hpp"

namespace bfev {

using Json = nlohmann::json;

/// Number or the strings "inf" / "-inf" (JSON has no infinities).
Json number_to_json(double v);
double number_from_json(const Json& j);

/// Grid DFs serialize as {kind: "grid", L, knots, values, upper}. Parametric
/// DFs with a family spec serialize as {kind: "parametric", spec, L, upper};
/// without one they are sampled on `fallback_knots`.
Json to_json(const UnivariateDF& F, std::span<const double> fallback_knots = {});
UnivariateDF univariate_from_json(const Json& j);

/// {kind: "grid", L: [L1, L2], knots: [xs, ys], values: [[F(x_i, y_j)]_j]_i,
/// marginals: [m1, m2]}. Analytic DFs are written as their sampled grid.
Json to_json(const BivariateDF& F);
BivariateDF bivariate_from_json(const Json& j);

/// {atoms: [[x, y, mass], ...]}.
Json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);

Json to_json(const Verdict& v);

/// Header `x,y,value`, row-major with x outer, shortest round-trip floats.
void write_surface_csv(std::ostream& os, const Surface& s);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bfev
