#include "bfev/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bfev/family_spec.hpp"
#include "bfev/format.hpp"

namespace bfev {

namespace {

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(number_from_json(e));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string("JSON: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json number_to_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  if (j.is_null()) return std::nan("");
  throw std::invalid_argument("JSON: expected a number");
}

Json to_json(const UnivariateDF& F, std::span<const double> fallback_knots) {
  if (F.kind() == UnivariateDF::Kind::parametric && !F.spec().empty()) {
    return Json{{"kind", "parametric"},
                {"spec", F.spec()},
                {"L", number_to_json(F.lower())},
                {"upper", number_to_json(F.upper())}};
  }
  std::vector<double> knots, vals;
  if (F.kind() == UnivariateDF::Kind::grid) {
    knots.assign(F.knots().begin(), F.knots().end());
    vals.assign(F.values().begin(), F.values().end());
  } else {
    if (fallback_knots.empty())
      throw std::invalid_argument("JSON: a parametric DF without a spec needs sample knots");
    knots.assign(fallback_knots.begin(), fallback_knots.end());
    for (double x : knots) vals.push_back(F(x));
  }
  Json j{{"kind", "grid"}, {"L", number_to_json(F.lower())}, {"knots", knots}, {"values", vals}};
  j["upper"] = number_to_json(F.upper());
  return j;
}

UnivariateDF univariate_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "parametric") return parse_marginal(field(j, "spec").get<std::string>());
  if (kind != "grid") throw std::invalid_argument("JSON: unknown univariate kind '" + kind + "'");
  auto knots = numbers(field(j, "knots"), "knots");
  auto vals = numbers(field(j, "values"), "values");
  std::optional<double> upper;
  if (j.contains("upper")) {
    const double u = number_from_json(j.at("upper"));
    // A declared upper point is only needed when the values stop short of 1.
    if (vals.empty() || vals.back() < 1.0) upper = u;
  }
  return UnivariateDF::grid(std::move(knots), std::move(vals), upper);
}

Json to_json(const BivariateDF& F) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < F.nx(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < F.ny(); ++j) row.push_back(F.value(i, j));
    rows.push_back(std::move(row));
  }
  const Point L = F.lower();
  return Json{{"kind", "grid"},
              {"L", {number_to_json(L.x), number_to_json(L.y)}},
              {"knots",
               {std::vector<double>(F.xknots().begin(), F.xknots().end()),
                std::vector<double>(F.yknots().begin(), F.yknots().end())}},
              {"values", rows},
              {"marginals", {to_json(F.marginal1(), F.xknots()), to_json(F.marginal2(), F.yknots())}}};
}

BivariateDF bivariate_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind != "grid") throw std::invalid_argument("JSON: unknown bivariate kind '" + kind + "'");
  const Json& knots = field(j, "knots");
  if (!knots.is_array() || knots.size() != 2)
    throw std::invalid_argument("JSON: knots must be [xknots, yknots]");
  auto xs = numbers(knots[0], "xknots");
  auto ys = numbers(knots[1], "yknots");
  const Json& rows = field(j, "values");
  if (!rows.is_array() || rows.size() != xs.size())
    throw std::invalid_argument("JSON: values must have one row per x knot");
  std::vector<double> vals;
  for (const auto& row : rows) {
    auto r = numbers(row, "values row");
    if (r.size() != ys.size())
      throw std::invalid_argument("JSON: each values row needs one entry per y knot");
    vals.insert(vals.end(), r.begin(), r.end());
  }
  if (!j.contains("marginals")) return grid_from_values(std::move(xs), std::move(ys), std::move(vals));
  const Json& m = j.at("marginals");
  if (!m.is_array() || m.size() != 2)
    throw std::invalid_argument("JSON: marginals must hold two univariate DFs");
  return BivariateDF::grid(univariate_from_json(m[0]), univariate_from_json(m[1]), std::move(xs),
                           std::move(ys), std::move(vals));
}

Json to_json(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({a.at.x, a.at.y, a.mass});
  return Json{{"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const Json& j) {
  const Json& atoms = field(j, "atoms");
  if (!atoms.is_array()) throw std::invalid_argument("JSON: atoms must be an array");
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    auto v = numbers(a, "atom");
    if (v.size() != 3) throw std::invalid_argument("JSON: each atom is [x, y, mass]");
    out.push_back({{v[0], v[1]}, v[2]});
  }
  return DiscreteMeasure(std::move(out));
}

Json to_json(const Verdict& v) {
  Json j{{"status", to_string(v.status)}, {"reason", v.reason}, {"margin", number_to_json(v.margin)}};
  if (v.witness) {
    Json pts = Json::array();
    for (const auto& p : v.witness->points) pts.push_back({number_to_json(p.x), number_to_json(p.y)});
    j["witness"] = Json{{"quantity", v.witness->quantity},
                        {"points", pts},
                        {"value", number_to_json(v.witness->value)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

void write_surface_csv(std::ostream& os, const Surface& s) {
  os << "x,y,value\n";
  for (std::size_t i = 0; i < s.xs.size(); ++i)
    for (std::size_t j = 0; j < s.ys.size(); ++j)
      os << format_double(s.xs[i]) << ',' << format_double(s.ys[j]) << ','
         << format_double(s.at(i, j)) << '\n';
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << text;
}

}  // namespace bfev
