#include "bfev/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bfev/biconv.hpp"
#include "bfev/format.hpp"

namespace bfev {

namespace {

void validate(const GEVParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw std::invalid_argument("GEV: sigma must be > 0");
  if (!std::isfinite(p.xi) || !std::isfinite(p.m))
    throw std::invalid_argument("GEV: xi and m must be finite");
}

std::string gev_spec(const char* name, const GEVParams& p) {
  return std::string(name) + ":m=" + format_double(p.m) + ",sigma=" + format_double(p.sigma) +
         ",xi=" + format_double(p.xi);
}

// log z with z = 1 + xi (x - m) / sigma; -inf outside the support.
double log_z(const GEVParams& p, double x) {
  const double w = p.xi * (x - p.m) / p.sigma;
  return w <= -1.0 ? -kInf : std::log1p(w);
}

// The tail exponent z^(-1/xi) (or e^{-(x-m)/sigma} at xi = 0); +inf below the
// support, 0 above it.
double tail_exponent(const GEVParams& p, double x) {
  if (p.xi == 0.0) return std::exp(-(x - p.m) / p.sigma);
  const double lz = log_z(p, x);
  if (lz == -kInf) return p.xi > 0.0 ? kInf : 0.0;
  return std::exp(-lz / p.xi);
}

std::optional<GEVParams> parse_gev_spec(const std::string& spec) {
  if (spec.rfind("gev:", 0) != 0) return std::nullopt;
  std::map<std::string, double> kv;
  std::stringstream ss(spec.substr(4));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) return std::nullopt;
    kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  if (!kv.count("xi") || !kv.count("m") || !kv.count("sigma")) return std::nullopt;
  return GEVParams{kv["xi"], kv["m"], kv["sigma"]};
}

UnivariateDF free_gev_named(const GEVParams& p, std::string spec) {
  validate(p);
  const double upper = p.xi < 0.0 ? p.m - p.sigma / p.xi : kInf;
  return UnivariateDF::parametric(
      [p](double x) {
        if (x < p.m) return 0.0;
        if (p.xi == 0.0) return -std::expm1(-(x - p.m) / p.sigma);
        const double lz = log_z(p, x);
        if (lz == -kInf) return 1.0;
        return -std::expm1(-lz / p.xi);
      },
      p.m, upper, std::move(spec));
}

}  // namespace

UnivariateDF gev_df(const GEVParams& p) {
  validate(p);
  double lo = -kInf, hi = kInf;
  if (p.xi > 0.0) lo = p.m - p.sigma / p.xi;
  if (p.xi < 0.0) hi = p.m - p.sigma / p.xi;
  return UnivariateDF::parametric([p](double x) { return std::exp(-tail_exponent(p, x)); }, lo, hi,
                                  gev_spec("gev", p));
}

UnivariateDF free_gev(const GEVParams& p) { return free_gev_named(p, gev_spec("free-gev", p)); }

UnivariateDF free_exponential() { return free_gev_named({0.0, 0.0, 1.0}, "exponential"); }

UnivariateDF free_pareto(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("pareto: alpha must be > 0");
  return free_gev_named({1.0 / alpha, 1.0, 1.0 / alpha}, "pareto:alpha=" + format_double(alpha));
}

UnivariateDF free_beta(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("beta: alpha must be > 0");
  return free_gev_named({-1.0 / alpha, -1.0, 1.0 / alpha}, "beta:alpha=" + format_double(alpha));
}

UnivariateDF uniform_df(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("uniform: need finite a < b");
  return UnivariateDF::parametric([a, b](double x) { return (x - a) / (b - a); }, a, b,
                                  "uniform:a=" + format_double(a) + ",b=" + format_double(b));
}

UnivariateDF free_from_classical(const UnivariateDF& G) {
  if (auto p = parse_gev_spec(G.spec())) return free_gev(*p);
  auto lift = [](double v) { return v > 0.0 ? std::max(1.0 + std::log(v), 0.0) : 0.0; };
  if (G.kind() == UnivariateDF::Kind::grid) {
    std::vector<double> knots(G.knots().begin(), G.knots().end());
    std::vector<double> vals(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) vals[i] = lift(G.values()[i]);
    const auto declared = vals.back() >= 1.0 ? std::nullopt : std::optional<double>(G.upper());
    return UnivariateDF::grid(std::move(knots), std::move(vals), declared);
  }
  // Support starts where G first exceeds 1/e.
  const double level = std::exp(-1.0);
  double lo = G.lower(), hi = G.upper();
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (G(lo) > level) lo -= 2.0 * (std::abs(lo) + 1.0);
  }
  if (!std::isfinite(hi)) {
    hi = lo + 1.0;
    while (!(G(hi) > level)) hi += 2.0 * (std::abs(hi) + 1.0);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (G(mid) > level ? hi : lo) = mid;
  }
  return UnivariateDF::parametric([G, lift](double x) { return lift(G(x)); }, hi, G.upper());
}

// ---------------------------------------------------------------------------

NormalizingSequence NormalizingSequence::identity() {
  auto one = [](long long) { return 1.0; };
  auto zero = [](long long) { return 0.0; };
  return {one, zero, one, zero};
}

std::pair<double, double> gev_normalizer(const GEVParams& p, long long n) {
  validate(p);
  if (n < 1) throw std::invalid_argument("normalizer: n must be >= 1");
  const double dn = static_cast<double>(n);
  if (p.xi == 0.0) return {1.0, p.sigma * std::log(dn)};
  const double a = std::pow(dn, p.xi);
  return {a, p.m * (1.0 - a) + p.sigma * (a - 1.0) / p.xi};
}

NormalizingSequence NormalizingSequence::from_gev(const GEVParams& p1, const GEVParams& p2) {
  validate(p1);
  validate(p2);
  return {[p1](long long n) { return gev_normalizer(p1, n).first; },
          [p1](long long n) { return gev_normalizer(p1, n).second; },
          [p2](long long n) { return gev_normalizer(p2, n).first; },
          [p2](long long n) { return gev_normalizer(p2, n).second; }};
}

BivariateDF classical_mev(const UnivariateDF& G1, const UnivariateDF& G2, const PickandsFn& A,
                          ProbeGrid knots) {
  QFunction q = [G1, G2, A](double x, double y) {
    const double l1 = std::log(G1(x)), l2 = std::log(G2(y));
    const double s = l1 + l2;
    if (s == 0.0) return 1.0;
    return std::exp(s * (1.0 - A(l1 / s)));
  };
  return BivariateDF::from_q(G1, G2, std::move(q), std::move(knots));
}

BivariateDF bifree_ev(const UnivariateDF& F1, const UnivariateDF& F2, const PickandsFn& A,
                      ProbeGrid knots) {
  return couple(bifree_copula(A), F1, F2, std::move(knots));
}

std::vector<StabilityRow> check_max_stable(const BivariateDF& F, const NormalizingSequence& seq,
                                           const std::vector<long long>& ns,
                                           const ProbeGrid& probe) {
  std::vector<StabilityRow> out;
  const auto pts = probe.points();
  for (long long n : ns) {
    if (n < 1) throw std::invalid_argument("check_max_stable: n must be >= 1");
    const double a = seq.a(n), b = seq.b(n), c = seq.c(n), d = seq.d(n);
    if (!(a > 0.0) || !(c > 0.0))
      throw std::invalid_argument("check_max_stable: normalizers a(n), c(n) must be > 0");
    const auto P = bifree_power(F, static_cast<double>(n));
    double dist = 0.0;
    for (const auto& p : pts) dist = std::max(dist, std::abs(P.eval(a * p.x + b, c * p.y + d) - F(p)));
    out.push_back({n, dist});
  }
  return out;
}

std::vector<DoaRow> doa_experiment(const BivariateDF& H, const NormalizingSequence& seq,
                                   const BivariateDF& G, const BivariateDF& F,
                                   const std::vector<long long>& ns, const ProbeGrid& probe) {
  std::vector<DoaRow> out;
  const auto pts = probe.points();
  for (long long n : ns) {
    if (n < 1) throw std::invalid_argument("doa_experiment: n must be >= 1");
    const double dn = static_cast<double>(n);
    const double a = seq.a(n), b = seq.b(n), c = seq.c(n), d = seq.d(n);
    if (!(a > 0.0) || !(c > 0.0))
      throw std::invalid_argument("doa_experiment: normalizers a(n), c(n) must be > 0");
    double classical = 0.0;
    for (const auto& p : pts) {
      const double g = G(p);
      if (!(g > 0.0)) continue;
      classical = std::max(classical,
                           std::abs(dn * (1.0 - H.eval(a * p.x + b, c * p.y + d)) + std::log(g)));
    }
    const auto P = bifree_power(H, dn);
    double bifree = 0.0;
    for (const auto& p : pts)
      bifree = std::max(bifree, std::abs(P.eval(a * p.x + b, c * p.y + d) - F(p)));
    out.push_back({n, "classical", classical});
    out.push_back({n, "bifree", bifree});
  }
  return out;
}

PickandsSample recover_pickands(const BivariateDF& F, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("recover_pickands: t must lie in (0, 1)");
  const double x = quantile(F.marginal1(), 1.0 - t);
  const double y = quantile(F.marginal2(), t);
  const double u = F.marginal1()(x), v = F.marginal2()(y);
  const double s = (1.0 - u) + (1.0 - v);
  if (!(s > 0.0)) throw std::domain_error("recover_pickands: quantiles saturate both marginals");
  const double Q = transform_Q(F, {x, y});
  return {(1.0 - u) / s, 1.0 - (1.0 - Q) / s};
}

}  // namespace bfev
