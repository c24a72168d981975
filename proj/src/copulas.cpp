#include "bfev/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfev/format.hpp"

namespace bfev {

namespace {

using Fn = std::function<double(double, double)>;

std::string param_spec(const std::string& name, const std::map<std::string, double>& params) {
  if (params.empty()) return name;
  std::string out = name + ":";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out += ",";
    out += k + "=" + format_double(v);
    first = false;
  }
  return out;
}

void require_range(double v, double lo, double hi, const std::string& what) {
  if (!(v >= lo && v <= hi))
    throw std::invalid_argument(what + " must lie in [" + format_double(lo) + ", " +
                                format_double(hi) + "]");
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(what + " must be > 0");
}

// 1 - u^(1/p) without cancellation near u = 1.
double one_minus_root(double u, double p) {
  return u <= 0.0 ? 1.0 : -std::expm1(std::log(u) / p);
}

}  // namespace

Copula Copula::from_f(Family family, std::map<std::string, double> params, std::string spec,
                      Fn f, bool smooth, std::shared_ptr<const PickandsFn> A) {
  Fn c = [f](double u, double v) { return u * v / f(u, v); };
  return Copula(std::make_shared<const Impl>(Impl{family, std::move(params), std::move(spec),
                                                  std::move(c), std::move(f), smooth,
                                                  std::move(A), nullptr}));
}

Copula Copula::lomax_like(double p, double theta, Family family, std::string spec) {
  Fn f = [p, theta](double u, double v) {
    const double a = one_minus_root(u, p), b = one_minus_root(v, p);
    return std::exp(p * std::log1p(-theta * a * b));
  };
  std::map<std::string, double> params{{"p", p}};
  if (family == Family::lomax) params["theta"] = theta;
  return from_f(family, std::move(params), std::move(spec), std::move(f), true);
}

Copula Copula::bifree_named(const PickandsFn& A, Family family, std::string spec) {
  auto shared = std::make_shared<const PickandsFn>(A);
  Fn f = [shared](double u, double v) { return f_from_pickands(*shared, u, v); };
  return from_f(family, A.params(), std::move(spec), std::move(f), A.smooth(), shared);
}

Copula Copula::independence() {
  return from_f(Family::independence, {}, "independence", [](double, double) { return 1.0; },
                true);
}

Copula Copula::comonotone() {
  auto c = from_f(Family::comonotone, {}, "comonotone",
                  [](double u, double v) { return std::max(u, v); }, false);
  // Keep min exact rather than uv / max.
  auto impl = std::make_shared<Impl>(*c.impl_);
  impl->c = [](double u, double v) { return std::min(u, v); };
  return Copula(std::move(impl));
}

Copula Copula::amh(double theta) {
  require_range(theta, -1.0, 1.0, "amh theta");
  std::map<std::string, double> p{{"theta", theta}};
  return from_f(Family::amh, p, param_spec("amh", p),
                [theta](double u, double v) { return 1.0 - theta * (1.0 - u) * (1.0 - v); }, true);
}

Copula Copula::fgm(double theta) {
  require_range(theta, -1.0, 1.0, "fgm theta");
  std::map<std::string, double> p{{"theta", theta}};
  auto c = from_f(Family::fgm, p, param_spec("fgm", p),
                  [theta](double u, double v) {
                    return 1.0 / (1.0 + theta * (1.0 - u) * (1.0 - v));
                  },
                  true);
  auto impl = std::make_shared<Impl>(*c.impl_);
  impl->c = [theta](double u, double v) { return u * v * (1.0 + theta * (1.0 - u) * (1.0 - v)); };
  return Copula(std::move(impl));
}

Copula Copula::lomax(double p, double theta) {
  require_positive(p, "lomax p");
  require_range(theta, -p, 1.0, "lomax theta");
  return lomax_like(p, theta, Family::lomax, param_spec("lomax", {{"p", p}, {"theta", theta}}));
}

Copula Copula::clayton(double p) {
  require_positive(p, "clayton p");
  return lomax_like(p, 1.0, Family::clayton, param_spec("clayton", {{"p", p}}));
}

Copula Copula::gumbel_mixed(double theta) {
  const auto A = PickandsFn::gumbel_mixed(theta);
  auto c = bifree_named(A, Family::gumbel_mixed, A.spec());
  // Closed form 1 - theta (1-u)(1-v) / (2-u-v).
  auto impl = std::make_shared<Impl>(*c.impl_);
  impl->f = [theta](double u, double v) {
    const double s = (1.0 - u) + (1.0 - v);
    return s <= 0.0 ? 1.0 : 1.0 - theta * (1.0 - u) * (1.0 - v) / s;
  };
  impl->c = [f = impl->f](double u, double v) { return u * v / f(u, v); };
  return Copula(std::move(impl));
}

Copula Copula::logistic(double m) {
  const auto A = PickandsFn::logistic(m);
  return bifree_named(A, Family::logistic, A.spec());
}

Copula Copula::marshall_olkin(double theta, double phi) {
  const auto A = PickandsFn::marshall_olkin(theta, phi);
  return bifree_named(A, Family::marshall_olkin, A.spec());
}

Copula Copula::grid(std::vector<double> us, std::vector<double> vs, std::vector<double> values) {
  const std::size_t nu = us.size(), nv = vs.size();
  if (nu < 2 || nv < 2 || values.size() != nu * nv)
    throw std::invalid_argument("grid copula: value matrix does not match the knots");
  if (us.front() != 0.0 || us.back() != 1.0 || vs.front() != 0.0 || vs.back() != 1.0)
    throw std::invalid_argument("grid copula: knots must start at 0 and end at 1");
  for (std::size_t i = 1; i < nu; ++i)
    if (!(us[i] > us[i - 1])) throw std::invalid_argument("grid copula: knots must increase");
  for (std::size_t j = 1; j < nv; ++j)
    if (!(vs[j] > vs[j - 1])) throw std::invalid_argument("grid copula: knots must increase");
  auto check = [](double got, double want) {
    if (std::abs(got - want) > 1e-9)
      throw std::invalid_argument("grid copula: boundary values violate C(u,0)=0, C(u,1)=u");
  };
  for (std::size_t i = 0; i < nu; ++i) {
    check(values[i * nv], 0.0);
    check(values[i * nv + nv - 1], us[i]);
  }
  for (std::size_t j = 0; j < nv; ++j) {
    check(values[j], 0.0);
    check(values[(nu - 1) * nv + j], vs[j]);
  }
  Fn c = [us = std::move(us), vs = std::move(vs), vals = std::move(values)](double u, double v) {
    const std::size_t nv = vs.size();
    auto cell = [](const std::vector<double>& k, double x) {
      const auto it = std::upper_bound(k.begin(), k.end(), x);
      const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - k.begin() - 1, 0));
      return std::min(i, k.size() - 2);
    };
    const std::size_t i = cell(us, u), j = cell(vs, v);
    const double a = (u - us[i]) / (us[i + 1] - us[i]);
    const double b = (v - vs[j]) / (vs[j + 1] - vs[j]);
    return (1 - a) * (1 - b) * vals[i * nv + j] + a * (1 - b) * vals[(i + 1) * nv + j] +
           (1 - a) * b * vals[i * nv + j + 1] + a * b * vals[(i + 1) * nv + j + 1];
  };
  return Copula(std::make_shared<const Impl>(
      Impl{Family::grid, {}, "grid", std::move(c), {}, false, nullptr, nullptr}));
}

double Copula::operator()(double u, double v) const {
  if (std::isnan(u) || std::isnan(v)) return std::nan("");
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return v;
  if (v >= 1.0) return u;
  return std::clamp(impl_->c(u, v), 0.0, std::min(u, v));
}

double Copula::f(double u, double v) const {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  if (impl_->f) return impl_->f(u, v);
  const double c = (*this)(u, v);
  return c > 0.0 ? u * v / c : kInf;
}

Copula survival_copula(const Copula& C) {
  auto inner = std::make_shared<const Copula>(C);
  Fn c = [inner](double u, double v) { return (*inner)(1.0 - u, 1.0 - v) + u + v - 1.0; };
  return Copula(std::make_shared<const Copula::Impl>(
      Copula::Impl{Copula::Family::survival_of, {}, "survival:" + C.spec(), std::move(c), {},
                   C.smooth(), nullptr, inner}));
}

Copula ev_copula(const PickandsFn& A) {
  auto shared = std::make_shared<const PickandsFn>(A);
  Fn c = [shared](double u, double v) {
    const double lu = std::log(u), lv = std::log(v);
    const double s = lu + lv;
    return std::exp(s * (*shared)(lu / s));
  };
  return Copula(std::make_shared<const Copula::Impl>(
      Copula::Impl{Copula::Family::ev_from_pickands, A.params(), "ev-" + A.spec(), std::move(c),
                   {}, A.smooth(), shared, nullptr}));
}

Copula bifree_copula(const PickandsFn& A) {
  return Copula::bifree_named(A, Copula::Family::bifree_from_pickands, "bifree-" + A.spec());
}

Copula power_transform(const Copula& C, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("power transform p must lie in (0, 1]");
  if (p == 1.0) return C;
  auto inner = std::make_shared<const Copula>(C);
  Fn f = [inner, p](double u, double v) {
    const double a = u <= 0.0 ? 0.0 : std::pow(u, 1.0 / p);
    const double b = v <= 0.0 ? 0.0 : std::pow(v, 1.0 / p);
    return std::pow(inner->f(a, b), p);
  };
  auto out = Copula::from_f(Copula::Family::power_of, {{"p", p}},
                            "power:p=" + format_double(p) + ":" + C.spec(), std::move(f),
                            C.smooth());
  auto impl = std::make_shared<Copula::Impl>(*out.impl_);
  impl->inner = inner;
  return Copula(std::move(impl));
}

double eval_copula(const Copula& C, double u, double v) { return C(u, v); }

// ---------------------------------------------------------------------------
// Bi-free copula membership

namespace {

struct Tracker {
  explicit Tracker(double t) : tol(t) {}
  double tol;
  double margin = kInf;
  std::optional<Witness> worst;
  double worst_excess = -kInf;

  // Records `value <= bound` (up to tol); the slack is bound - value.
  void leq(double value, double bound, const char* quantity, std::vector<Point> pts) {
    const double slack = bound - value;
    if (std::isnan(slack)) {
      throw std::domain_error(std::string("bi-free copula check: ") + quantity + " is undefined at (" +
                              format_double(pts.front().x) + ", " + format_double(pts.front().y) +
                              ")");
    }
    margin = std::min(margin, slack);
    if (-slack > tol && -slack > worst_excess) {
      worst_excess = -slack;
      worst = Witness{quantity, std::move(pts), value};
    }
  }
};

}  // namespace

Verdict check_bifree_copula(const Copula& C, const CopulaCheckOptions& opts) {
  const bool smooth = opts.mode == CopulaCheckMode::smooth;
  if (smooth && !C.smooth())
    throw std::invalid_argument("bi-free copula check: smooth mode needs a differentiable family; '" +
                                C.spec() + "' is not (use grid mode)");
  if (opts.grid < 3) throw std::invalid_argument("bi-free copula check: probe grid needs >= 3 points");
  const double tol = opts.tol >= 0.0 ? opts.tol : (smooth ? 1e-5 : 1e-9);
  const double h = opts.h;

  // Probes (0, 1]: the grid without its zero row.
  const std::size_t n = opts.grid - 1;
  std::vector<double> us(n);
  for (std::size_t k = 0; k < n; ++k)
    us[k] = static_cast<double>(k + 1) / static_cast<double>(n);

  for (double u : us)
    for (double v : us)
      if (!(C(u, v) > 0.0))
        throw std::domain_error("bi-free copula check: C vanishes at (" + format_double(u) + ", " +
                                format_double(v) + ")");

  Tracker tr{tol};
  for (double u : us) {
    tr.leq(std::abs(C.f(u, 1.0) - 1.0), 0.0, "|f(u,1) - 1|", {{u, 1.0}});
    tr.leq(std::abs(C.f(1.0, u) - 1.0), 0.0, "|f(1,v) - 1|", {{1.0, u}});
  }

  if (!smooth) {
    std::vector<double> F(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) F[i * n + j] = C.f(us[i], us[j]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double du = (F[(i + 1) * n + j] - us[i + 1]) - (F[i * n + j] - us[i]);
        tr.leq(du, 0.0, "increment of f(u,v) - u in u", {{us[i], us[j]}, {us[i + 1], us[j]}});
        const double dv = (F[j * n + i + 1] - us[i + 1]) - (F[j * n + i] - us[i]);
        tr.leq(dv, 0.0, "increment of f(u,v) - v in v", {{us[j], us[i]}, {us[j], us[i + 1]}});
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const double vol =
            F[(i + 1) * n + j + 1] - F[i * n + j + 1] - F[(i + 1) * n + j] + F[i * n + j];
        tr.leq(vol, 0.0, "f-volume of cell", {{us[i], us[j]}, {us[i + 1], us[j + 1]}});
      }
  } else {
    const double lo = 2.0 * h, hi = 1.0 - 2.0 * h;
    for (double u0 : us) {
      for (double v0 : us) {
        const double u = std::clamp(u0, lo, hi), v = std::clamp(v0, lo, hi);
        const double fu = (C.f(u + h, v) - C.f(u - h, v)) / (2.0 * h);
        const double fv = (C.f(u, v + h) - C.f(u, v - h)) / (2.0 * h);
        const double fuv = (C.f(u + h, v + h) - C.f(u + h, v - h) - C.f(u - h, v + h) +
                            C.f(u - h, v - h)) /
                           (4.0 * h * h);
        tr.leq(-fu, 0.0, "-df/du", {{u, v}});
        tr.leq(fu, 1.0, "df/du", {{u, v}});
        tr.leq(-fv, 0.0, "-df/dv", {{u, v}});
        tr.leq(fv, 1.0, "df/dv", {{u, v}});
        tr.leq(fuv, 0.0, "d2f/dudv", {{u, v}});
      }
    }
  }

  Verdict out;
  out.margin = tr.margin;
  if (tr.worst) {
    out.status = Status::no;
    out.reason = "nonmember: " + tr.worst->quantity + " exceeds its bound";
    out.witness = tr.worst;
  } else {
    out.status = Status::yes;
    out.reason = "member";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attraction and axioms

std::vector<double> doa_iterate(const Copula& C, long long n, const ProbeGrid& probe) {
  if (n < 1) throw std::invalid_argument("doa_iterate: n must be >= 1");
  const double dn = static_cast<double>(n);
  std::vector<double> out;
  out.reserve(probe.size());
  for (double u : probe.xs) {
    for (double v : probe.ys) {
      if (n == 1 || u <= 0.0 || v <= 0.0 || u >= 1.0 || v >= 1.0) {
        out.push_back(C(u, v));
        continue;
      }
      const double c = C(std::exp(std::log(u) / dn), std::exp(std::log(v) / dn));
      out.push_back(c > 0.0 ? std::exp(dn * std::log(c)) : 0.0);
    }
  }
  return out;
}

double doa_distance(const Copula& C, const Copula& target, long long n, const ProbeGrid& probe) {
  const auto vals = doa_iterate(C, n, probe);
  double d = 0.0;
  std::size_t k = 0;
  for (double u : probe.xs)
    for (double v : probe.ys) d = std::max(d, std::abs(vals[k++] - target(u, v)));
  return d;
}

AxiomReport check_copula_axioms(const Copula& C, std::size_t grid, double tol) {
  const auto g = linspace(0.0, 1.0, grid);
  const std::size_t n = g.size();
  std::vector<double> V(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) V[i * n + j] = C(g[i], g[j]);

  AxiomReport r;
  for (std::size_t k = 0; k < n; ++k) {
    r.boundary = std::max({r.boundary, std::abs(V[k]), std::abs(V[k * n]),
                           std::abs(V[k * n + n - 1] - g[k]), std::abs(V[(n - 1) * n + k] - g[k])});
  }
  r.min_volume = is_quasi_monotone(g, g, V, tol).min_volume;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = V[i * n + j];
      r.frechet = std::max({r.frechet, c - std::min(g[i], g[j]), std::max(0.0, g[i] + g[j] - 1.0) - c});
      if (i + 1 < n)
        r.lipschitz = std::max(r.lipschitz, std::abs(V[(i + 1) * n + j] - c) - (g[i + 1] - g[i]));
      if (j + 1 < n)
        r.lipschitz = std::max(r.lipschitz, std::abs(V[i * n + j + 1] - c) - (g[j + 1] - g[j]));
      if (i + 1 < n && j + 1 < n)
        r.lipschitz = std::max(r.lipschitz, std::abs(V[(i + 1) * n + j + 1] - c) -
                                                (g[i + 1] - g[i]) - (g[j + 1] - g[j]));
    }
  }
  r.pass = r.boundary <= tol && r.min_volume >= -tol && r.lipschitz <= tol && r.frechet <= tol;
  return r;
}

BivariateDF couple(const Copula& C, const UnivariateDF& m1, const UnivariateDF& m2,
                   ProbeGrid knots) {
  if (C.has_closed_f()) {
    QFunction q = [C, m1, m2](double x, double y) { return C.f(m1(x), m2(y)); };
    return BivariateDF::from_q(m1, m2, std::move(q), std::move(knots));
  }
  return BivariateDF::from_function(
      m1, m2, [C, m1, m2](double x, double y) { return C(m1(x), m2(y)); }, std::move(knots));
}

}  // namespace bfev
