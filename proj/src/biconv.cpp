#include "bfev/biconv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfev/format.hpp"

namespace bfev {

namespace {

using Fn1 = std::function<double(double)>;

// inf{x : h(x) > 0} for nondecreasing h, searched above `lo`.
double positivity_threshold(const Fn1& h, double lo, double hi) {
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (h(lo) > 0.0) lo -= 2.0 * (std::abs(lo) + 1.0);
  }
  if (h(lo) > 0.0) return lo;
  if (!std::isfinite(hi)) {
    hi = lo + 1.0;
    while (!(h(hi) > 0.0)) hi += 2.0 * (std::abs(hi) + 1.0);
  }
  const double start = lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  // Cancellation in h leaves the search a few ulps above an exact start.
  if (hi - start <= 1e-12 * std::max(1.0, std::abs(start))) return start;
  return hi;
}

std::optional<double> declared_upper(const std::vector<double>& vals, double upper) {
  return vals.back() >= 1.0 ? std::nullopt : std::optional<double>(upper);
}

bool is_analytic(const BivariateDF& F) { return F.kind() == BivariateDF::Kind::analytic; }

}  // namespace

UnivariateDF free_maxconv(const UnivariateDF& F, const UnivariateDF& G) {
  const double up = std::max(F.upper(), G.upper());
  if (F.kind() == UnivariateDF::Kind::grid && G.kind() == UnivariateDF::Kind::grid) {
    auto knots = merge_knots(F.knots(), G.knots());
    std::vector<double> vals(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
      vals[i] = std::max(F(knots[i]) + G(knots[i]) - 1.0, 0.0);
    const auto declared = declared_upper(vals, up);
    return UnivariateDF::grid(std::move(knots), std::move(vals), declared);
  }
  Fn1 h = [F, G](double x) { return std::max(F(x) + G(x) - 1.0, 0.0); };
  const double lo = positivity_threshold(h, std::max(F.lower(), G.lower()), up);
  return UnivariateDF::parametric(std::move(h), lo, up);
}

UnivariateDF free_power(const UnivariateDF& F, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("power: t must be >= 0");
  if (t == 1.0) return F;
  const double L = F.lower();
  if (t < 1.0 && !std::isfinite(L))
    throw std::domain_error("power: no canonical root for a marginal unbounded below");
  auto rule = [t, L](double x, double v) {
    if (t >= 1.0) return std::max(t * v - (t - 1.0), 0.0);
    return x >= L ? 1.0 - t * (1.0 - v) : 0.0;
  };
  if (F.kind() == UnivariateDF::Kind::grid) {
    std::vector<double> knots(F.knots().begin(), F.knots().end());
    std::vector<double> vals(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) vals[i] = rule(knots[i], F.values()[i]);
    const auto declared = declared_upper(vals, F.upper());
    return UnivariateDF::grid(std::move(knots), std::move(vals), declared);
  }
  Fn1 h = [F, rule](double x) { return rule(x, F(x)); };
  if (t == 0.0) return UnivariateDF::parametric(std::move(h), L, L);
  const double lo = t < 1.0 ? L : positivity_threshold(h, L, F.upper());
  return UnivariateDF::parametric(std::move(h), lo, F.upper());
}

BivariateDF bifree_maxconv(const BivariateDF& F, const BivariateDF& G) {
  auto m1 = free_maxconv(F.marginal1(), G.marginal1());
  auto m2 = free_maxconv(F.marginal2(), G.marginal2());
  ProbeGrid knots{merge_knots(F.xknots(), G.xknots()), merge_knots(F.yknots(), G.yknots())};

  if (is_analytic(F) && is_analytic(G)) {
    QFunction q = [F, G](double x, double y) { return F.q_at(x, y) + G.q_at(x, y) - 1.0; };
    return BivariateDF::from_q(std::move(m1), std::move(m2), std::move(q), std::move(knots));
  }

  const std::size_t nx = knots.xs.size(), ny = knots.ys.size();
  std::vector<double> vals(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = knots.xs[i];
    const double h1 = m1(x);
    if (h1 <= 0.0) continue;
    const double f1 = F.marginal1()(x), g1 = G.marginal1()(x);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = knots.ys[j];
      const double h2 = m2(y);
      if (h2 <= 0.0) continue;
      const double f = F.eval(x, y), g = G.eval(x, y);
      if (f <= 0.0 || g <= 0.0) continue;
      const double qf = f1 * F.marginal2()(y) / f;
      const double qg = g1 * G.marginal2()(y) / g;
      vals[i * ny + j] = std::clamp(h1 * h2 / (qf + qg - 1.0), 0.0, std::min(h1, h2));
    }
  }
  return BivariateDF::grid(std::move(m1), std::move(m2), std::move(knots.xs), std::move(knots.ys),
                           std::move(vals));
}

BivariateDF bifree_power(const BivariateDF& F, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("power: t must be >= 0");
  if (t == 1.0) return F;
  auto m1 = free_power(F.marginal1(), t);
  auto m2 = free_power(F.marginal2(), t);

  // On the boundary of the support the Q-transform may be undefined (0/0);
  // there the root is taken with Q = 1, i.e. the product of its marginals.
  auto scale_q = [t](double q) {
    if (std::isnan(q)) return 1.0;
    if (q == kInf) return kInf;
    return 1.0 + t * (q - 1.0);
  };

  if (is_analytic(F)) {
    QFunction q = [F, scale_q](double x, double y) { return scale_q(F.q_at(x, y)); };
    return BivariateDF::from_q(std::move(m1), std::move(m2), std::move(q), F.knot_grid());
  }

  const std::size_t nx = F.nx(), ny = F.ny();
  std::vector<double> vals(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = F.xknots()[i];
    const double a = m1(x);
    if (a <= 0.0) continue;
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = F.yknots()[j];
      const double b = m2(y);
      if (b <= 0.0) continue;
      const double q = scale_q(F.q_at(x, y));
      if (q == kInf) continue;
      vals[i * ny + j] = std::clamp(a * b / q, 0.0, std::min(a, b));
    }
  }
  std::vector<double> xs(F.xknots().begin(), F.xknots().end());
  std::vector<double> ys(F.yknots().begin(), F.yknots().end());
  return BivariateDF::grid(std::move(m1), std::move(m2), std::move(xs), std::move(ys),
                           std::move(vals));
}

// ---------------------------------------------------------------------------
// Transforms

double transform_Q(const BivariateDF& F, Point x) {
  const double f = F(x);
  if (!(f > 0.0))
    throw std::domain_error("Q_F is undefined where F = 0 (at " + format_double(x.x) + ", " +
                            format_double(x.y) + ")");
  return F.marginal1()(x.x) * F.marginal2()(x.y) / f;
}

double transform_T(const BivariateDF& F, Point x) {
  const double a = F.marginal1()(x.x), b = F.marginal2()(x.y);
  return transform_Q(F, x) - a - b + 1.0;
}

namespace {

Surface make_surface(const BivariateDF& F, bool want_T) {
  Surface s{{F.xknots().begin(), F.xknots().end()}, {F.yknots().begin(), F.yknots().end()}, {}};
  s.values.resize(F.nx() * F.ny());
  for (std::size_t i = 0; i < F.nx(); ++i) {
    const double a = F.marginal1()(s.xs[i]);
    for (std::size_t j = 0; j < F.ny(); ++j) {
      const double b = F.marginal2()(s.ys[j]);
      const double f = F.value(i, j);
      double v = std::nan("");
      if (f > 0.0) v = want_T ? a * b / f - a - b + 1.0 : a * b / f;
      s.values[i * F.ny() + j] = v;
    }
  }
  return s;
}

struct Tracker {
  explicit Tracker(double t) : tol(t) {}
  double tol;
  double margin = kInf;
  double worst_excess = -kInf;
  std::optional<Witness> worst;

  void leq(double value, double bound, const char* quantity, std::vector<Point> pts) {
    const double slack = bound - value;
    margin = std::min(margin, slack);
    if (-slack > tol && -slack > worst_excess) {
      worst_excess = -slack;
      worst = Witness{quantity, std::move(pts), value};
    }
  }
};

}  // namespace

Surface transform_T(const BivariateDF& F) { return make_surface(F, true); }
Surface transform_Q(const BivariateDF& F) { return make_surface(F, false); }

// ---------------------------------------------------------------------------
// Divisibility

Verdict is_bifree_maxid(const BivariateDF& F, double tol) {
  Verdict out;
  const Point L = F.lower();
  if (!std::isfinite(L.x) || !std::isfinite(L.y)) {
    out.status = Status::no;
    out.reason = "support is unbounded below, which rules out bi-free max-infinite divisibility";
    out.margin = -kInf;
    out.witness = Witness{"lower support bound", {L}, -kInf};
    return out;
  }

  const auto xs = F.xknots();
  const auto ys = F.yknots();
  const std::size_t nx = xs.size(), ny = ys.size();
  std::vector<double> a(nx), b(ny);
  for (std::size_t i = 0; i < nx; ++i) a[i] = F.marginal1()(xs[i]);
  for (std::size_t j = 0; j < ny; ++j) b[j] = F.marginal2()(ys[j]);
  const std::size_t i0 = static_cast<std::size_t>(
      std::find_if(a.begin(), a.end(), [](double v) { return v > 0.0; }) - a.begin());
  const std::size_t j0 = static_cast<std::size_t>(
      std::find_if(b.begin(), b.end(), [](double v) { return v > 0.0; }) - b.begin());
  if (i0 == nx || j0 == ny) {
    out.status = Status::inconclusive;
    out.reason = "no grid point has both marginals positive";
    return out;
  }

  for (std::size_t i = i0; i < nx; ++i)
    for (std::size_t j = j0; j < ny; ++j)
      if (!(F.value(i, j) > 0.0)) {
        out.status = Status::no;
        out.reason = "{F > 0} is not the product of the marginal supports";
        out.margin = -F.marginal1()(xs[i]) * F.marginal2()(ys[j]);
        out.witness = Witness{"F where F1 > 0 and F2 > 0", {{xs[i], ys[j]}}, F.value(i, j)};
        return out;
      }

  const std::size_t mx = nx - i0, my = ny - j0;
  std::vector<double> Q(mx * my), T(mx * my);
  for (std::size_t i = 0; i < mx; ++i)
    for (std::size_t j = 0; j < my; ++j) {
      const double p = a[i0 + i], r = b[j0 + j];
      Q[i * my + j] = p * r / F.value(i0 + i, j0 + j);
      T[i * my + j] = Q[i * my + j] - p - r + 1.0;
    }
  auto X = [&](std::size_t i) { return xs[i0 + i]; };
  auto Y = [&](std::size_t j) { return ys[j0 + j]; };

  Tracker tr{tol};
  for (std::size_t i = 0; i < mx; ++i) {
    for (std::size_t j = 0; j < my; ++j) {
      if (i + 1 < mx) {
        const std::vector<Point> pts{{X(i), Y(j)}, {X(i + 1), Y(j)}};
        tr.leq(T[(i + 1) * my + j] - T[i * my + j], 0.0, "T_F increment in x", pts);
        tr.leq(Q[i * my + j] - Q[(i + 1) * my + j], 0.0, "Q_F decrease in x", pts);
      }
      if (j + 1 < my) {
        const std::vector<Point> pts{{X(i), Y(j)}, {X(i), Y(j + 1)}};
        tr.leq(T[i * my + j + 1] - T[i * my + j], 0.0, "T_F increment in y", pts);
        tr.leq(Q[i * my + j] - Q[i * my + j + 1], 0.0, "Q_F decrease in y", pts);
      }
      if (i + 1 < mx && j + 1 < my) {
        const double vol = T[(i + 1) * my + j + 1] - T[i * my + j + 1] - T[(i + 1) * my + j] +
                           T[i * my + j];
        tr.leq(vol, 0.0, "T_F cell volume", {{X(i), Y(j)}, {X(i + 1), Y(j + 1)}});
      }
    }
  }
  out.margin = std::isfinite(tr.margin) ? tr.margin : 0.0;
  if (tr.worst) {
    out.status = Status::no;
    out.reason = tr.worst->quantity + " is positive";
    out.witness = tr.worst;
  } else {
    out.status = Status::yes;
    out.reason = "T_F is nonincreasing with nonpositive cell volumes and Q_F is nondecreasing";
  }
  return out;
}

BivariateDF from_exponent_measure(const DiscreteMeasure& tau, Point L) {
  if (!std::isfinite(L.x) || !std::isfinite(L.y))
    throw std::invalid_argument("exponent measure: the lower corner must be finite");
  auto marginal = [&tau](int j, double Lj) {
    const double total = tau.marginal_tail(j, Lj);
    if (total > 1.0 + 1e-12)
      throw std::invalid_argument("exponent measure: marginal " + std::to_string(j) +
                                  " has tail mass " + format_double(total) + " > 1 above L");
    std::vector<double> knots{Lj};
    for (const auto& a : tau.atoms()) {
      const double c = j == 1 ? a.at.x : a.at.y;
      if (c > Lj && a.mass > 0.0) knots.push_back(c);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> vals(knots.size());
    for (std::size_t k = 0; k < knots.size(); ++k)
      vals[k] = std::clamp(1.0 - tau.marginal_tail(j, knots[k]), 0.0, 1.0);
    return UnivariateDF::grid(std::move(knots), std::move(vals));
  };
  auto m1 = marginal(1, L.x);
  auto m2 = marginal(2, L.y);
  ProbeGrid knots{{m1.knots().begin(), m1.knots().end()}, {m2.knots().begin(), m2.knots().end()}};
  QFunction q = [tau](double x, double y) { return 1.0 - tau.tail({x, y}); };
  return BivariateDF::from_q(std::move(m1), std::move(m2), std::move(q), std::move(knots));
}

BivariateDF exponent_df_from_TF(const BivariateDF& F, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("exponent DF: t must be > 0");
  const Point L = F.lower();
  if (!std::isfinite(L.x) || !std::isfinite(L.y))
    throw std::domain_error("exponent DF: the lower corner must be finite");

  auto lift = [t](const UnivariateDF& Fj) {
    const double Lj = Fj.lower();
    if (Fj.kind() == UnivariateDF::Kind::grid) {
      std::vector<double> knots(Fj.knots().begin(), Fj.knots().end());
      std::vector<double> vals(knots.size());
      for (std::size_t k = 0; k < knots.size(); ++k)
        vals[k] = knots[k] >= Lj ? std::exp(-t * (1.0 - Fj.values()[k])) : 0.0;
      const auto declared = declared_upper(vals, Fj.upper());
      return UnivariateDF::grid(std::move(knots), std::move(vals), declared);
    }
    return UnivariateDF::parametric(
        [Fj, t, Lj](double x) { return x >= Lj ? std::exp(-t * (1.0 - Fj(x))) : 0.0; }, Lj,
        Fj.upper());
  };
  auto g1 = lift(F.marginal1());
  auto g2 = lift(F.marginal2());

  if (is_analytic(F)) {
    QFunction q = [F, t](double x, double y) {
      const double qf = F.q_at(x, y);
      if (std::isnan(qf)) return 1.0;
      return std::exp(t * (qf - 1.0));
    };
    return BivariateDF::from_q(std::move(g1), std::move(g2), std::move(q), F.knot_grid());
  }

  const std::size_t nx = F.nx(), ny = F.ny();
  std::vector<double> vals(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = F.xknots()[i];
    if (x < L.x) continue;
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = F.yknots()[j];
      if (y < L.y) continue;
      const double a = F.marginal1()(x), b = F.marginal2()(y), f = F.value(i, j);
      if (!(f > 0.0)) continue;
      vals[i * ny + j] = std::exp(-t * (a * b / f - a - b + 1.0));
    }
  }
  std::vector<double> xs(F.xknots().begin(), F.xknots().end());
  std::vector<double> ys(F.yknots().begin(), F.yknots().end());
  return BivariateDF::grid(std::move(g1), std::move(g2), std::move(xs), std::move(ys),
                           std::move(vals));
}

Verdict classical_maxid_check(const BivariateDF& F, int n, double tol) {
  if (n < 1) throw std::invalid_argument("classical max-i.d. check: n must be >= 1");
  const auto pad = [](std::span<const double> k) {
    std::vector<double> out{k.front() - std::max(1.0, std::abs(k.front()))};
    out.insert(out.end(), k.begin(), k.end());
    return out;
  };
  const auto xs = pad(F.xknots()), ys = pad(F.yknots());
  const std::size_t ny = ys.size();
  std::vector<double> V(xs.size() * ny, 0.0);
  const double e = 1.0 / n;
  for (std::size_t i = 1; i < xs.size(); ++i)
    for (std::size_t j = 1; j < ny; ++j) V[i * ny + j] = std::pow(F.value(i - 1, j - 1), e);

  const auto qm = is_quasi_monotone(xs, ys, V, tol);
  Verdict out;
  out.margin = qm.min_volume;
  if (qm.pass) {
    out.status = Status::yes;
    out.reason = "F^(1/" + std::to_string(n) + ") is quasi-monotone on the grid";
  } else {
    out.status = Status::no;
    out.reason = "F^(1/" + std::to_string(n) + ") has a negative cell volume";
    out.witness = Witness{"cell volume of F^(1/n)", {qm.worst->lo, qm.worst->hi}, qm.min_volume};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compound Poisson analogue

Point compound_poisson_corner(double lambda, const DiscreteMeasure& nu, Point p) {
  const double level = 1.0 - 1.0 / lambda;
  auto corner = [&](int j, double pj) {
    if (level < 0.0) return pj;
    std::vector<double> coords;
    for (const auto& a : nu.atoms()) coords.push_back(j == 1 ? a.at.x : a.at.y);
    std::sort(coords.begin(), coords.end());
    for (double c : coords)
      if (nu.marginal_cdf(j, c) > level) return std::max(pj, c);
    return pj;
  };
  return {corner(1, p.x), corner(2, p.y)};
}

CompoundPoissonResult compound_poisson_limit(double lambda, const DiscreteMeasure& nu, Point p,
                                             int kmax) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("compound Poisson: lambda must be > 0");
  if (nu.empty() || std::abs(nu.total_mass() - 1.0) > 1e-12)
    throw std::invalid_argument("compound Poisson: nu must be a probability measure");
  if (kmax < 1 || kmax > 40) throw std::invalid_argument("compound Poisson: kmax out of range");

  const Point L = compound_poisson_corner(lambda, nu, p);
  CompoundPoissonResult res{from_exponent_measure(nu.scaled(lambda), L), L, {}};

  for (int k = 1; k <= kmax; ++k) {
    const long long n = 1LL << k;
    const double dn = static_cast<double>(n);
    if (dn < lambda) continue;
    std::vector<Atom> atoms{{p, 1.0 - lambda / dn}};
    for (const auto& a : nu.atoms()) atoms.push_back({a.at, a.mass * lambda / dn});
    const auto Fn = df_of_measure(DiscreteMeasure(std::move(atoms)));
    const auto Pn = bifree_power(Fn, dn);

    auto probe_axis = [](std::span<const double> a, std::span<const double> b) {
      auto k = merge_knots(a, b);
      std::vector<double> out = k;
      for (std::size_t i = 0; i + 1 < k.size(); ++i) out.push_back(0.5 * (k[i] + k[i + 1]));
      out.push_back(k.front() - 1.0);
      out.push_back(k.back() + 1.0);
      std::sort(out.begin(), out.end());
      return out;
    };
    const ProbeGrid probe{probe_axis(Pn.xknots(), res.limit.xknots()),
                          probe_axis(Pn.yknots(), res.limit.yknots())};
    res.ladder.push_back({n, sup_distance(Pn, res.limit, probe)});
  }
  return res;
}

}  // namespace bfev
