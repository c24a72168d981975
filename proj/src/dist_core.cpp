#include "bfev/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bfev/verdict.hpp"

namespace bfev {

namespace {

constexpr double kValueSlack = 1e-12;
constexpr double kMarginSlack = 1e-9;

void require_increasing(std::span<const double> k, const char* what) {
  if (k.empty()) throw std::invalid_argument(std::string(what) + ": no knots");
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!std::isfinite(k[i])) throw std::invalid_argument(std::string(what) + ": non-finite knot");
    if (i > 0 && !(k[i] > k[i - 1]))
      throw std::invalid_argument(std::string(what) + ": knots must be strictly increasing");
  }
}

double clamp_probability(double v, const char* what) {
  if (!std::isfinite(v) || v < -kValueSlack || v > 1.0 + kValueSlack)
    throw std::invalid_argument(std::string(what) + ": value outside [0, 1]");
  return std::clamp(v, 0.0, 1.0);
}

// Index of the last knot <= x, or -1.
std::ptrdiff_t step_index(std::span<const double> knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  return static_cast<std::ptrdiff_t>(it - knots.begin()) - 1;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::yes: return "yes";
    case Status::no: return "no";
    case Status::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<Point> ProbeGrid::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (double x : xs)
    for (double y : ys) out.push_back({x, y});
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double span = hi - lo;
  const double steps = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + span * static_cast<double>(i) / steps;
  out.back() = hi;
  return out;
}

std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// UnivariateDF

UnivariateDF UnivariateDF::grid(std::vector<double> knots, std::vector<double> values,
                                std::optional<double> upper) {
  require_increasing(knots, "univariate grid");
  if (values.size() != knots.size())
    throw std::invalid_argument("univariate grid: knots and values differ in length");
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = clamp_probability(values[i], "univariate grid");
    if (i > 0 && values[i] < values[i - 1] - kValueSlack)
      throw std::invalid_argument("univariate grid: values must be nondecreasing");
  }

  auto first_one = std::find_if(values.begin(), values.end(), [](double v) { return v >= 1.0; });
  double up;
  if (first_one != values.end()) {
    up = knots[static_cast<std::size_t>(first_one - values.begin())];
    if (upper && *upper < up)
      throw std::invalid_argument("univariate grid: upper lies below the first knot with value 1");
  } else {
    if (!upper)
      throw std::invalid_argument("univariate grid: values never reach 1 and no upper point is given");
    if (!(*upper > knots.back()) || std::isnan(*upper))
      throw std::invalid_argument("univariate grid: upper must exceed the last knot");
    up = *upper;
  }

  auto first_pos = std::find_if(values.begin(), values.end(), [](double v) { return v > 0.0; });
  const double lo =
      first_pos != values.end() ? knots[static_cast<std::size_t>(first_pos - values.begin())] : up;

  return UnivariateDF(std::make_shared<const Impl>(
      Impl{Kind::grid, lo, up, std::move(knots), std::move(values), {}, {}}));
}

UnivariateDF UnivariateDF::dirac(double at) { return grid({at}, {1.0}); }

UnivariateDF UnivariateDF::parametric(std::function<double(double)> cdf, double lower, double upper,
                                      std::string spec) {
  if (!cdf) throw std::invalid_argument("parametric DF: empty callable");
  if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInf)
    throw std::invalid_argument("parametric DF: invalid support bounds");
  return UnivariateDF(std::make_shared<const Impl>(
      Impl{Kind::parametric, lower, upper, {}, {}, std::move(cdf), std::move(spec)}));
}

double UnivariateDF::operator()(double x) const {
  const Impl& d = *impl_;
  if (std::isnan(x)) return x;
  if (x >= d.upper) return 1.0;
  if (d.kind == Kind::grid) {
    const auto i = step_index(d.knots, x);
    return i < 0 ? 0.0 : d.values[static_cast<std::size_t>(i)];
  }
  if (x < d.lower) return 0.0;
  return std::clamp(d.cdf(x), 0.0, 1.0);
}

double quantile(const UnivariateDF& F, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: level must lie in (0, 1]");
  if (F.kind() == UnivariateDF::Kind::grid) {
    const auto v = F.values();
    const auto it = std::find_if(v.begin(), v.end(), [p](double x) { return x >= p; });
    return it == v.end() ? F.upper() : F.knots()[static_cast<std::size_t>(it - v.begin())];
  }
  double lo = F.lower();
  double hi = F.upper();
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (F(lo) >= p) lo = lo - 2.0 * (std::abs(lo) + 1.0);
  }
  if (!std::isfinite(hi)) {
    hi = lo + 1.0;
    while (F(hi) < p) hi = hi + 2.0 * (std::abs(hi) + 1.0);
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (F(mid) >= p ? hi : lo) = mid;
  }
  return hi;
}

UnivariateDF product(const UnivariateDF& F, const UnivariateDF& G) {
  const double up = std::max(F.upper(), G.upper());
  if (F.kind() == UnivariateDF::Kind::grid && G.kind() == UnivariateDF::Kind::grid) {
    auto knots = merge_knots(F.knots(), G.knots());
    std::vector<double> vals(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) vals[i] = F(knots[i]) * G(knots[i]);
    const auto declared = vals.back() >= 1.0 ? std::nullopt : std::optional<double>(up);
    return UnivariateDF::grid(std::move(knots), std::move(vals), declared);
  }
  return UnivariateDF::parametric([F, G](double x) { return F(x) * G(x); },
                                  std::max(F.lower(), G.lower()), up);
}

std::vector<double> default_knots(const UnivariateDF& F, std::size_t n) {
  if (F.kind() == UnivariateDF::Kind::grid) {
    auto k = F.knots();
    return {k.begin(), k.end()};
  }
  const double lo = std::isfinite(F.lower()) ? F.lower() : quantile(F, 1e-3);
  const double hi = std::isfinite(F.upper()) ? F.upper() : quantile(F, 1.0 - 1e-3);
  return linspace(lo, hi, n);
}

// ---------------------------------------------------------------------------
// BivariateDF

BivariateDF BivariateDF::grid(UnivariateDF m1, UnivariateDF m2, std::vector<double> xknots,
                              std::vector<double> yknots, std::vector<double> values,
                              bool rect_support) {
  require_increasing(xknots, "bivariate grid (x)");
  require_increasing(yknots, "bivariate grid (y)");
  const std::size_t nx = xknots.size(), ny = yknots.size();
  if (values.size() != nx * ny)
    throw std::invalid_argument("bivariate grid: expected " + std::to_string(nx * ny) + " values");

  for (auto& v : values) v = clamp_probability(v, "bivariate grid");
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = values[i * ny + j];
      if ((i > 0 && v < values[(i - 1) * ny + j] - kValueSlack) ||
          (j > 0 && v < values[i * ny + j - 1] - kValueSlack))
        throw std::invalid_argument("bivariate grid: values must be nondecreasing along both axes");
      if (v > std::min(m1(xknots[i]), m2(yknots[j])) + kMarginSlack)
        throw std::invalid_argument("bivariate grid: value exceeds a marginal");
    }
  }
  if (yknots.back() >= m2.upper()) {
    for (std::size_t i = 0; i < nx; ++i)
      if (std::abs(values[i * ny + ny - 1] - m1(xknots[i])) > kMarginSlack)
        throw std::invalid_argument("bivariate grid: last column disagrees with marginal 1");
  }
  if (xknots.back() >= m1.upper()) {
    for (std::size_t j = 0; j < ny; ++j)
      if (std::abs(values[(nx - 1) * ny + j] - m2(yknots[j])) > kMarginSlack)
        throw std::invalid_argument("bivariate grid: last row disagrees with marginal 2");
  }
  if (rect_support) {
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        const bool inside = m1(xknots[i]) > 0.0 && m2(yknots[j]) > 0.0;
        if (inside != (values[i * ny + j] > 0.0))
          throw std::invalid_argument(
              "bivariate grid: support is not the product of the marginal supports");
      }
  }
  return BivariateDF(std::make_shared<const Impl>(Impl{Kind::grid, std::move(m1), std::move(m2),
                                                       std::move(xknots), std::move(yknots),
                                                       std::move(values), {}, rect_support}));
}

BivariateDF BivariateDF::from_q(UnivariateDF m1, UnivariateDF m2, QFunction q, ProbeGrid knots) {
  if (!q) throw std::invalid_argument("analytic DF: empty Q-transform");
  require_increasing(knots.xs, "analytic DF (x)");
  require_increasing(knots.ys, "analytic DF (y)");
  Impl impl{Kind::analytic, std::move(m1), std::move(m2), std::move(knots.xs),
            std::move(knots.ys), {}, std::move(q), false};
  BivariateDF out(std::make_shared<const Impl>(std::move(impl)));
  // Materialise the sample grid.
  std::vector<double> vals(out.nx() * out.ny());
  for (std::size_t i = 0; i < out.nx(); ++i)
    for (std::size_t j = 0; j < out.ny(); ++j)
      vals[i * out.ny() + j] = out.eval(out.impl_->xs[i], out.impl_->ys[j]);
  auto filled = std::make_shared<Impl>(*out.impl_);
  filled->values = std::move(vals);
  return BivariateDF(std::move(filled));
}

BivariateDF BivariateDF::from_function(UnivariateDF m1, UnivariateDF m2,
                                       std::function<double(double, double)> F, ProbeGrid knots) {
  if (!F) throw std::invalid_argument("analytic DF: empty callable");
  UnivariateDF a = m1, b = m2;
  QFunction q = [a, b, F](double x, double y) {
    const double f = F(x, y);
    const double num = a(x) * b(y);
    if (num > 0.0 && f <= 0.0) return kInf;
    return num / f;
  };
  return from_q(std::move(m1), std::move(m2), std::move(q), std::move(knots));
}

BivariateDF BivariateDF::dirac(Point at) {
  return grid(UnivariateDF::dirac(at.x), UnivariateDF::dirac(at.y), {at.x}, {at.y}, {1.0}, true);
}

double BivariateDF::eval(double x, double y) const {
  const Impl& d = *impl_;
  if (std::isnan(x) || std::isnan(y)) return std::nan("");
  if (d.kind == Kind::analytic) {
    const double a = d.m1(x), b = d.m2(y);
    if (a <= 0.0 || b <= 0.0) return 0.0;
    const double q = d.q(x, y);
    if (!(q > 0.0) || q == kInf) return 0.0;
    return std::clamp(a * b / q, 0.0, std::min(a, b));
  }
  const bool sx = x >= d.m1.upper(), sy = y >= d.m2.upper();
  if (sx && sy) return 1.0;
  if (sx) return d.m2(y);
  if (sy) return d.m1(x);
  const auto i = step_index(d.xs, x), j = step_index(d.ys, y);
  if (i < 0 || j < 0) return 0.0;
  return d.values[static_cast<std::size_t>(i) * d.ys.size() + static_cast<std::size_t>(j)];
}

double BivariateDF::q_at(double x, double y) const {
  if (impl_->kind == Kind::analytic) return impl_->q(x, y);
  const double a = impl_->m1(x), b = impl_->m2(y);
  if (a <= 0.0 || b <= 0.0) return std::nan("");
  const double f = eval(x, y);
  return f > 0.0 ? a * b / f : kInf;
}

BivariateDF grid_from_values(std::vector<double> xknots, std::vector<double> yknots,
                             std::vector<double> values) {
  const std::size_t nx = xknots.size(), ny = yknots.size();
  if (nx == 0 || ny == 0 || values.size() != nx * ny)
    throw std::invalid_argument("bivariate grid: value matrix does not match the knots");
  std::vector<double> c1(nx), c2(ny);
  for (std::size_t i = 0; i < nx; ++i) c1[i] = values[i * ny + ny - 1];
  for (std::size_t j = 0; j < ny; ++j) c2[j] = values[(nx - 1) * ny + j];
  auto m1 = UnivariateDF::grid(xknots, std::move(c1));
  auto m2 = UnivariateDF::grid(yknots, std::move(c2));
  return BivariateDF::grid(std::move(m1), std::move(m2), std::move(xknots), std::move(yknots),
                           std::move(values));
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.at.x) || !std::isfinite(a.at.y))
      throw std::invalid_argument("measure: atom location must be finite");
    if (!std::isfinite(a.mass) || a.mass < 0.0)
      throw std::invalid_argument("measure: atom mass must be finite and nonnegative");
    total_ += a.mass;
  }
}

double DiscreteMeasure::tail(Point x) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.at.x > x.x && a.at.y > x.y) s += a.mass;
  return s;
}

double DiscreteMeasure::marginal_tail(int j, double x) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if ((j == 1 ? a.at.x : a.at.y) > x) s += a.mass;
  return s;
}

double DiscreteMeasure::cdf(Point x) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.at.x <= x.x && a.at.y <= x.y) s += a.mass;
  return s;
}

double DiscreteMeasure::marginal_cdf(int j, double x) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if ((j == 1 ? a.at.x : a.at.y) <= x) s += a.mass;
  return s;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor))
    throw std::invalid_argument("measure: scale factor must be finite and nonnegative");
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (auto& a : out) a.mass *= factor;
  return DiscreteMeasure(std::move(out));
}

BivariateDF df_of_measure(const DiscreteMeasure& mu) {
  if (mu.empty() || std::abs(mu.total_mass() - 1.0) > 1e-12)
    throw std::invalid_argument("measure: a probability measure needs total mass 1");
  std::vector<double> xs, ys;
  for (const auto& a : mu.atoms()) {
    xs.push_back(a.at.x);
    ys.push_back(a.at.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // Sums run in atom order, so full sums equal the total exactly and the
  // normalised corner value is exactly 1.
  const double total = mu.total_mass();
  std::vector<double> v1(xs.size()), v2(ys.size()), vals(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v1[i] = mu.marginal_cdf(1, xs[i]) / total;
  for (std::size_t j = 0; j < ys.size(); ++j) v2[j] = mu.marginal_cdf(2, ys[j]) / total;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      vals[i * ys.size() + j] = mu.cdf({xs[i], ys[j]}) / total;
  auto m1 = UnivariateDF::grid(xs, std::move(v1));
  auto m2 = UnivariateDF::grid(ys, std::move(v2));
  return BivariateDF::grid(std::move(m1), std::move(m2), std::move(xs), std::move(ys),
                           std::move(vals));
}

// ---------------------------------------------------------------------------
// Operations

double eval_bdf(const BivariateDF& F, Point x) { return F(x); }

double volume(const BivariateDF& F, const Rect& r) {
  if (!leq(r.lo, r.hi)) throw std::invalid_argument("volume: rectangle corners are not ordered");
  return F.eval(r.hi.x, r.hi.y) - F.eval(r.lo.x, r.hi.y) - F.eval(r.hi.x, r.lo.y) +
         F.eval(r.lo.x, r.lo.y);
}

double tail_bdf(const BivariateDF& F, Point x) {
  return 1.0 + F(x) - F.marginal1()(x.x) - F.marginal2()(x.y);
}

QuasiMonotoneVerdict is_quasi_monotone(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> v, double tol) {
  QuasiMonotoneVerdict out;
  const std::size_t ny = ys.size();
  double worst = kInf;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double vol =
          v[(i + 1) * ny + j + 1] - v[i * ny + j + 1] - v[(i + 1) * ny + j] + v[i * ny + j];
      if (vol < worst) {
        worst = vol;
        out.worst = CellRef{i, j, {xs[i], ys[j]}, {xs[i + 1], ys[j + 1]}};
      }
    }
  }
  out.min_volume = std::isfinite(worst) ? worst : 0.0;
  out.pass = !(worst < -tol);
  if (out.pass && !std::isfinite(worst)) out.worst.reset();
  return out;
}

QuasiMonotoneVerdict is_quasi_monotone(const BivariateDF& F, double tol) {
  return is_quasi_monotone(F.xknots(), F.yknots(), F.values(), tol);
}

double sup_distance(const BivariateDF& F, const BivariateDF& G, std::span<const Point> probes) {
  double d = 0.0;
  for (const auto& p : probes) {
    const double e = std::abs(F(p) - G(p));
    if (std::isnan(e)) return kInf;
    d = std::max(d, e);
  }
  return d;
}

double sup_distance(const BivariateDF& F, const BivariateDF& G, const ProbeGrid& probes) {
  const auto pts = probes.points();
  return sup_distance(F, G, pts);
}

}  // namespace bfev
