#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bfev {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Componentwise order on the plane.
inline bool leq(const Point& a, const Point& b) { return a.x <= b.x && a.y <= b.y; }

/// Rectilinear probe grid; `points()` enumerates row-major (x outer, y inner).
struct ProbeGrid {
  std::vector<double> xs;
  std::vector<double> ys;

  std::vector<Point> points() const;
  std::size_t size() const { return xs.size() * ys.size(); }
};

std::vector<double> linspace(double lo, double hi, std::size_t n);
/// Sorted union of two knot sequences with duplicates removed.
std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// UnivariateDF
// ---------------------------------------------------------------------------

/// A distribution function on the real line with support bounded below by
/// `lower()` (possibly -inf) and saturating to exactly 1 at `upper()`.
///
/// Grid DFs are right-continuous step functions: the value stored at a knot
/// applies on [knot, next knot). Parametric DFs wrap a closed form and carry a
/// family-spec string when they can be serialized by name.
class UnivariateDF {
 public:
  enum class Kind { grid, parametric };

  /// `upper` defaults to the first knot whose value is 1; a grid that never
  /// reaches 1 must declare it explicitly (and it must exceed the last knot).
  static UnivariateDF grid(std::vector<double> knots, std::vector<double> values,
                           std::optional<double> upper = std::nullopt);
  static UnivariateDF dirac(double at);
  static UnivariateDF parametric(std::function<double(double)> cdf, double lower, double upper,
                                 std::string spec = {});

  double operator()(double x) const;

  Kind kind() const { return impl_->kind; }
  double lower() const { return impl_->lower; }
  double upper() const { return impl_->upper; }
  std::span<const double> knots() const { return impl_->knots; }
  std::span<const double> values() const { return impl_->values; }
  const std::string& spec() const { return impl_->spec; }

 private:
  struct Impl {
    Kind kind = Kind::grid;
    double lower = -kInf;
    double upper = kInf;
    std::vector<double> knots;
    std::vector<double> values;
    std::function<double(double)> cdf;
    std::string spec;
  };
  explicit UnivariateDF(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Smallest x with F(x) >= p, located by bisection (exact knot for grids).
double quantile(const UnivariateDF& F, double p);

/// Pointwise product F*G: the law of the maximum of independent variables.
UnivariateDF product(const UnivariateDF& F, const UnivariateDF& G);

/// Knots spanning the bulk of F: [lower, upper] when finite, otherwise the
/// 1e-3 / 1-1e-3 quantiles.
std::vector<double> default_knots(const UnivariateDF& F, std::size_t n);

// ---------------------------------------------------------------------------
// BivariateDF
// ---------------------------------------------------------------------------

/// Q-transform F1 F2 / F as a function of the point. Used as the analytic
/// representation: F = F1 F2 / q on {F1 > 0} x {F2 > 0} and 0 elsewhere.
/// q = +inf encodes F = 0 with positive marginals.
using QFunction = std::function<double(double, double)>;

/// A distribution function on the plane: two marginals plus values on a
/// rectilinear knot grid.
///
/// Grid DFs evaluate by the step convention (0 below the first knot, marginal
/// saturation beyond the marginals' upper points). Analytic DFs evaluate in
/// closed form through their Q-transform; their grid is a materialised sample
/// used by all grid scans.
class BivariateDF {
 public:
  enum class Kind { grid, analytic };

  /// `values` is row-major with x outer: values[i * ny + j] = F(x_i, y_j).
  /// When `rect_support` is set, {F > 0} = {F1 > 0} x {F2 > 0} is verified on
  /// the grid and construction fails otherwise.
  static BivariateDF grid(UnivariateDF m1, UnivariateDF m2, std::vector<double> xknots,
                          std::vector<double> yknots, std::vector<double> values,
                          bool rect_support = false);
  static BivariateDF from_q(UnivariateDF m1, UnivariateDF m2, QFunction q, ProbeGrid knots);
  /// Closed-form F; the Q-transform is derived from it.
  static BivariateDF from_function(UnivariateDF m1, UnivariateDF m2,
                                   std::function<double(double, double)> F, ProbeGrid knots);
  static BivariateDF dirac(Point at);

  double operator()(Point p) const { return eval(p.x, p.y); }
  double eval(double x, double y) const;
  /// Q_F at a point. Analytic DFs use their stored transform, which may extend
  /// to the boundary of the support; grid DFs return F1 F2 / F (+inf when F = 0
  /// with positive marginals, NaN when a marginal vanishes).
  double q_at(double x, double y) const;

  Kind kind() const { return impl_->kind; }
  const UnivariateDF& marginal1() const { return impl_->m1; }
  const UnivariateDF& marginal2() const { return impl_->m2; }
  const UnivariateDF& marginal(int j) const { return j == 1 ? impl_->m1 : impl_->m2; }
  std::span<const double> xknots() const { return impl_->xs; }
  std::span<const double> yknots() const { return impl_->ys; }
  std::size_t nx() const { return impl_->xs.size(); }
  std::size_t ny() const { return impl_->ys.size(); }
  double value(std::size_t i, std::size_t j) const { return impl_->values[i * ny() + j]; }
  std::span<const double> values() const { return impl_->values; }
  ProbeGrid knot_grid() const { return {impl_->xs, impl_->ys}; }
  bool rect_support_flag() const { return impl_->rect_support; }
  /// Lower corner of the support: (marginal1.lower, marginal2.lower).
  Point lower() const { return {impl_->m1.lower(), impl_->m2.lower()}; }
  const QFunction& q_function() const { return impl_->q; }

 private:
  struct Impl {
    Kind kind = Kind::grid;
    UnivariateDF m1;
    UnivariateDF m2;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;
    QFunction q;
    bool rect_support = false;
  };
  explicit BivariateDF(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Builds a grid DF from its values alone; the marginals are read off the last
/// row and column and saturate at the last knot.
BivariateDF grid_from_values(std::vector<double> xknots, std::vector<double> yknots,
                             std::vector<double> values);

// ---------------------------------------------------------------------------
// DiscreteMeasure
// ---------------------------------------------------------------------------

struct Atom {
  Point at;
  double mass = 0.0;
};

/// A finite positive measure on the plane given by weighted atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const { return atoms_; }
  double total_mass() const { return total_; }
  bool empty() const { return atoms_.empty(); }

  /// Mass of the open quadrant (x, inf).
  double tail(Point x) const;
  /// Mass of {coordinate j > x}.
  double marginal_tail(int j, double x) const;
  /// Mass of (-inf, x] (closed lower quadrant).
  double cdf(Point x) const;
  double marginal_cdf(int j, double x) const;
  DiscreteMeasure scaled(double factor) const;

 private:
  std::vector<Atom> atoms_;
  double total_ = 0.0;
};

/// The DF of a probability measure given by atoms (total mass must be 1).
BivariateDF df_of_measure(const DiscreteMeasure& mu);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double eval_bdf(const BivariateDF& F, Point x);

struct Rect {
  Point lo;
  Point hi;
};

/// F-volume of [lo, hi]; throws std::invalid_argument unless lo <= hi.
double volume(const BivariateDF& F, const Rect& rect);

/// 1 + F(x) - F1(x1) - F2(x2), the mass of the open quadrant above x.
double tail_bdf(const BivariateDF& F, Point x);

struct CellRef {
  std::size_t i = 0;
  std::size_t j = 0;
  Point lo;
  Point hi;
};

struct QuasiMonotoneVerdict {
  bool pass = true;
  /// Smallest cell volume seen (the worst one when failing).
  double min_volume = 0.0;
  std::optional<CellRef> worst;
};

/// Volumes of all adjacent grid cells must be >= -tol.
QuasiMonotoneVerdict is_quasi_monotone(const BivariateDF& F, double tol);

/// Same scan for an arbitrary surface on a grid (values row-major).
QuasiMonotoneVerdict is_quasi_monotone(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> values, double tol);

double sup_distance(const BivariateDF& F, const BivariateDF& G, std::span<const Point> probes);
double sup_distance(const BivariateDF& F, const BivariateDF& G, const ProbeGrid& probes);

/// A surface sampled on a grid; NaN marks points outside the domain.
struct Surface {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;  // row-major, x outer

  double at(std::size_t i, std::size_t j) const { return values[i * ys.size() + j]; }
};

}  // namespace bfev
