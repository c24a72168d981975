#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfev/dist_core.hpp"
#include "bfev/verdict.hpp"

namespace bfev {

/// Pickands dependence function on [0,1].
class PickandsFn {
 public:
  enum class Form { independence, comonotone, gumbel_mixed, logistic, marshall_olkin, spectral };

  static PickandsFn independence();
  static PickandsFn comonotone();
  /// theta t^2 - theta t + 1, theta in [0,1].
  static PickandsFn gumbel_mixed(double theta);
  /// (t^m + (1-t)^m)^(1/m), m >= 1.
  static PickandsFn logistic(double m);
  /// 1 - min(theta t, phi (1-t)), theta, phi in [0,1].
  static PickandsFn marshall_olkin(double theta, double phi);

  double operator()(double t) const;

  Form form() const { return form_; }
  const std::map<std::string, double>& params() const { return params_; }
  /// Spectral measure backing a spectral form (empty otherwise).
  const DiscreteMeasure& measure() const { return rho_; }
  std::string spec() const;
  /// Whether A is differentiable on (0,1).
  bool smooth() const;

 private:
  friend PickandsFn pickands_from_measure(const DiscreteMeasure&, double);
  PickandsFn(Form f, std::map<std::string, double> p) : form_(f), params_(std::move(p)) {}
  Form form_;
  std::map<std::string, double> params_;
  DiscreteMeasure rho_;
};

/// Thrown when a spectral measure leaves the simplex or misses the mean
/// constraints; carries the measured first moments.
class PickandsConstraintError : public std::invalid_argument {
 public:
  PickandsConstraintError(const std::string& what, double mean_x, double mean_y)
      : std::invalid_argument(what), mean_x(mean_x), mean_y(mean_y) {}
  double mean_x;
  double mean_y;
};

/// A(t) = sum of mass * max(t x, (1-t) y) over atoms of rho.
PickandsFn pickands_from_measure(const DiscreteMeasure& rho, double tol = 1e-9);

/// f_A(u,v) = -1 + u + v + (2-u-v) A((1-u)/(2-u-v)), with f_A(1,1) = 1.
double f_from_pickands(const PickandsFn& A, double u, double v);

/// Two-dimensional copula. Families written as uv/f carry their f in closed
/// form; for the others `f` falls back to uv/C.
class Copula {
 public:
  enum class Family {
    independence,
    comonotone,
    amh,
    fgm,
    clayton,
    lomax,
    gumbel_mixed,
    logistic,
    marshall_olkin,
    ev_from_pickands,
    bifree_from_pickands,
    survival_of,
    power_of,
    grid
  };

  static Copula independence();
  static Copula comonotone();
  /// uv / (1 - theta(1-u)(1-v)), theta in [-1,1].
  static Copula amh(double theta);
  /// uv (1 + theta(1-u)(1-v)), theta in [-1,1].
  static Copula fgm(double theta);
  /// Lomax with theta = 1, p > 0.
  static Copula clayton(double p);
  /// uv / [1 - theta(1-u^(1/p))(1-v^(1/p))]^p, p > 0, theta in [-p,1].
  static Copula lomax(double p, double theta);
  /// Bi-free copula C_A for the named Pickands families.
  static Copula gumbel_mixed(double theta);
  static Copula logistic(double m);
  static Copula marshall_olkin(double theta, double phi);
  /// Checkerboard copula: bilinear interpolation of values on a grid of
  /// [0,1]^2 (the grid must include 0 and 1 on both axes).
  static Copula grid(std::vector<double> us, std::vector<double> vs, std::vector<double> values);

  double operator()(double u, double v) const;
  /// f = uv / C on (0,1]^2.
  double f(double u, double v) const;
  bool has_closed_f() const { return static_cast<bool>(impl_->f); }

  Family family() const { return impl_->family; }
  const std::map<std::string, double>& params() const { return impl_->params; }
  std::string spec() const { return impl_->spec; }
  /// Whether C is differentiable in the interior of the unit square.
  bool smooth() const { return impl_->smooth; }
  /// Pickands function for EV / bi-free-from-Pickands families.
  const PickandsFn* pickands() const { return impl_->pickands.get(); }
  const Copula* inner() const { return impl_->inner.get(); }

 private:
  friend Copula ev_copula(const PickandsFn&);
  friend Copula bifree_copula(const PickandsFn&);
  friend Copula survival_copula(const Copula&);
  friend Copula power_transform(const Copula&, double);

  struct Impl {
    Family family;
    std::map<std::string, double> params;
    std::string spec;
    std::function<double(double, double)> c;
    std::function<double(double, double)> f;
    bool smooth = true;
    std::shared_ptr<const PickandsFn> pickands;
    std::shared_ptr<const Copula> inner;
  };
  explicit Copula(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static Copula from_f(Family family, std::map<std::string, double> params, std::string spec,
                       std::function<double(double, double)> f, bool smooth,
                       std::shared_ptr<const PickandsFn> A = nullptr);
  static Copula lomax_like(double p, double theta, Family family, std::string spec);
  static Copula bifree_named(const PickandsFn& A, Family family, std::string spec);
  std::shared_ptr<const Impl> impl_;
};

/// C(1-u, 1-v) + u + v - 1.
Copula survival_copula(const Copula& C);
/// exp[log(uv) A(log u / log(uv))].
Copula ev_copula(const PickandsFn& A);
/// uv / f_A(u,v).
Copula bifree_copula(const PickandsFn& A);
/// uv / f^p(u^(1/p), v^(1/p)), 0 < p <= 1.
Copula power_transform(const Copula& C, double p);

double eval_copula(const Copula& C, double u, double v);

enum class CopulaCheckMode { grid, smooth };

struct CopulaCheckOptions {
  CopulaCheckMode mode = CopulaCheckMode::grid;
  double tol = -1.0;  // negative selects the mode default (1e-9 grid, 1e-5 smooth)
  std::size_t grid = 101;
  double h = 1e-5;
};

/// Bi-free copula membership: with f = uv/C, (i) f(.,1) = f(1,.) = 1, (ii)
/// u -> f - u and v -> f - v nonincreasing, (iii) -f quasi-monotone.
/// Status yes = member. Smooth mode tests 0 <= f_u, f_v <= 1 and f_uv <= 0
/// by central differences and refuses non-smooth families.
Verdict check_bifree_copula(const Copula& C, const CopulaCheckOptions& opts = {});

/// C^n(u^(1/n), v^(1/n)) on the probe grid (row-major, u outer).
std::vector<double> doa_iterate(const Copula& C, long long n, const ProbeGrid& probe);

/// Largest |doa_iterate - target| over the probe grid.
double doa_distance(const Copula& C, const Copula& target, long long n, const ProbeGrid& probe);

struct AxiomReport {
  double boundary = 0.0;     // max boundary-identity error
  double min_volume = 0.0;   // smallest cell volume (>= -tol required)
  double lipschitz = 0.0;    // max excess over |du| + |dv|
  double frechet = 0.0;      // max excess over min(u,v)
  bool pass = true;
};

/// Copula axioms on a uniform probe grid of [0,1]^2.
AxiomReport check_copula_axioms(const Copula& C, std::size_t grid = 101, double tol = 1e-9);

/// F = C(F1, F2) sampled on the given knots.
BivariateDF couple(const Copula& C, const UnivariateDF& m1, const UnivariateDF& m2,
                   ProbeGrid knots);

}  // namespace bfev
