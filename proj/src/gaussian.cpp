#include "bfev/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bfev/biconv.hpp"
#include "bfev/format.hpp"
#include "bfev/quadrature.hpp"

namespace bfev::gaussian {

namespace {

constexpr double kPi = std::numbers::pi;

void require_open(double c) {
  if (!(std::abs(c) < 1.0))
    throw std::domain_error("bi-free Gaussian: |c| = 1 has no density (c = " + format_double(c) +
                            ")");
}

// s = -2 cos(a) maps [0, pi] onto [-2, 2]; this is the inverse, accurate near -2.
double angle_of(double x) {
  x = std::clamp(x, -2.0, 2.0);
  return 2.0 * std::asin(std::sqrt((2.0 + x) / 4.0));
}

// sqrt(4 - s^2) ds = 4 sin^2(a) da.
double jac(double a) {
  const double s = std::sin(a);
  return 4.0 * s * s;
}

double norm(double c) { return (1.0 - c * c) / (4.0 * kPi * kPi); }

double double_integral(double c, double ax, double ay, double rel_tol) {
  QuadratureOptions o;
  o.rel_tol = rel_tol;
  auto inner = [&](double a) {
    const double s = -2.0 * std::cos(a), ja = jac(a);
    return ja * integrate([&](double b) { return jac(b) / D(c, s, -2.0 * std::cos(b)); }, 0.0, ay,
                          o);
  };
  return integrate(inner, 0.0, ax, o);
}

// Nodes and weights of GL32 mapped onto [lo, hi], with the Jacobian folded in.
struct Axis {
  std::vector<double> pos;  // -2 cos(a) at the nodes
  std::vector<double> w;    // weight * 4 sin^2(a) * half-width
};

Axis map_panel(const GaussRule& r, double lo, double hi) {
  Axis ax;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    const double a = mid + half * r.nodes[k];
    ax.pos.push_back(-2.0 * std::cos(a));
    ax.w.push_back(r.weights[k] * jac(a) * half);
  }
  return ax;
}

double tensor(double c, const Axis& A, const Axis& B) {
  double s = 0.0;
  for (std::size_t k = 0; k < A.pos.size(); ++k) {
    double row = 0.0;
    for (std::size_t l = 0; l < B.pos.size(); ++l) row += B.w[l] / D(c, A.pos[k], B.pos[l]);
    s += A.w[k] * row;
  }
  return s;
}

}  // namespace

double D(double c, double s, double t) {
  const double c2 = c * c;
  return (1.0 - c2) * (1.0 - c2) - c * (1.0 + c2) * s * t + c2 * (s * s + t * t);
}

double density(double c, double s, double t) {
  require_open(c);
  if (s < -2.0 || s > 2.0 || t < -2.0 || t > 2.0) return 0.0;
  return norm(c) * std::sqrt(4.0 - s * s) * std::sqrt(4.0 - t * t) / D(c, s, t);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  if (x > 0.0) return 1.0 - semicircle_cdf(-x);
  // F(x) = (b - sin b) / (2 pi) with b = 2 angle_of(x).
  const double b = 2.0 * angle_of(x);
  double d;
  if (b < 0.1) {
    const double b2 = b * b;
    d = b * b2 / 6.0 * (1.0 - b2 / 20.0 * (1.0 - b2 / 42.0 * (1.0 - b2 / 72.0 * (1.0 - b2 / 110.0))));
  } else {
    d = b - std::sin(b);
  }
  return d / (2.0 * kPi);
}

UnivariateDF semicircle() {
  return UnivariateDF::parametric(semicircle_cdf, -2.0, 2.0, "semicircle");
}

double cdf_at(double c, double x, double y, double rel_tol) {
  require_open(c);
  if (x <= -2.0 || y <= -2.0) return 0.0;
  if (x >= 2.0 && y >= 2.0) return 1.0;
  if (x >= 2.0) return semicircle_cdf(y);
  if (y >= 2.0) return semicircle_cdf(x);
  return norm(c) * double_integral(c, angle_of(x), angle_of(y), rel_tol);
}

BivariateDF cdf_grid(double c, int resolution) {
  require_open(c);
  if (resolution < 2) throw std::invalid_argument("cdf_grid: resolution must be >= 2");
  const auto knots = linspace(-2.0, 2.0, static_cast<std::size_t>(resolution) + 1);
  const std::size_t n = knots.size();
  std::vector<double> ang(n);
  for (std::size_t i = 0; i < n; ++i) ang[i] = angle_of(knots[i]);

  const GaussRule r = gauss_legendre(32);
  std::vector<Axis> whole, lower, upper;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double m = 0.5 * (ang[i] + ang[i + 1]);
    whole.push_back(map_panel(r, ang[i], ang[i + 1]));
    lower.push_back(map_panel(r, ang[i], m));
    upper.push_back(map_panel(r, m, ang[i + 1]));
  }

  const double k = norm(c);
  const std::size_t cells = n - 1;
  std::vector<double> cell(cells * cells);
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t j = 0; j < cells; ++j) {
      const double one = tensor(c, whole[i], whole[j]);
      const double four = tensor(c, lower[i], lower[j]) + tensor(c, lower[i], upper[j]) +
                          tensor(c, upper[i], lower[j]) + tensor(c, upper[i], upper[j]);
      double v = four;
      if (std::abs(four - one) > 1e-8 * std::abs(four)) {
        QuadratureOptions o;
        o.rel_tol = 1e-10;
        const double b0 = ang[j], b1 = ang[j + 1];
        v = integrate(
            [&](double a) {
              const double s = -2.0 * std::cos(a);
              return jac(a) * integrate([&](double b) { return jac(b) / D(c, s, -2.0 * std::cos(b)); },
                                        b0, b1, o);
            },
            ang[i], ang[i + 1], o);
      }
      cell[i * cells + j] = k * v;
    }
  }

  std::vector<double> vals(n * n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j)
      vals[i * n + j] = cell[(i - 1) * cells + (j - 1)] + vals[(i - 1) * n + j] +
                        vals[i * n + j - 1] - vals[(i - 1) * n + j - 1];
  for (auto& v : vals) v = std::clamp(v, 0.0, 1.0);
  return BivariateDF::grid(semicircle(), semicircle(), knots, knots, std::move(vals));
}

IdentityResult identity_check(double c, double x) {
  require_open(c);
  if (x < -2.0 || x > 2.0) throw std::invalid_argument("identity_check: x must lie in [-2, 2]");
  QuadratureOptions o;
  o.rel_tol = 1e-13;
  const double v =
      integrate([&](double b) { return jac(b) / D(c, x, -2.0 * std::cos(b)); }, 0.0, kPi, o);
  const double ref = 2.0 * kPi / (1.0 - c * c);
  return {v, ref, std::abs(v - ref)};
}

double compare_integral(double c, double x, double y) {
  require_open(c);
  QuadratureOptions o;
  o.rel_tol = 1e-12;
  const double ay = angle_of(y);
  auto inner = [&](double a) {
    const double s = -2.0 * std::cos(a);
    return jac(a) * integrate(
                        [&](double b) {
                          const double t = -2.0 * std::cos(b);
                          return jac(b) * (1.0 / D(-c, s, t) - 1.0 / D(-c, x, t));
                        },
                        0.0, ay, o);
  };
  return integrate(inner, 0.0, angle_of(x), o);
}

// ---------------------------------------------------------------------------

namespace {

Verdict closed_form_verdict(const BivariateDF& F, double tol, const std::string& what) {
  Verdict v = is_bifree_maxid(F, tol);
  v.reason = what + ": " + v.reason;
  return v;
}

double q_direct(double c, double x, double y) {
  return semicircle_cdf(x) * semicircle_cdf(y) / cdf_at(c, x, y);
}

}  // namespace

Verdict maxid_verdict(double c, const VerdictOptions& opts) {
  if (!(std::abs(c) <= 1.0)) throw std::invalid_argument("maxid_verdict: c must lie in [-1, 1]");
  if (opts.resolution < 2) throw std::invalid_argument("maxid_verdict: resolution must be >= 2");
  const auto knots = linspace(-2.0, 2.0, static_cast<std::size_t>(opts.resolution) + 1);
  const ProbeGrid grid{knots, knots};
  const auto sc = semicircle();

  if (c == 0.0) {
    auto F = BivariateDF::from_q(sc, sc, [](double, double) { return 1.0; }, grid);
    return closed_form_verdict(F, opts.tol, "c = 0, product of semicircle laws");
  }
  if (c == 1.0) {
    auto F = BivariateDF::from_q(
        sc, sc, [](double x, double y) { return std::max(semicircle_cdf(x), semicircle_cdf(y)); },
        grid);
    return closed_form_verdict(F, opts.tol, "c = 1, mass on the line t = s gives min(F1, F2)");
  }
  if (c == -1.0) {
    auto F = BivariateDF::from_function(
        sc, sc,
        [](double x, double y) {
          return std::max(semicircle_cdf(x) + semicircle_cdf(y) - 1.0, 0.0);
        },
        grid);
    return closed_form_verdict(F, opts.tol,
                               "c = -1, mass on the line t = -s gives (F1 + F2 - 1)_+");
  }

  Verdict out;
  if (c < 0.0) {
    const auto G = cdf_grid(c, opts.resolution);
    const std::size_t n = G.nx();
    double best = -kInf;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 1; i + 2 < n; ++i) {
      for (std::size_t j = 1; j + 1 < n; ++j) {
        const double f1 = G.value(i, j), f2 = G.value(i + 1, j);
        if (!(f1 > 0.0 && f2 > 0.0)) continue;
        const double b = sc(knots[j]);
        const double d = sc(knots[i]) * b / f1 - sc(knots[i + 1]) * b / f2;
        if (d > best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    const double x1 = knots[bi], x2 = knots[bi + 1], y = knots[bj];
    const double margin = q_direct(c, x1, y) - q_direct(c, x2, y);
    out.margin = margin;
    if (margin > opts.tol) {
      out.status = Status::no;
      out.reason = "Q_F decreases in x, so Q_F is not nondecreasing";
      out.witness = Witness{"Q_F(x1,y) - Q_F(x2,y)", {{x1, y}, {x2, y}}, margin};
    } else {
      out.status = Status::inconclusive;
      out.reason = "no decrease of Q_F above tolerance on the grid";
    }
    return out;
  }

  // c in (0,1): T_F increases in x somewhere near (-2,-2).
  const int K = opts.corner_depth;
  if (K < 2) throw std::invalid_argument("maxid_verdict: corner depth must be >= 2");
  std::vector<double> mesh(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) mesh[static_cast<std::size_t>(k - 1)] = -2.0 + std::ldexp(1.0, -k);
  double best = -kInf;
  Point lo{}, hi{};
  for (double y : mesh) {
    const double Fy = semicircle_cdf(y);
    std::vector<double> T(mesh.size());
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      const double Fx = semicircle_cdf(mesh[k]);
      T[k] = Fx * Fy / cdf_at(c, mesh[k], y) - Fx - Fy + 1.0;
    }
    // mesh is decreasing: mesh[k+1] < mesh[k].
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
      const double d = T[k] - T[k + 1];
      if (d > best) {
        best = d;
        lo = {mesh[k + 1], y};
        hi = {mesh[k], y};
      }
    }
  }
  out.margin = best;
  if (best > opts.tol) {
    out.status = Status::no;
    out.reason = "T_F increases in x near (-2,-2)";
    out.witness = Witness{"T_F(x2,y) - T_F(x1,y)", {lo, hi}, best};
  } else {
    out.status = Status::inconclusive;
    out.reason = "no increase of T_F found on the corner mesh down to depth " + std::to_string(K);
  }
  return out;
}

}  // namespace bfev::gaussian
