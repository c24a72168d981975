#include "bfev/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace bfev {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.nodes[i] = -z;
    r.nodes[order - 1 - i] = z;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

namespace {

const GaussRule& cached_rule(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
  return it->second;
}

double panel(const std::function<double(double)>& f, double a, double b, const GaussRule& r) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * f(mid + half * r.nodes[k]);
  return s * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             const GaussRule& r, const QuadratureOptions& o, double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = panel(f, a, m, r), right = panel(f, m, b, r);
  const double split = left + right;
  if (std::abs(split - whole) <= std::max(abs_tol, o.rel_tol * std::abs(split)) ||
      depth >= o.max_depth || !(m > a && m < b))
    return split;
  return adapt(f, a, m, left, r, o, 0.5 * abs_tol, depth + 1) +
         adapt(f, m, b, right, r, o, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  const GaussRule& r = cached_rule(opts.order);
  return adapt(f, a, b, panel(f, a, b, r), r, opts, opts.abs_tol, 0);
}

}  // namespace bfev
