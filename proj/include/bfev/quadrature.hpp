#pragma once

#include <functional>
#include <vector>

namespace bfev {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (Newton iteration on P_n).
GaussRule gauss_legendre(int order);

struct QuadratureOptions {
  int order = 32;
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_depth = 30;
};

/// Adaptive Gauss-Legendre: a panel is accepted once its single-panel value
/// and the sum over its two halves differ by at most
/// max(abs_tol, rel_tol * |value|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace bfev
