#pragma once

#include <vector>

#include "bfev/dist_core.hpp"
#include "bfev/verdict.hpp"

namespace bfev {

/// (F + G - 1)_+.
UnivariateDF free_maxconv(const UnivariateDF& F, const UnivariateDF& G);

/// Bi-free max-convolution. The marginals are free max-convolutions and, where
/// F, G, H1, H2 are positive, H1 H2 / H = F1 F2 / F + G1 G2 / G - 1; H = 0
/// elsewhere. Analytic inputs give an analytic result; otherwise the result is
/// a grid on the union of the knot sets.
BivariateDF bifree_maxconv(const BivariateDF& F, const BivariateDF& G);

/// Power F^(t) for real t >= 0: Q - 1 scales by t. For t >= 1 the marginals
/// are (t F_j - (t - 1))_+; for t < 1 the canonical root is returned, with
/// marginals 1 - t(1 - F_j) on [L_j, inf) and support the full rectangle.
BivariateDF bifree_power(const BivariateDF& F, double t);

/// Univariate counterpart of the power rule (same conventions).
UnivariateDF free_power(const UnivariateDF& F, double t);

/// T_F = F1 F2 / F - F1 - F2 + 1 at a point; std::domain_error where F = 0.
double transform_T(const BivariateDF& F, Point x);
/// Q_F = F1 F2 / F at a point; std::domain_error where F = 0.
double transform_Q(const BivariateDF& F, Point x);
/// Surfaces on the knot grid; NaN where F = 0.
Surface transform_T(const BivariateDF& F);
Surface transform_Q(const BivariateDF& F);

/// Bi-free max-infinite divisibility on the grid. Requires a finite lower
/// corner and {F > 0} = {F1 > 0} x {F2 > 0}; then checks that T_F is
/// nonincreasing in each axis, that every T_F cell volume is <= tol, and
/// 0 <= Q_F(y) - Q_F(x) <= F1(y1) - F1(x1) + F2(y2) - F2(x2) for neighbouring
/// knots (which telescopes to all ordered pairs).
Verdict is_bifree_maxid(const BivariateDF& F, double tol = 1e-9);

/// F(x) = F1(x1) F2(x2) / (1 - tau((x, inf))) above L, with
/// F_j(x) = 1 - tau_j((x, inf)) on [L_j, inf). Throws when a marginal tail
/// exceeds 1.
BivariateDF from_exponent_measure(const DiscreteMeasure& tau, Point L);

/// G = exp(-t T_F) on [L, inf), 0 elsewhere.
BivariateDF exponent_df_from_TF(const BivariateDF& F, double t);

/// F^(1/n) quasi-monotone on the knot grid padded with a zero row and column
/// below the support. Status yes = pass.
Verdict classical_maxid_check(const BivariateDF& F, int n, double tol = 1e-9);

struct LadderRow {
  long long n = 0;
  double distance = 0.0;
};

struct CompoundPoissonResult {
  BivariateDF limit;
  Point L;
  std::vector<LadderRow> ladder;
};

/// Law (1 - lambda/n) delta_p + (lambda/n) nu raised to the n-th bi-free power,
/// compared with the exponent-measure limit tau = lambda nu for
/// n = 2, 4, ..., 2^kmax (rungs with n < lambda are skipped).
CompoundPoissonResult compound_poisson_limit(double lambda, const DiscreteMeasure& nu, Point p,
                                             int kmax = 10);

/// Lower corner of the limit: L_j = max(p_j, inf{F_nu_j > 1 - 1/lambda}).
Point compound_poisson_corner(double lambda, const DiscreteMeasure& nu, Point p);

}  // namespace bfev
