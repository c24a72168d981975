#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bfev/copulas.hpp"
#include "bfev/dist_core.hpp"

namespace bfev {

struct GEVParams {
  double xi = 0.0;
  double m = 0.0;
  double sigma = 1.0;
};

/// exp[-(1 + xi (x - m)/sigma)^(-1/xi)], Gumbel limit at xi = 0.
UnivariateDF gev_df(const GEVParams& p);

/// (1 + log G)_+. GEV inputs are recognised by their spec and mapped to the
/// closed-form free type.
UnivariateDF free_from_classical(const UnivariateDF& G);

/// Free extreme type (1 + log G)_+ for G = gev_df(p): support starts at m.
UnivariateDF free_gev(const GEVParams& p);
/// (1 - e^-x)_+.
UnivariateDF free_exponential();
/// (1 - x^-alpha)_+.
UnivariateDF free_pareto(double alpha);
/// 1 - (-x)^alpha on [-1, 0].
UnivariateDF free_beta(double alpha);
/// Uniform DF on [a, b] (not an extreme type; used as a control).
UnivariateDF uniform_df(double a = 0.0, double b = 1.0);

/// Affine normalizers x -> a(n) x + b(n), y -> c(n) y + d(n).
struct NormalizingSequence {
  std::function<double(long long)> a;
  std::function<double(long long)> b;
  std::function<double(long long)> c;
  std::function<double(long long)> d;

  static NormalizingSequence identity();
  /// Normalizers under which gev_df(p1) x gev_df(p2) (and the free types) are
  /// stable: a = n^xi, b = m(1 - n^xi) + sigma (n^xi - 1)/xi; a = 1,
  /// b = sigma log n at xi = 0.
  static NormalizingSequence from_gev(const GEVParams& p1, const GEVParams& p2);
};

/// Pair of normalizers for one coordinate.
std::pair<double, double> gev_normalizer(const GEVParams& p, long long n);

/// exp[(log G1 + log G2) A(log G1 / (log G1 + log G2))].
BivariateDF classical_mev(const UnivariateDF& G1, const UnivariateDF& G2, const PickandsFn& A,
                          ProbeGrid knots);

/// C_A(F1, F2) with C_A the bi-free copula of A.
BivariateDF bifree_ev(const UnivariateDF& F1, const UnivariateDF& F2, const PickandsFn& A,
                      ProbeGrid knots);

struct StabilityRow {
  long long n = 0;
  double distance = 0.0;
};

/// sup over the probe of |F^(n)(a x + b, c y + d) - F(x, y)| for each n.
std::vector<StabilityRow> check_max_stable(const BivariateDF& F, const NormalizingSequence& seq,
                                           const std::vector<long long>& ns,
                                           const ProbeGrid& probe);

struct DoaRow {
  long long n = 0;
  std::string diagnostic;  // "classical" or "bifree"
  double value = 0.0;
};

/// For each n: sup |n(1 - H(rescaled)) + log G| over probes with G > 0, and
/// sup |H^(n)(rescaled) - F|.
std::vector<DoaRow> doa_experiment(const BivariateDF& H, const NormalizingSequence& seq,
                                   const BivariateDF& G, const BivariateDF& F,
                                   const std::vector<long long>& ns, const ProbeGrid& probe);

struct PickandsSample {
  double t = 0.0;
  double A = 0.0;
};

/// Reads A back from a bi-free EV distribution on the curve 2 - u - v = 1:
/// with F1(x) = 1 - t and F2(y) = t, Q_F(x,y) = A(t). The returned t is the
/// one realised at the located quantiles.
PickandsSample recover_pickands(const BivariateDF& F, double t);

}  // namespace bfev
