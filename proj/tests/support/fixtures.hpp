#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <vector>

#include "bfev/biconv.hpp"
#include "bfev/copulas.hpp"
#include "bfev/dist_core.hpp"
#include "bfev/extremes.hpp"

namespace bfev::fixtures {

inline UnivariateDF uniform01() { return uniform_df(0.0, 1.0); }

inline ProbeGrid unit_knots(std::size_t n = 11) { return {linspace(0.0, 1.0, n), linspace(0.0, 1.0, n)}; }

inline BivariateDF product_of_uniforms(std::size_t n = 11) {
  return couple(Copula::independence(), uniform01(), uniform01(), unit_knots(n));
}

inline BivariateDF min_of_uniforms(std::size_t n = 11) {
  return couple(Copula::comonotone(), uniform01(), uniform01(), unit_knots(n));
}

// Law of a random atomic probability measure on a small integer lattice.
inline BivariateDF random_grid_df(std::mt19937_64& rng, int atoms = 4, int lattice = 5) {
  std::uniform_int_distribution<int> coord(0, lattice - 1);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::vector<Atom> a;
  double total = 0.0;
  for (int k = 0; k < atoms; ++k) {
    a.push_back({{static_cast<double>(coord(rng)), static_cast<double>(coord(rng))}, mass(rng)});
    total += a.back().mass;
  }
  for (auto& x : a) x.mass /= total;
  return df_of_measure(DiscreteMeasure(std::move(a)));
}

// Random exponent measure with atoms strictly above the origin and total
// mass at most 1, so every marginal tail stays <= 1.
inline DiscreteMeasure random_exponent_measure(std::mt19937_64& rng, int atoms = 3) {
  std::uniform_int_distribution<int> coord(1, 4);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::uniform_real_distribution<double> total(0.1, 1.0);
  std::vector<Atom> a;
  double sum = 0.0;
  for (int k = 0; k < atoms; ++k) {
    a.push_back({{static_cast<double>(coord(rng)), static_cast<double>(coord(rng))}, mass(rng)});
    sum += a.back().mass;
  }
  const double target = total(rng);
  for (auto& x : a) x.mass *= target / sum;
  return DiscreteMeasure(std::move(a));
}

// Knot grid of F refined with midpoints and one point beyond each end.
inline ProbeGrid refined_probe(const BivariateDF& F) {
  auto refine = [](std::span<const double> k) {
    std::vector<double> out(k.begin(), k.end());
    for (std::size_t i = 0; i + 1 < k.size(); ++i) out.push_back(0.5 * (k[i] + k[i + 1]));
    out.push_back(k.front() - 1.0);
    out.push_back(k.back() + 1.0);
    std::sort(out.begin(), out.end());
    return out;
  };
  return {refine(F.xknots()), refine(F.yknots())};
}

}  // namespace bfev::fixtures
