#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bfev/dist_core.hpp"
#include "bfev/format.hpp"
#include "fixtures.hpp"

using namespace bfev;
using bfev::fixtures::min_of_uniforms;
using bfev::fixtures::product_of_uniforms;

TEST(UnivariateGrid, StepLookupAndSupport) {
  auto F = UnivariateDF::grid({0.0, 1.0, 2.0}, {0.25, 0.5, 1.0});
  EXPECT_EQ(F(-0.1), 0.0);
  EXPECT_EQ(F(0.0), 0.25);
  EXPECT_EQ(F(0.99), 0.25);
  EXPECT_EQ(F(1.5), 0.5);
  EXPECT_EQ(F(7.0), 1.0);
  EXPECT_EQ(F.lower(), 0.0);
  EXPECT_EQ(F.upper(), 2.0);
  EXPECT_EQ(quantile(F, 0.3), 1.0);
  EXPECT_EQ(quantile(F, 0.25), 0.0);
}

TEST(UnivariateGrid, RejectsMalformedInput) {
  EXPECT_THROW(UnivariateDF::grid({0.0, 1.0}, {0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(UnivariateDF::grid({1.0, 0.0}, {0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(UnivariateDF::grid({0.0, 1.0}, {0.5, 1.5}), std::invalid_argument);
  // Values short of 1 need an explicit upper point.
  EXPECT_THROW(UnivariateDF::grid({0.0, 1.0}, {0.5, 0.7}), std::invalid_argument);
  auto open = UnivariateDF::grid({0.0, 1.0}, {0.5, 0.7}, kInf);
  EXPECT_EQ(open(100.0), 0.7);
}

TEST(UnivariateDirac, IsAStep) {
  auto d = UnivariateDF::dirac(2.0);
  EXPECT_EQ(d(1.999), 0.0);
  EXPECT_EQ(d(2.0), 1.0);
  EXPECT_EQ(d.lower(), 2.0);
}

TEST(EvalBdf, ProductOfUniforms) {
  EXPECT_DOUBLE_EQ(eval_bdf(product_of_uniforms(), {0.5, 0.5}), 0.25);
}

TEST(EvalBdf, BelowSupportIsZero) {
  EXPECT_EQ(eval_bdf(product_of_uniforms(), {-0.1, 0.5}), 0.0);
  EXPECT_EQ(eval_bdf(min_of_uniforms(), {0.5, -3.0}), 0.0);
}

TEST(EvalBdf, MinOfUniforms) { EXPECT_DOUBLE_EQ(eval_bdf(min_of_uniforms(), {0.3, 0.8}), 0.3); }

TEST(Volume, FullSquareHasUnitMass) {
  EXPECT_NEAR(volume(product_of_uniforms(), {{0.0, 0.0}, {1.0, 1.0}}), 1.0, 1e-15);
}

TEST(Volume, DegenerateRectangleIsZero) {
  EXPECT_EQ(volume(product_of_uniforms(), {{0.4, 0.4}, {0.4, 0.4}}), 0.0);
}

TEST(Volume, MinPutsMassOnTheDiagonal) {
  EXPECT_NEAR(volume(min_of_uniforms(), {{0.0, 0.0}, {0.5, 0.5}}), 0.5, 1e-15);
  EXPECT_NEAR(volume(min_of_uniforms(), {{0.0, 0.5}, {0.5, 1.0}}), 0.0, 1e-15);
}

TEST(Volume, RejectsInvertedRectangle) {
  EXPECT_THROW(volume(product_of_uniforms(), {{0.5, 0.0}, {0.4, 1.0}}), std::invalid_argument);
}

TEST(TailBdf, Values) {
  const auto F = product_of_uniforms();
  EXPECT_DOUBLE_EQ(tail_bdf(F, {0.5, 0.5}), 0.25);
  EXPECT_DOUBLE_EQ(tail_bdf(F, {-1.0, -1.0}), 1.0);
  EXPECT_DOUBLE_EQ(tail_bdf(F, {2.0, 2.0}), 0.0);
}

TEST(QuasiMonotone, ProductAndCopulaGridsPass) {
  EXPECT_TRUE(is_quasi_monotone(product_of_uniforms(), 1e-12).pass);
  const auto F = couple(Copula::amh(0.5), fixtures::uniform01(), fixtures::uniform01(),
                        fixtures::unit_knots(21));
  EXPECT_TRUE(is_quasi_monotone(F, 1e-12).pass);
}

TEST(QuasiMonotone, HandBuiltMatrixFails) {
  const std::vector<double> xs{0.0, 1.0}, ys{0.0, 1.0}, vals{0.0, 0.5, 0.5, 0.6};
  const auto v = is_quasi_monotone(xs, ys, vals, 1e-12);
  EXPECT_FALSE(v.pass);
  EXPECT_NEAR(v.min_volume, -0.4, 1e-15);
  ASSERT_TRUE(v.worst.has_value());
  EXPECT_EQ(v.worst->i, 0u);
  EXPECT_EQ(v.worst->j, 0u);
}

TEST(SupDistance, Cases) {
  const auto P = product_of_uniforms(), M = min_of_uniforms();
  EXPECT_EQ(sup_distance(P, P, P.knot_grid()), 0.0);
  const std::vector<Point> diag{{0.5, 0.5}};
  EXPECT_DOUBLE_EQ(sup_distance(P, M, diag), 0.25);
  const std::vector<Point> mid{{0.5, 0.5}};
  EXPECT_EQ(sup_distance(BivariateDF::dirac({0.0, 0.0}), BivariateDF::dirac({1.0, 1.0}), mid), 1.0);
}

TEST(DiscreteMeasure, OpenQuadrantTail) {
  DiscreteMeasure mu({{{1.0, 1.0}, 0.5}, {{2.0, 0.0}, 0.25}});
  EXPECT_EQ(mu.total_mass(), 0.75);
  EXPECT_EQ(mu.tail({1.0, 1.0}), 0.0);
  EXPECT_EQ(mu.tail({0.5, 0.5}), 0.5);
  EXPECT_EQ(mu.tail({0.5, -1.0}), 0.75);
  EXPECT_EQ(mu.marginal_tail(1, 1.0), 0.25);
  EXPECT_EQ(mu.cdf({1.0, 1.0}), 0.5);
  EXPECT_EQ(mu.scaled(2.0).total_mass(), 1.5);
}

TEST(DiscreteMeasure, RejectsNegativeMass) {
  EXPECT_THROW(DiscreteMeasure({{{0.0, 0.0}, -0.1}}), std::invalid_argument);
}

TEST(DfOfMeasure, MatchesMeasureCdf) {
  DiscreteMeasure mu({{{0.0, 1.0}, 0.5}, {{1.0, 0.0}, 0.5}});
  const auto F = df_of_measure(mu);
  EXPECT_EQ(F({0.0, 0.0}), 0.0);
  EXPECT_EQ(F({0.0, 1.0}), 0.5);
  EXPECT_EQ(F({1.0, 1.0}), 1.0);
  EXPECT_EQ(F.marginal1()(0.0), 0.5);
}

TEST(GridFromValues, ReadsMarginalsOffTheEdges) {
  const auto F = grid_from_values({0.0, 1.0}, {0.0, 1.0}, {0.25, 0.5, 0.5, 1.0});
  EXPECT_EQ(F.marginal1()(0.0), 0.5);
  EXPECT_EQ(F.marginal2()(0.0), 0.5);
  EXPECT_EQ(F({5.0, 0.5}), 0.5);
}

TEST(BivariateGrid, RejectsValuesAboveMarginals) {
  auto m = UnivariateDF::grid({0.0, 1.0}, {0.5, 1.0});
  EXPECT_THROW(BivariateDF::grid(m, m, {0.0, 1.0}, {0.0, 1.0}, {0.7, 0.5, 0.5, 1.0}),
               std::invalid_argument);
}

// Tails of a random atomic law match the measure's own open-quadrant mass.
TEST(Property, RandomLawsAreQuasiMonotoneWithMatchingTails) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> coord(0, 4);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int k = 0; k < 5; ++k) {
      atoms.push_back({{double(coord(rng)), double(coord(rng))}, mass(rng)});
      total += atoms.back().mass;
    }
    for (auto& a : atoms) a.mass /= total;
    const DiscreteMeasure mu(atoms);
    const auto F = df_of_measure(mu);
    EXPECT_TRUE(is_quasi_monotone(F, 1e-12).pass);
    for (double x = -0.5; x <= 4.5; x += 0.5)
      for (double y = -0.5; y <= 4.5; y += 0.5) {
        EXPECT_NEAR(tail_bdf(F, {x, y}), mu.tail({x, y}), 1e-12);
        EXPECT_NEAR(F({x, y}), mu.cdf({x, y}), 1e-12);
      }
  }
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_double(kInf), "inf");
  EXPECT_EQ(format_double(-kInf), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  for (double v : {1e-300, 12345.678, -2.5e17}) EXPECT_EQ(std::stod(format_double(v)), v);
}
