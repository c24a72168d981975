#include <gtest/gtest.h>

#include <cmath>

#include "bfev/copulas.hpp"
#include "fixtures.hpp"

using namespace bfev;

namespace {

bool member(const Copula& C, CopulaCheckMode mode = CopulaCheckMode::grid) {
  CopulaCheckOptions o;
  o.mode = mode;
  return check_bifree_copula(C, o).status == Status::yes;
}

const std::vector<double> kProbe{0.05, 0.2, 0.37, 0.5, 0.81, 0.95};

}  // namespace

TEST(EvalCopula, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(eval_copula(Copula::independence(), 0.3, 0.5), 0.15);
  EXPECT_DOUBLE_EQ(eval_copula(Copula::comonotone(), 0.3, 0.7), 0.3);
  EXPECT_NEAR(eval_copula(Copula::amh(1.0), 0.5, 0.5), 1.0 / 3.0, 1e-15);
}

TEST(EvalCopula, BoundaryIdentities) {
  for (const auto& C : {Copula::amh(0.3), Copula::clayton(0.5), Copula::logistic(3.0)}) {
    EXPECT_EQ(C(0.0, 0.4), 0.0);
    EXPECT_EQ(C(0.4, 0.0), 0.0);
    EXPECT_EQ(C(1.0, 0.4), 0.4);
    EXPECT_EQ(C(0.4, 1.0), 0.4);
  }
}

TEST(Families, ClaytonMatchesItsArchimedeanForm) {
  for (double p : {0.25, 0.5, 1.0, 2.0})
    for (double u : kProbe)
      for (double v : kProbe) {
        const double oracle = std::pow(std::pow(u, -1.0 / p) + std::pow(v, -1.0 / p) - 1.0, -p);
        EXPECT_NEAR(Copula::clayton(p)(u, v), oracle, 1e-13);
      }
}

TEST(Families, LomaxWithUnitPowerIsAmh) {
  for (double t : {-0.5, 0.0, 0.5, 1.0})
    for (double u : kProbe)
      for (double v : kProbe) EXPECT_NEAR(Copula::lomax(1.0, t)(u, v), Copula::amh(t)(u, v), 1e-15);
}

TEST(Families, FgmClosedForm) {
  for (double u : kProbe)
    for (double v : kProbe)
      EXPECT_NEAR(Copula::fgm(0.7)(u, v), u * v * (1.0 + 0.7 * (1 - u) * (1 - v)), 1e-15);
}

TEST(Families, ParameterRangesAreEnforced) {
  EXPECT_THROW(Copula::amh(1.5), std::invalid_argument);
  EXPECT_THROW(Copula::fgm(-1.2), std::invalid_argument);
  EXPECT_THROW(Copula::lomax(0.5, -0.6), std::invalid_argument);
  EXPECT_THROW(Copula::clayton(0.0), std::invalid_argument);
  EXPECT_THROW(Copula::logistic(0.5), std::invalid_argument);
}

TEST(Survival, IndependenceIsSelfSurvival) {
  EXPECT_NEAR(survival_copula(Copula::independence())(0.3, 0.5), 0.15, 1e-15);
}

TEST(Survival, ComonotoneIsSelfSurvival) {
  const auto S = survival_copula(Copula::comonotone());
  for (double u : kProbe)
    for (double v : kProbe) EXPECT_NEAR(S(u, v), std::min(u, v), 1e-15);
}

TEST(Pickands, SpectralMeasureOfIndependence) {
  const auto A = pickands_from_measure(DiscreteMeasure({{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}}));
  for (double t : {0.0, 0.2, 0.5, 1.0}) EXPECT_NEAR(A(t), 1.0, 1e-15);
}

TEST(Pickands, SpectralMeasureOfComonotone) {
  const auto A = pickands_from_measure(DiscreteMeasure({{{0.5, 0.5}, 2.0}}));
  for (double t : {0.0, 0.2, 0.5, 0.9}) EXPECT_NEAR(A(t), std::max(t, 1.0 - t), 1e-15);
}

TEST(Pickands, RejectsMeanConstraintViolation) {
  try {
    pickands_from_measure(DiscreteMeasure({{{0.5, 0.5}, 1.0}}));
    FAIL() << "expected rejection";
  } catch (const PickandsConstraintError& e) {
    EXPECT_NEAR(e.mean_x, 0.5, 1e-15);
    EXPECT_NEAR(e.mean_y, 0.5, 1e-15);
  }
}

TEST(Pickands, BuiltInsAreDependenceFunctions) {
  for (const auto& A : {PickandsFn::gumbel_mixed(0.7), PickandsFn::logistic(2.0),
                        PickandsFn::marshall_olkin(0.5, 0.3), PickandsFn::comonotone()}) {
    EXPECT_NEAR(A(0.0), 1.0, 1e-15);
    EXPECT_NEAR(A(1.0), 1.0, 1e-15);
    for (int k = 1; k < 100; ++k) {
      const double t = k / 100.0, h = 0.01;
      EXPECT_GE(A(t), std::max(t, 1.0 - t) - 1e-15);
      EXPECT_LE(A(t), 1.0 + 1e-15);
      if (k > 1 && k < 99) EXPECT_GE(A(t + h) + A(t - h) - 2.0 * A(t), -1e-12);
    }
  }
}

TEST(EvCopula, ExtremeCases) {
  EXPECT_NEAR(ev_copula(PickandsFn::independence())(0.3, 0.5), 0.15, 1e-15);
  EXPECT_NEAR(ev_copula(PickandsFn::comonotone())(0.3, 0.7), 0.3, 1e-15);
}

TEST(EvCopula, LogisticAtInverseE) {
  const double e1 = std::exp(-1.0);
  EXPECT_NEAR(ev_copula(PickandsFn::logistic(2.0))(e1, e1), std::exp(-std::sqrt(2.0)), 1e-14);
}

TEST(BifreeCopula, ExtremeCases) {
  const auto I = bifree_copula(PickandsFn::independence());
  const auto M = bifree_copula(PickandsFn::comonotone());
  for (double u : kProbe)
    for (double v : kProbe) {
      EXPECT_NEAR(I(u, v), u * v, 1e-15);
      EXPECT_NEAR(M(u, v), std::min(u, v), 1e-15);
    }
}

TEST(BifreeCopula, GumbelMixedClosedForm) {
  EXPECT_NEAR(Copula::gumbel_mixed(1.0)(0.5, 0.5), 1.0 / 3.0, 1e-15);
  const auto viaA = bifree_copula(PickandsFn::gumbel_mixed(0.6));
  const auto named = Copula::gumbel_mixed(0.6);
  for (double u : kProbe)
    for (double v : kProbe) {
      const double f = 1.0 - 0.6 * (1 - u) * (1 - v) / (2 - u - v);
      EXPECT_NEAR(named.f(u, v), f, 1e-14);
      EXPECT_NEAR(viaA(u, v), u * v / f, 1e-14);
    }
}

TEST(BifreeCopula, FFromPickandsBoundary) {
  const auto A = PickandsFn::logistic(2.0);
  EXPECT_EQ(f_from_pickands(A, 1.0, 1.0), 1.0);
  EXPECT_NEAR(f_from_pickands(A, 0.3, 1.0), 1.0, 1e-15);
}

TEST(MembershipCheck, ExamplesFromTheFamilyRanges) {
  EXPECT_TRUE(member(Copula::amh(0.5)));
  EXPECT_FALSE(member(Copula::fgm(-0.5)));
  EXPECT_FALSE(member(Copula::clayton(2.0)));
  EXPECT_TRUE(member(Copula::clayton(0.5)));
  EXPECT_TRUE(member(Copula::lomax(0.5, 1.0)));
  EXPECT_FALSE(member(Copula::amh(-0.2)));
}

TEST(MembershipCheck, NonmemberCarriesWitness) {
  const auto v = check_bifree_copula(Copula::fgm(-0.5));
  ASSERT_EQ(v.status, Status::no);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_LT(v.margin, 0.0);
  EXPECT_GT(v.witness->value, 1e-9);
}

TEST(MembershipCheck, SmoothModeAgreesOnSmoothFamilies) {
  for (const auto& C : {Copula::amh(0.5), Copula::amh(-0.5), Copula::fgm(0.5), Copula::fgm(-0.5),
                        Copula::clayton(0.5), Copula::clayton(2.0)})
    EXPECT_EQ(member(C), member(C, CopulaCheckMode::smooth)) << C.spec();
}

TEST(MembershipCheck, SmoothModeRefusesKinkedFamilies) {
  CopulaCheckOptions o;
  o.mode = CopulaCheckMode::smooth;
  EXPECT_THROW(check_bifree_copula(Copula::marshall_olkin(0.5, 0.5), o), std::invalid_argument);
  EXPECT_THROW(check_bifree_copula(Copula::comonotone(), o), std::invalid_argument);
}

TEST(MembershipCheck, BifreePickandsCopulasAreMembers) {
  for (const auto& A : {PickandsFn::gumbel_mixed(1.0), PickandsFn::logistic(2.0),
                        PickandsFn::marshall_olkin(0.5, 0.5), PickandsFn::comonotone()})
    EXPECT_TRUE(member(bifree_copula(A))) << A.spec();
}

TEST(PowerTransform, Identities) {
  const auto C = Copula::amh(0.4);
  const auto P1 = power_transform(C, 1.0);
  const auto PI = power_transform(Copula::independence(), 0.3);
  for (double u : kProbe)
    for (double v : kProbe) {
      EXPECT_EQ(P1(u, v), C(u, v));
      EXPECT_NEAR(PI(u, v), u * v, 1e-15);
    }
}

TEST(PowerTransform, AmhHalfPowerIsLomaxMember) {
  const auto P = power_transform(Copula::amh(1.0), 0.5);
  const auto L = Copula::lomax(0.5, 1.0);
  for (double u : kProbe)
    for (double v : kProbe) EXPECT_NEAR(P(u, v), L(u, v), 1e-14);
  EXPECT_TRUE(member(P));
}

TEST(Axioms, AllFamiliesAreCopulas) {
  for (const auto& C :
       {Copula::independence(), Copula::comonotone(), Copula::amh(-1.0), Copula::fgm(1.0),
        Copula::clayton(2.0), Copula::lomax(2.0, -0.5), Copula::gumbel_mixed(1.0),
        Copula::logistic(3.0), Copula::marshall_olkin(0.3, 0.8),
        ev_copula(PickandsFn::logistic(2.0)), survival_copula(Copula::clayton(0.5)),
        power_transform(Copula::amh(0.7), 0.5)}) {
    const auto r = check_copula_axioms(C, 41);
    EXPECT_TRUE(r.pass) << C.spec() << " vol=" << r.min_volume << " lip=" << r.lipschitz;
  }
}

TEST(GridCopula, InterpolatesAndChecks) {
  const auto xs = linspace(0.0, 1.0, 11);
  std::vector<double> vals;
  for (double u : xs)
    for (double v : xs) vals.push_back(u * v);
  const auto G = Copula::grid(xs, xs, vals);
  EXPECT_NEAR(G(0.35, 0.55), 0.35 * 0.55, 1e-15);
  EXPECT_TRUE(check_copula_axioms(G, 21).pass);
  EXPECT_TRUE(member(G));
  EXPECT_THROW(Copula::grid({0.0, 0.5}, {0.0, 1.0}, {0, 0, 0, 0.5}), std::invalid_argument);
}

TEST(DoaIterate, FirstIterateIsTheCopula) {
  const auto C = Copula::amh(0.5);
  const ProbeGrid probe = fixtures::unit_knots(6);
  const auto it = doa_iterate(C, 1, probe);
  std::size_t k = 0;
  for (double u : probe.xs)
    for (double v : probe.ys) EXPECT_EQ(it[k++], C(u, v));
}

TEST(DoaIterate, ExtremeValueCopulaIsMaxStable) {
  const auto C = ev_copula(PickandsFn::logistic(2.0));
  for (long long n : {2LL, 17LL, 1000LL}) EXPECT_LE(doa_distance(C, C, n, fixtures::unit_knots(21)), 1e-12);
}

TEST(DoaIterate, GumbelMixedApproachesItsLimit) {
  const ProbeGrid probe{{0.5}, {0.5}};
  const double oracle = 0.25 * std::exp(std::log(2.0) / 2.0);
  EXPECT_NEAR(doa_iterate(Copula::gumbel_mixed(1.0), 10000, probe)[0], oracle, 1e-3);
}

TEST(DoaIterate, MarshallOlkinApproachesItsLimit) {
  const double th = 0.5, ph = 0.5;
  const auto C = Copula::marshall_olkin(th, ph);
  const ProbeGrid probe = fixtures::unit_knots(21);
  const auto it = doa_iterate(C, 10000, probe);
  std::size_t k = 0;
  for (double u : probe.xs)
    for (double v : probe.ys) {
      const double oracle = (u <= 0.0 || v <= 0.0) ? 0.0 : u * v * std::min(std::pow(u, -th), std::pow(v, -ph));
      EXPECT_NEAR(it[k++], oracle, 1e-3);
    }
}

TEST(Couple, SklarWithUniformMarginals) {
  const auto F = couple(Copula::amh(0.5), fixtures::uniform01(), fixtures::uniform01(), fixtures::unit_knots());
  EXPECT_NEAR(F({0.3, 0.6}), Copula::amh(0.5)(0.3, 0.6), 1e-15);
  EXPECT_EQ(F({-0.1, 0.6}), 0.0);
  EXPECT_NEAR(F({2.0, 0.6}), 0.6, 1e-15);
}
