#include <gtest/gtest.h>

#include "caustic/catalog.hpp"
#include "caustic/realization.hpp"
#include "caustic/property.hpp"

using namespace caustic;

namespace {

constexpr double pi = std::numbers::pi;

const Extraction& collapse_extraction() {
  static const Extraction x = extract_chain(collapse_family(0.1));
  return x;
}

double periodic_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * pi);
  return std::min(d, 2 * pi - d);
}

}  // namespace

// ---- families ----

TEST(Families, CollapseDerivativesAgreeWithDifferences) {
  GenFun f = collapse_family(0.1);
  for (double x : {0.0, 0.7, 2.1, 4.4})
    for (double a : {-1.0, 0.1, 0.9}) EXPECT_TRUE(cross_check(f, a, -0.3, x).ok);
}

TEST(Families, CollapseThirdDerivativeHasAmplitudeThreeEps) {
  // on the fold circle f_xixixi = -3 eps sin 2 xi up to the cutoff, so its peak is 3 eps
  GenFun f = collapse_family(0.1);
  double peak = 0;
  for (const auto& k : collapse_extraction().report.curves.front().points)
    peak = std::max(peak, std::abs(eval_derivatives(f, k[0], k[1], k[2]).xi[3]));
  EXPECT_NEAR(peak, 0.3, 2e-3);
}

TEST(Families, MorinThetaDropsBelowZeroInsideTheBump) {
  for (auto k : {MorinKind::birth, MorinKind::band, MorinKind::pair}) {
    MorinTheta t0{k, 0, {}}, t1{k, 1, {}};
    EXPECT_GT(t0(0).first, 0) << to_string(k);
    EXPECT_LT(t1(0).first, 0) << to_string(k);
  }
}

TEST(Families, QuadRotHessian) {
  auto H = QuadRot{0.05}.hessian(0.3, -0.2);
  EXPECT_DOUBLE_EQ(H[0], 0.4 + 0.1);
  EXPECT_DOUBLE_EQ(H[1], -0.4 + 0.1);
  EXPECT_DOUBLE_EQ(H[2], -0.6);
}

// ---- critical sheets ----

TEST(Sheets, Cos2HasFourCriticalPointsEverywhere) {
  Tolerances t;
  t.grid_n = 8;
  auto cs = critical_sheets(cos2_family(), t);
  EXPECT_EQ(cs.min_count, 4);
  EXPECT_EQ(cs.max_count, 4);
  for (double r : cs.at(3, 5).roots) EXPECT_NEAR(std::sin(2 * r), 0, 1e-9);
}

TEST(Sheets, XiSquaredHasOneSheet) {
  Tolerances t;
  t.grid_n = 8;
  auto cs = critical_sheets(xi_squared_family(), t);
  EXPECT_EQ(cs.min_count, 1);
  EXPECT_EQ(cs.max_count, 1);
  EXPECT_NEAR(cs.at(0, 0).roots.front(), 0, 1e-10);
}

TEST(Sheets, CollapseSheetCountChangesAcrossTheCaustic) {
  auto cs = critical_sheets(collapse_family(0.1));
  EXPECT_EQ(cs.min_count, 2);
  EXPECT_EQ(cs.max_count, 4);
}

// ---- fold tracing and cusps ----

TEST(Trace, CollapseFoldIsOneClosedCurveWindingOnce) {
  const auto& curves = collapse_extraction().report.curves;
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_TRUE(curves[0].closed);
  EXPECT_EQ(std::abs(curves[0].winding_in_fiber), 1);
}

TEST(Trace, SamplesSatisfyFoldResidualsBelowTolRoot) {
  Tolerances t;
  GenFun f = collapse_family(0.1);
  for (const auto& p : collapse_extraction().report.curves[0].points) {
    auto d = eval_derivatives(f, p[0], p[1], p[2]);
    ASSERT_LE(std::abs(d.xi[1]), t.tol_root);
    ASSERT_LE(std::abs(d.xi[2]), t.tol_root);
  }
}

TEST(Trace, FoldFreeFamilyHasNoSeeds) {
  Tolerances t;
  t.grid_n = 16;
  EXPECT_TRUE(fold_seeds(xi_squared_family(), t).empty());
  EXPECT_TRUE(trace_folds(xi_squared_family(), t).curves.empty());
}

TEST(Cusps, CollapseCuspsAtQuarterTurns) {
  const auto& cusps = collapse_extraction().report.curves[0].cusps;
  ASSERT_EQ(cusps.size(), 4u);
  for (const auto& k : cusps) {
    double best = 1e9;
    for (int i = 0; i < 4; ++i) best = std::min(best, periodic_gap(k.location[2], i * pi / 2));
    EXPECT_LE(best, 1e-6);
    EXPECT_NEAR(std::hypot(k.location[0], k.location[1]), 0.2, 1e-6);
    EXPECT_LE(k.third_residual, Tolerances{}.tol_root);
    EXPECT_GT(std::abs(k.fourth), Tolerances{}.tol_guard);
  }
}

TEST(Cusps, GuardAboveThirdDerivativeAmplitudeIsDegenerate) {
  Tolerances t;
  t.tol_guard = 0.5;
  EXPECT_THROW(extract_chain(collapse_family(0.1), t), DomainError);
}

// ---- embedded class and Sigma^2 ----

TEST(Embedded, CollapseIsEmbedded) {
  auto r = check_embedded(collapse_family(0.1));
  EXPECT_TRUE(r.embedded);
  EXPECT_GT(r.closest, 1e-3);
}

TEST(Embedded, FlatFamilyIsNot) {
  // cos 2 xi does not depend on q, so all critical points share df/dq = 0
  Tolerances t;
  t.grid_n = 8;
  EXPECT_FALSE(check_embedded(cos2_family(), t).embedded);
}

TEST(Sigma2, NoEventBeforeThePassage) {
  auto r = detect_sigma2_events(QuadRot{-0.1});
  EXPECT_FALSE(r.inconclusive);
  EXPECT_TRUE(r.events.empty());
}

TEST(Sigma2, OneEventAtArccotTwoTau) {
  for (double tau : {0.0, 0.05, 0.2}) {
    auto r = detect_sigma2_events(QuadRot{tau});
    ASSERT_EQ(r.events.size(), 1u) << tau;
    EXPECT_NEAR(r.events[0].theta, std::atan2(1.0, 2 * tau), 1e-8);
    EXPECT_NEAR(r.events[0].q[0], 0, 1e-8);
    EXPECT_NEAR(r.events[0].q[1], 0, 1e-8);
  }
}

TEST(Sigma2, RangeOutsideFirstQuadrantRejected) {
  EXPECT_THROW(detect_sigma2_events(QuadRot{0}, {0, 2.0}), DomainError);
}

// ---- chain extraction ----

TEST(Extract, CollapseMatchesCatalog) {
  const auto& x = collapse_extraction();
  EXPECT_TRUE(validate_chain(x.chain).ok());
  EXPECT_TRUE(chains_equivalent(x.chain, catalog::collapse()));
  EXPECT_TRUE(chains_equivalent(x.alpha, catalog::collapse_alpha()));
  EXPECT_EQ(x.report.n1, 2);
  EXPECT_EQ(x.report.n2, 2);
  EXPECT_EQ(euler_value(x.chain), 0);
}

TEST(Extract, FirstCuspSitsAtXiZero) {
  const auto& x = collapse_extraction();
  const auto& c = x.cusp(x.chain.circles[0].cusps[0].id);
  EXPECT_LE(periodic_gap(c.location[2], 0), 1e-6);
  EXPECT_NEAR(c.location[0], 0.2, 1e-6);
}

TEST(Extract, FoldFreeDisk) {
  Tolerances t;
  t.grid_n = 16;
  auto x = extract_chain(xi_squared_family(), t);
  EXPECT_TRUE(x.chain.circles.empty());
  EXPECT_EQ(x.chain.regions.size(), 1u);
  EXPECT_EQ(x.chain.regions[0].side, Side::L1);
}

TEST(Extract, MushroomDoubleFold) {
  auto before = extract_chain(mushroom_family(0));
  auto after = extract_chain(mushroom_family(-0.05));
  EXPECT_TRUE(before.chain.circles.empty());
  ASSERT_EQ(after.chain.circles.size(), 2u);
  EXPECT_EQ(after.report.cusps, 0);
  EXPECT_TRUE(chains_equivalent(after.chain, catalog::double_fold_disk()));
  EXPECT_EQ(euler_value(before.chain), 0);
  EXPECT_EQ(euler_value(after.chain), 0);
}

TEST(Extract, EssentialFoldOnTheCylinder) {
  auto x = extract_chain(morin_family(MorinKind::pair, 0));
  ASSERT_EQ(x.chain.circles.size(), 1u);
  EXPECT_EQ(x.chain.circles[0].cls, Homotopy::essential_a);
  EXPECT_EQ(x.chain.surface, annulus());
  EXPECT_TRUE(x.chain.circles[0].cusps.empty());
}

TEST(Extract, MultiSheetFamilyWithoutChartUnsupported) {
  Tolerances t;
  t.grid_n = 8;
  EXPECT_THROW(extract_chain(cos2_family(), t), UnsupportedError);
}

// ---- caustic diagram ----

TEST(Caustic, CollapseHasFourCuspVertices) {
  auto d = caustic::caustic(collapse_family(0.1));
  EXPECT_EQ(d.cusps.size(), 4u);
  EXPECT_EQ(d.polylines.size(), 4u);
  EXPECT_LT(d.bbox[0], -0.1);
  EXPECT_GT(d.bbox[2], 0.1);
}

TEST(Caustic, EmptyForFoldFreeFamilies) {
  Tolerances t;
  t.grid_n = 16;
  EXPECT_TRUE(caustic::caustic(xi_squared_family(), t).empty());
}

// ---- refinement and realization ----

TEST(Stability, DoublingTheGridKeepsTheFoldSet) {
  Tolerances t, fine;
  fine.grid_n = 2 * t.grid_n;
  GenFun f = collapse_family(0.1);
  auto a = trace_folds(f, t), b = trace_folds(f, fine);
  ASSERT_EQ(a.curves.size(), b.curves.size());
  EXPECT_LT(fold_hausdorff(f, a.curves, b.curves, t), 10 * t.tol_close);
}

TEST(Realization, MorinBirth) {
  auto r = verify_surgery_realization(morin_path(MorinKind::birth), morin_expectation(MorinKind::birth));
  EXPECT_TRUE(r.success) << r.message;
  EXPECT_EQ(r.embedded.size(), 10u);
}

TEST(Realization, MushroomIsADoubleFold) {
  auto r = verify_surgery_realization(mushroom_path(), mushroom_expectation());
  EXPECT_TRUE(r.success) << r.message;
}

TEST(Realization, WrongExpectationReported) {
  // the pair family does not produce lips
  auto r = verify_surgery_realization(morin_path(MorinKind::pair), morin_expectation(MorinKind::birth), {}, 2);
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.chain_ok);
  EXPECT_NE(r.message.find("differs"), std::string::npos);
}
