#include <gtest/gtest.h>

#include "caustic/catalog.hpp"
#include "caustic/complete.hpp"
#include "caustic/planner.hpp"

using namespace caustic;

namespace {

// band through region 0 joining cusps 1 and 3, cut off as a disk
SurgeryBasis collapse_band(Variant v = Variant::chain) { return band_basis(0, 1, 3, disk_split(), v); }

}  // namespace

TEST(CheckBasis, CollapseBandValidForChains) {
  auto rep = check_basis(catalog::collapse(), collapse_band());
  EXPECT_TRUE(rep.ok()) << rep.summary();
}

TEST(CheckBasis, CollapseBandFailsSignExtension) {
  auto rep = check_basis(catalog::collapse_alpha(), collapse_band(Variant::alpha));
  EXPECT_TRUE(rep.has("condition_d")) << rep.summary();
}

TEST(CheckBasis, V2AwayFromBandIsConditionC) {
  auto rep = check_basis(catalog::collapse(), band_basis(0, 0, 2, disk_split()));
  EXPECT_TRUE(rep.has("condition_c")) << rep.summary();
}

TEST(CheckBasis, UnknownSiteIsStructural) {
  EXPECT_THROW(check_basis(catalog::collapse(), band_basis(0, 0, 42, disk_split())), StructuralError);
  EXPECT_THROW(check_basis(catalog::collapse(), birth_basis(17)), StructuralError);
}

TEST(CheckBasis, OnlyThreeKindsExist) {
  SurgeryBasis b = birth_basis(0);
  b.order_s = 2;
  b.index_p = 1;
  EXPECT_TRUE(check_basis(catalog::collapse(), b).has("order_index"));
}

TEST(Direct, BirthOnEmptyDisk) {
  Chain2D c = apply_direct(catalog::fold_free(disk()), birth_basis(0));
  ASSERT_EQ(c.circles.size(), 1u);
  EXPECT_EQ(c.circles[0].cusps.size(), 2u);
  EXPECT_EQ(c.circles[0].cls, Homotopy::null);
  const Region& inner = c.region_at(c.circles[0].other(0));
  EXPECT_EQ(inner.side, Side::L2);
  EXPECT_EQ(inner.euler_char, 1);
  EXPECT_EQ(euler_value(c), 0);
}

TEST(Direct, CollapseBandLeavesTwoCusps) {
  Chain2D c = apply_direct(catalog::collapse(), collapse_band());
  EXPECT_EQ(c.cusp_count(), 2);
  EXPECT_EQ(c.circles.size(), 2u);
  EXPECT_EQ(euler_value(c), 0);
  EXPECT_TRUE(maslov_class(c) == maslov_class(catalog::collapse()));
}

TEST(Direct, PairOnFoldCircle) {
  Chain2D c = apply_direct(catalog::single_fold_circle(), pair_basis(0, 0, 1));
  ASSERT_EQ(c.circles[0].cusps.size(), 2u);
  EXPECT_NE(c.circles[0].cusps[0].v2_into, c.circles[0].cusps[1].v2_into);
  EXPECT_EQ(c.circles[0].cusps[0].v2_into, 1);
  EXPECT_EQ(euler_value(c), euler_value(catalog::single_fold_circle()));
}

TEST(Direct, InvalidBasisThrows) {
  EXPECT_THROW(apply_direct(catalog::collapse_alpha(), collapse_band(Variant::alpha)), PreconditionError);
}

TEST(Inverse, RemovesLips) {
  Chain2D lips = apply_direct(catalog::fold_free(disk()), birth_basis(0));
  Chain2D back = apply_inverse(lips, birth_basis(0));
  EXPECT_TRUE(back.circles.empty());
  EXPECT_TRUE(chains_equivalent(back, catalog::fold_free(disk())));
}

TEST(Inverse, BandRoundTrip) {
  Chain2D c = catalog::collapse();
  SurgeryBasis b = bind_basis(c, collapse_band());
  Chain2D after = apply_direct(c, b);
  EXPECT_TRUE(chains_equivalent(apply_inverse(after, b), c));
}

TEST(Inverse, NoPairToCancel) {
  EXPECT_THROW(apply_inverse(catalog::single_fold_circle(), pair_basis(0, 0, 1)), PreconditionError);
}

TEST(DoubleFold, EmptyDiskBothCombos) {
  for (auto combo : {Coorientation::outward, Coorientation::inward}) {
    Chain2D c = create_double_fold(catalog::fold_free(disk()), 0, combo);
    ASSERT_EQ(c.circles.size(), 2u);
    EXPECT_EQ(c.cusp_count(), 0);
    EXPECT_TRUE(validate_chain(c).ok());
    EXPECT_EQ(euler_value(c), euler_value(catalog::fold_free(disk())));
    EXPECT_TRUE(maslov_class(c).zero());
    const Region* annulus = nullptr;
    for (const auto& r : c.regions)
      if (r.incident_circles.size() == 2) annulus = &r;
    ASSERT_NE(annulus, nullptr);
    bool in0 = c.circles[0].v1_into == annulus->id, in1 = c.circles[1].v1_into == annulus->id;
    EXPECT_EQ(in0, in1);  // both into or both out of the annulus: opposite as seen from the centre
    EXPECT_TRUE(strip_double_folds(c).circles.empty());
  }
}

TEST(DoubleFold, AlphaVariant) {
  AlphaChain2D c = create_double_fold(AlphaChain2D{catalog::fold_free(disk()), {}}, 0);
  EXPECT_EQ(c.chain.circles.size(), 2u);
  EXPECT_TRUE(validate_chain(c).ok());
}

TEST(Witness, PairInverseAfterDoubleFold) {
  // cusp pair 0,1 on the collapse circle cancels only with help from a second circle
  Chain2D c = catalog::collapse();
  SurgeryBasis inv = pair_basis(0, 0, std::nullopt);
  inv.cusp_a = 0;
  inv.cusp_b = 1;
  EXPECT_FALSE(completeness_witness(c, inv).has_value());
  Chain2D d = create_double_fold(c, 0, Coorientation::outward);
  auto w = completeness_witness(d, inv);
  ASSERT_TRUE(w.has_value());
  auto seq = decompose_inverse(d, inv, w);
  EXPECT_LE(seq.size(), 3u);
  for (const auto& st : seq) EXPECT_EQ(st.direction, Direction::direct);
  EXPECT_TRUE(chains_equivalent(apply_sequence(d, seq), apply_inverse(d, inv)));
}

TEST(Witness, MissingWitnessIsPrecondition) {
  SurgeryBasis inv = pair_basis(0, 0, std::nullopt);
  inv.cusp_a = 0;
  inv.cusp_b = 1;
  EXPECT_THROW(decompose_inverse(catalog::collapse(), inv, std::nullopt), PreconditionError);
}

TEST(Witness, BirthInverse) {
  Chain2D base = catalog::single_fold_circle(annulus());
  SurgeryBasis b = bind_basis(base, birth_basis(0, true));
  Chain2D c = apply_direct(base, b);
  auto w = completeness_witness(c, b);
  ASSERT_TRUE(w.has_value());
  auto seq = decompose_inverse(c, b, w);
  EXPECT_TRUE(chains_equivalent(apply_sequence(c, seq), apply_inverse(c, b)));
}

TEST(Witness, BandInverse) {
  Chain2D c = catalog::collapse();
  SurgeryBasis b = bind_basis(c, collapse_band());
  Chain2D after = apply_direct(c, b);
  auto w = completeness_witness(after, b);
  ASSERT_TRUE(w.has_value());
  auto seq = decompose_inverse(after, b, w);
  EXPECT_TRUE(chains_equivalent(apply_sequence(after, seq), c));
}

TEST(Planner, CollapseChainFoldOnly) {
  auto r = plan_surgeries(catalog::collapse(), PlanGoal::fold_only());
  ASSERT_EQ(r.status, PlanStatus::found) << r.message;
  EXPECT_EQ(r.sequence.size(), 2u);
  for (const auto& st : r.sequence) EXPECT_TRUE(st.basis.is_band());
  EXPECT_EQ(apply_sequence(catalog::collapse(), r.sequence).cusp_count(), 0);
}

TEST(Planner, CollapseAlphaFoldOnly) {
  auto r = plan_surgeries(catalog::collapse_alpha(), PlanGoal::fold_only());
  ASSERT_EQ(r.status, PlanStatus::found) << r.message;
  EXPECT_GE(r.sequence.size(), 2u);
  AlphaChain2D cur = catalog::collapse_alpha();
  for (const auto& st : r.sequence) {
    EXPECT_TRUE(check_basis(cur, st.basis).ok());
    cur = apply_direct(cur, st.basis);
  }
  EXPECT_EQ(cur.chain.cusp_count(), 0);
}

TEST(Planner, ConservationMismatchIsImpossible) {
  auto r = plan_surgeries(catalog::collapse(), PlanGoal::to(catalog::single_fold_circle(annulus())));
  EXPECT_EQ(r.status, PlanStatus::impossible);
  EXPECT_NE(r.message.find("conserved invariants differ"), std::string::npos);
}
