#include <gtest/gtest.h>

#include "caustic/catalog.hpp"
#include "caustic/chain.hpp"

using namespace caustic;

TEST(Validate, CollapseChainIsValid) {
  auto rep = validate_chain(catalog::collapse());
  EXPECT_TRUE(rep.ok()) << rep.summary();
  EXPECT_TRUE(validate_chain(catalog::collapse_alpha()).ok());
}

TEST(Validate, SameSideNeighboursViolateSeparation) {
  auto c = catalog::collapse();
  c.regions[1].side = Side::L1;
  auto rep = validate_chain(c);
  EXPECT_TRUE(rep.has("separation")) << rep.summary();
}

TEST(Validate, NonAlternatingSignsRejected) {
  auto a = catalog::collapse_alpha();
  a.arc_signs[0] = {1, 1, -1, -1};
  EXPECT_TRUE(validate_chain(a).has("alternation"));
}

TEST(Validate, OddCuspCountOnAlphaChainRejected) {
  auto a = catalog::collapse_alpha();
  a.chain.circles[0].cusps.pop_back();
  a.arc_signs[0] = {1, -1, 1};
  auto rep = validate_chain(a);
  EXPECT_FALSE(rep.ok());
}

TEST(Validate, V2TargetMustBeAdjacent) {
  auto c = catalog::double_fold_disk();
  c.circles[1].cusps = {{0, 0}, {1, 1}};
  EXPECT_TRUE(validate_chain(c).has("cusp_target"));
}

TEST(Validate, EulerSumChecked) {
  auto c = catalog::collapse();
  c.regions[0].euler_char = 1;
  EXPECT_TRUE(validate_chain(c).has("euler_sum"));
}

TEST(Validate, UnknownIdIsStructural) {
  auto c = catalog::collapse();
  c.circles[0].v1_into = 7;
  EXPECT_THROW(validate_chain(c), StructuralError);
  c = catalog::collapse();
  c.circles[0].cusps[2].v2_into = 9;
  EXPECT_THROW(validate_chain(c), StructuralError);
}

TEST(Euler, PaperValues) {
  EXPECT_EQ(euler_value(catalog::collapse()), 0);
  EXPECT_EQ(euler_value(catalog::fold_free(sphere())), 2);
  Chain2D t = catalog::single_fold_circle(torus());
  EXPECT_EQ(t.regions[0].euler_char, -1);
  EXPECT_EQ(euler_value(t), -2);
}

TEST(Euler, CuspCountsFollowTheL1Convention) {
  auto c = catalog::collapse();
  EXPECT_EQ(cusps_into(c, Side::L1), 2);
  EXPECT_EQ(cusps_into(c, Side::L2), 2);
}

TEST(Maslov, Values) {
  EXPECT_TRUE(maslov_class(catalog::fold_free(disk())).zero());
  EXPECT_TRUE(maslov_class(catalog::double_fold_disk()).zero());
  auto m = maslov_class(catalog::collapse());
  EXPECT_EQ(std::abs(m.coeff[0]), 1);
  EXPECT_EQ(m.coeff[1], 0);
  EXPECT_EQ(m.coeff[2], 0);
  EXPECT_EQ(m.coeff[3], 0);
}

TEST(Realizable, Cases) {
  auto c = catalog::collapse();
  auto r = realizable(c);
  ASSERT_TRUE(r.realizable);
  EXPECT_NE(r.labeling.at(0), r.labeling.at(1));

  Chain2D loop;
  loop.surface = torus();
  loop.regions.push_back({0, 0, Side::L1, 0, {0}});
  FoldCircle f;
  f.id = 0;
  f.regions = {0, 0};
  f.v1_into = 0;
  f.cls = Homotopy::essential_a;
  loop.circles.push_back(f);
  EXPECT_FALSE(realizable(loop).realizable);

  Chain2D tri;
  tri.surface = sphere();
  for (int i = 0; i < 3; ++i) tri.regions.push_back({i, 0, Side::L1, 0, {}});
  for (int i = 0; i < 3; ++i) {
    FoldCircle g;
    g.id = i;
    g.regions = {i, (i + 1) % 3};
    g.v1_into = i;
    tri.circles.push_back(g);
    tri.regions[static_cast<size_t>(i)].incident_circles.push_back(i);
    tri.regions[static_cast<size_t>((i + 1) % 3)].incident_circles.push_back(i);
  }
  EXPECT_FALSE(realizable(tri).realizable);
}

TEST(Equivalence, ReflexiveAndIdInvariant) {
  auto c = catalog::collapse();
  EXPECT_TRUE(chains_equivalent(c, c));
  Chain2D p = c;
  // shifted ids, rotated cusp list
  for (auto& r : p.regions) r.id = 10 + r.id;
  for (auto& f : p.circles) {
    f.id = 5;
    for (auto& x : f.regions) x += 10;
    f.v1_into += 10;
    for (auto& k : f.cusps) {
      k.v2_into += 10;
      k.id += 20;
    }
    std::rotate(f.cusps.begin(), f.cusps.begin() + 2, f.cusps.end());
  }
  for (auto& r : p.regions) r.incident_circles = {5};
  EXPECT_TRUE(chains_equivalent(c, p));
}

TEST(Equivalence, DistinguishesCuspsAndCoorientation) {
  auto c = catalog::collapse();
  Chain2D m = c;
  m.circles[0].cusps.clear();
  EXPECT_FALSE(chains_equivalent(c, m));
  Chain2D flipped = c;
  flipped.circles[0].v1_into = 1;
  EXPECT_FALSE(chains_equivalent(c, flipped));
  EXPECT_THROW(chains_equivalent(c, catalog::fold_free(disk())), DomainError);
}

TEST(AlphaConsistency, Cases) {
  auto a = catalog::collapse_alpha();
  EXPECT_TRUE(alpha_consistency(a, catalog::collapse()));
  auto b = a;
  b.arc_signs[0][1] = 1;
  EXPECT_FALSE(alpha_consistency(b, catalog::collapse()));
  AlphaChain2D ff{catalog::fold_free(disk()), {}};
  EXPECT_TRUE(alpha_consistency(ff, catalog::fold_free(disk())));
  auto otherchain = catalog::fold_free(sphere());
  EXPECT_THROW(alpha_consistency(a, otherchain), DomainError);
}
