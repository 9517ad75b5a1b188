#include <gtest/gtest.h>

#include <algorithm>

#include "caustic/planner.hpp"
#include "caustic/property.hpp"

using namespace caustic;

namespace {

constexpr int cases = 200;

std::uint64_t seed() { return property_seed(); }

void expect_suite(const PropertyResult& r) {
  EXPECT_GE(r.cases, r.min_cases) << r.name << " seed " << r.seed;
  EXPECT_EQ(r.failures, 0) << r.name << " seed " << r.seed << ": " << r.first_failure;
  ::testing::Test::RecordProperty(r.name + "_cases", r.cases);
}

// Fresh ids, shuffled storage order and rotated cusp lists.
AlphaChain2D relabel(const AlphaChain2D& a, Rng& rng) {
  const Chain2D& c = a.chain;
  std::map<int, int> rmap, cmap, kmap;
  auto fresh = [&](std::map<int, int>& m, const std::vector<int>& ids) {
    std::vector<int> to(ids.size());
    for (size_t i = 0; i < to.size(); ++i) to[i] = 100 + 7 * static_cast<int>(i);
    std::shuffle(to.begin(), to.end(), rng.g);
    for (size_t i = 0; i < ids.size(); ++i) m[ids[i]] = to[i];
  };
  std::vector<int> rs, cs, ks;
  for (const auto& r : c.regions) rs.push_back(r.id);
  for (const auto& f : c.circles) {
    cs.push_back(f.id);
    for (const auto& k : f.cusps) ks.push_back(k.id);
  }
  fresh(rmap, rs);
  fresh(cmap, cs);
  fresh(kmap, ks);
  AlphaChain2D out;
  out.chain.surface = c.surface;
  for (auto r : c.regions) {
    r.id = rmap[r.id];
    for (int& i : r.incident_circles) i = cmap[i];
    std::shuffle(r.incident_circles.begin(), r.incident_circles.end(), rng.g);
    out.chain.regions.push_back(r);
  }
  for (auto f : c.circles) {
    std::vector<int> sg;
    if (a.arc_signs.count(f.id)) sg = a.arc_signs.at(f.id);
    if (!f.cusps.empty()) {
      int k = rng.uniform(0, static_cast<int>(f.cusps.size()) - 1);
      std::rotate(f.cusps.begin(), f.cusps.begin() + k, f.cusps.end());
      if (sg.size() == f.cusps.size()) std::rotate(sg.begin(), sg.begin() + k, sg.end());
    }
    int old = f.id;
    f.id = cmap[old];
    for (int& r : f.regions) r = rmap[r];
    f.v1_into = rmap[f.v1_into];
    for (auto& k : f.cusps) {
      k.id = kmap[k.id];
      k.v2_into = rmap[k.v2_into];
    }
    if (a.arc_signs.count(old)) out.arc_signs[f.id] = sg;
    out.chain.circles.push_back(f);
  }
  std::shuffle(out.chain.regions.begin(), out.chain.regions.end(), rng.g);
  std::shuffle(out.chain.circles.begin(), out.chain.circles.end(), rng.g);
  return out;
}

Chain2D relabel(const Chain2D& c, Rng& rng) { return relabel(AlphaChain2D{c, {}}, rng).chain; }

int cusp_total(const Chain2D& c) {
  int n = 0;
  for (const auto& f : c.circles) n += static_cast<int>(f.cusps.size());
  return n;
}

}  // namespace

// ---- the five acceptance suites ----

TEST(Properties, RoundTripInverseAfterDirect) { expect_suite(prop_round_trip(seed(), cases)); }

TEST(Properties, EulerAndMaslovConserved) { expect_suite(prop_conservation(seed(), cases)); }

TEST(Properties, DecompositionMatchesInverse) { expect_suite(prop_decompose(seed(), cases)); }

TEST(Properties, ExtractedChainsValidate) { expect_suite(prop_extract_valid(seed(), cases)); }

TEST(Properties, DerivativesMatchDifferences) {
  auto r = prop_derivatives(seed(), 1000);
  expect_suite(r);
  EXPECT_EQ(r.cases, 1000 * static_cast<int>(builtin_families().size()));
}

// ---- chain-core invariants ----

TEST(Properties, GeneratedChainsSatisfyTypeInvariants) {
  Rng rng(seed() + 1);
  auto bases = base_chains();
  auto abases = base_alpha_chains();
  for (int i = 0; i < cases; ++i) {
    Chain2D c = random_chain(rng, bases);
    ASSERT_TRUE(validate_chain(c).ok());
    int sum = 0;
    for (const auto& r : c.regions) sum += r.euler_char;
    EXPECT_EQ(sum, c.surface.euler());
    for (const auto& f : c.circles) {
      EXPECT_NE(c.region_at(f.regions[0]).side, c.region_at(f.regions[1]).side);
      for (const auto& k : f.cusps) EXPECT_TRUE(f.adjacent(k.v2_into));
    }
    AlphaChain2D a = random_chain(rng, abases);
    ASSERT_TRUE(validate_chain(a).ok());
    for (const auto& f : a.chain.circles) {
      EXPECT_EQ(f.cusps.size() % 2, 0u);
      const auto& s = a.arc_signs.at(f.id);
      for (size_t k = 0; k + 1 < s.size(); ++k) EXPECT_EQ(s[k], -s[k + 1]);
    }
  }
}

TEST(Properties, EquivalenceIsAnEquivalenceRelation) {
  Rng rng(seed() + 2);
  auto bases = base_chains();
  auto abases = base_alpha_chains();
  for (int i = 0; i < cases; ++i) {
    Chain2D a = random_chain(rng, bases);
    Chain2D b = relabel(a, rng), c = relabel(b, rng);
    ASSERT_TRUE(chains_equivalent(a, a));
    ASSERT_TRUE(chains_equivalent(a, b));
    ASSERT_TRUE(chains_equivalent(b, a));
    ASSERT_TRUE(chains_equivalent(b, c));
    ASSERT_TRUE(chains_equivalent(a, c));
    EXPECT_EQ(euler_value(a), euler_value(b));
    EXPECT_TRUE(maslov_class(a) == maslov_class(b));

    Chain2D other = random_chain(rng, bases);
    while (!(other.surface == a.surface)) other = random_chain(rng, bases);
    bool ab = chains_equivalent(a, other);
    EXPECT_EQ(ab, chains_equivalent(other, a));
    EXPECT_EQ(ab, chains_equivalent(b, other));
    if (ab) {
      EXPECT_EQ(euler_value(a), euler_value(other));
      EXPECT_TRUE(maslov_class(a) == maslov_class(other));
    }

    AlphaChain2D x = random_chain(rng, abases);
    AlphaChain2D y = relabel(x, rng);
    ASSERT_TRUE(validate_chain(y).ok());
    ASSERT_TRUE(chains_equivalent(x, y));
    ASSERT_TRUE(chains_equivalent(y, x));
  }
}

TEST(Properties, RealizableMatchesBruteForceColouring) {
  Rng rng(seed() + 3);
  for (int i = 0; i < cases; ++i) {
    int n = rng.uniform(1, 12);
    Chain2D c;
    c.surface = sphere();
    for (int r = 0; r < n; ++r) c.regions.push_back({r, 0, Side::L1, 0, {}});
    int m = rng.uniform(0, n + 3);
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < m; ++e) {
      int a = rng.uniform(0, n - 1), b = rng.uniform(0, n - 1);
      FoldCircle f;
      f.id = e;
      f.regions = {a, b};
      f.v1_into = a;
      c.circles.push_back(f);
      c.regions[static_cast<size_t>(a)].incident_circles.push_back(e);
      if (b != a) c.regions[static_cast<size_t>(b)].incident_circles.push_back(e);
      edges.emplace_back(a, b);
    }
    bool brute = false;
    for (unsigned mask = 0; mask < (1u << n) && !brute; ++mask) {
      bool ok = true;
      for (auto [a, b] : edges) ok = ok && (((mask >> a) & 1u) != ((mask >> b) & 1u));
      brute = ok;
    }
    Realizability r = realizable(c);
    ASSERT_EQ(r.realizable, brute) << "case " << i;
    if (r.realizable)
      for (auto [a, b] : edges) EXPECT_NE(r.labeling.at(a), r.labeling.at(b));
  }
}

TEST(Properties, DirectOutputsValidateForEveryMove) {
  Rng rng(seed() + 4);
  auto bases = base_chains();
  auto abases = base_alpha_chains();
  int checked = 0;
  for (int i = 0; i < cases; ++i) {
    Chain2D c = random_chain(rng, bases);
    for (const auto& m : direct_moves(c)) {
      ++checked;
      ASSERT_TRUE(validate_chain(m.result).ok());
      ASSERT_TRUE(check_basis(c, m.steps.front().basis).ok());
    }
    AlphaChain2D a = random_chain(rng, abases);
    for (const auto& m : direct_moves(a)) {
      ++checked;
      ASSERT_TRUE(validate_chain(m.result).ok());
    }
  }
  EXPECT_GE(checked, cases);
}

TEST(Properties, PlannerStepsAreValidAndReachTheGoal) {
  Rng rng(seed() + 5);
  auto bases = base_chains();
  int found = 0;
  for (int i = 0; i < cases; ++i) {
    Chain2D c = random_chain(rng, bases, 2);
    if (cusp_total(c) > 4) continue;
    PlanResult p = plan_surgeries(c, PlanGoal::fold_only(), 4);
    if (p.status != PlanStatus::found) continue;
    ++found;
    Chain2D cur = c;
    for (const auto& st : p.sequence) {
      ASSERT_TRUE(check_basis(cur, st.basis).ok());
      cur = apply_direct(cur, st.basis);
    }
    EXPECT_EQ(cusp_total(cur), 0);
  }
  EXPECT_GT(found, cases / 4);
}
