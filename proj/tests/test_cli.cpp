#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "caustic/catalog.hpp"
#include "caustic/cli.hpp"
#include "caustic/io.hpp"

using namespace caustic;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("caustic_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  std::string at(const std::string& name) const { return (dir / name).string(); }

  std::filesystem::path dir;
};

size_t count(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_F(Cli, UnknownSubcommandIsUsageError) {
  Outcome r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, BadFlagValuesAreUsageErrors) {
  EXPECT_EQ(run({"analyze", "nosuch"}).code, 2);
  EXPECT_EQ(run({"demo", "nosuch"}).code, 2);
  EXPECT_EQ(run({"analyze", "xi2", "--grid-n", "2"}).code, 2);
  EXPECT_EQ(run({"analyze", "collapse", "--eps", "7"}).code, 2);
}

TEST_F(Cli, AnalyzeCollapseIsDeterministic) {
  Outcome a = run({"analyze", "collapse"});
  Outcome b = run({"analyze", "collapse"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  json j = json::parse(a.out);
  EXPECT_EQ(j["kind"], "analysis");
  EXPECT_EQ(j["report"]["cusps"], 4);
  EXPECT_EQ(j["chain"]["circles"].size(), 1u);
}

TEST_F(Cli, AnalyzeUnsupportedFamilyIsDomainError) {
  Outcome r = run({"analyze", "cos2", "--grid-n", "8"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(Cli, ValidateRoundTrippedChain) {
  write_chain(catalog::collapse(), at("c.json"));
  EXPECT_EQ(run({"validate", at("c.json")}).code, 0);
  ChainDocument d = read_chain(at("c.json"));
  write_chain(d.chain, at("c2.json"));
  EXPECT_EQ(run({"validate", at("c2.json")}).code, 0);
}

TEST_F(Cli, ValidateRejectsBrokenDocuments) {
  json j = to_json(catalog::collapse());
  j["regions"][1]["side_class"] = "L1";
  write_file(at("bad.json"), j.dump());
  Outcome r = run({"validate", at("bad.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("separation"), std::string::npos);
  EXPECT_EQ(run({"validate", at("missing.json")}).code, 1);
}

TEST_F(Cli, SurgeryCheckAndApply) {
  write_chain(catalog::collapse(), at("c.json"));
  write_file(at("band.json"), canonical(basis_document(band_basis(0, 1, 3, disk_split()))));
  write_file(at("bad.json"), canonical(basis_document(band_basis(0, 0, 2, disk_split()))));
  EXPECT_EQ(run({"surgery-check", at("c.json"), at("band.json")}).code, 0);
  Outcome bad = run({"surgery-check", at("c.json"), at("bad.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("condition_c"), std::string::npos);

  Outcome a = run({"surgery-apply", at("c.json"), at("band.json"), "-o", at("after.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  Chain2D after = read_chain(at("after.json")).chain;
  EXPECT_TRUE(chains_equivalent(after, apply_direct(catalog::collapse(), band_basis(0, 1, 3, disk_split()))));
  EXPECT_EQ(run({"surgery-apply", at("c.json"), at("bad.json")}).code, 1);
}

TEST_F(Cli, InverseApplyRestoresTheChain) {
  SurgeryBasis b = bind_basis(catalog::collapse(), band_basis(0, 1, 3, disk_split()));
  write_chain(apply_direct(catalog::collapse(), b), at("after.json"));
  write_file(at("b.json"), canonical(basis_document(b)));
  Outcome r = run({"surgery-apply", at("after.json"), at("b.json"), "--inverse", "-o", at("back.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(chains_equivalent(read_chain(at("back.json")).chain, catalog::collapse()));
}

TEST_F(Cli, PlanFoldOnlyThenApply) {
  write_chain(catalog::collapse(), at("c.json"));
  Outcome p = run({"plan", at("c.json"), "--goal", "fold-only", "-o", at("plan.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  SurgerySequence seq = parse_sequence(read_file(at("plan.json")));
  EXPECT_EQ(seq.size(), 2u);
  Outcome a = run({"surgery-apply", at("c.json"), at("plan.json"), "-o", at("end.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  for (const auto& f : read_chain(at("end.json")).chain.circles) EXPECT_TRUE(f.cusps.empty());
}

TEST_F(Cli, PlanAlphaNeedsAnAlphaDocument) {
  write_chain(catalog::collapse_alpha(), at("a.json"));
  write_chain(catalog::collapse(), at("c.json"));
  EXPECT_EQ(run({"plan", at("a.json"), "--alpha"}).code, 0);
  EXPECT_EQ(run({"plan", at("c.json"), "--alpha"}).code, 1);
}

TEST_F(Cli, PlanWithMismatchedEulerIsImpossible) {
  write_chain(catalog::collapse(), at("c.json"));
  write_chain(catalog::single_fold_circle(), at("t.json"));
  Outcome r = run({"plan", at("c.json"), "--target", at("t.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("conserved invariants differ"), std::string::npos);
}

TEST_F(Cli, ChainSvgHasFourCuspGlyphs) {
  write_chain(catalog::collapse(), at("c.json"));
  ASSERT_EQ(run({"chain-svg", at("c.json"), "-o", at("c.svg")}).code, 0);
  std::string s = read_file(at("c.svg"));
  EXPECT_EQ(count(s, "<rect class=\"cusp\""), 4u);
  EXPECT_EQ(count(s, "class=\"v2-arrow\""), 4u);
  EXPECT_EQ(count(s, "class=\"fold-circle"), 1u);
}

TEST_F(Cli, CausticSvgOfCollapse) {
  ASSERT_EQ(run({"caustic", "collapse", "-o", at("k.svg")}).code, 0);
  std::string s = read_file(at("k.svg"));
  EXPECT_EQ(count(s, "<rect class=\"cusp\""), 4u);
  EXPECT_EQ(s.find("<!--"), std::string::npos);
  ASSERT_EQ(run({"caustic", "xi2", "--grid-n", "16", "-o", at("e.svg")}).code, 0);
  EXPECT_NE(read_file(at("e.svg")).find("</svg>"), std::string::npos);
}

TEST_F(Cli, ConfigFileAndFlagsPrecedence) {
  write_file(at("cfg.txt"), "grid_n = 40\nout_dir = " + at("out") + "\n");
  ASSERT_EQ(run({"--config", at("cfg.txt"), "caustic", "collapse"}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "caustic.svg"));
  write_file(at("bad.txt"), "grid_n = 1\n");
  EXPECT_EQ(run({"--config", at("bad.txt"), "caustic", "collapse"}).code, 2);
  // flags after the subcommand win over the file
  ASSERT_EQ(run({"caustic", "collapse", "--config", at("cfg.txt"), "--out-dir", at("flag")}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "flag" / "caustic.svg"));
}

TEST_F(Cli, DemoCollapseReport) {
  Outcome r = run({"demo", "collapse", "--out-dir", at("demo")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("4 cusps found"), std::string::npos);
  EXPECT_NE(r.out.find("chain plan: found, length 2"), std::string::npos);
  EXPECT_NE(r.out.find("alpha plan: found"), std::string::npos);
  EXPECT_NE(r.out.find("final: fold-only"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "demo" / "collapse_chain.json"));
  EXPECT_EQ(run({"validate", at("demo/collapse_chain.json")}).code, 0);
  EXPECT_EQ(run({"validate", at("demo/collapse_alpha.json")}).code, 0);
}

TEST_F(Cli, DemoQuadrotAndMushroom) {
  Outcome q = run({"demo", "quadrot"});
  EXPECT_EQ(q.code, 0) << q.err;
  EXPECT_NE(q.out.find("tau=-0.1: 0 event"), std::string::npos);
  EXPECT_NE(q.out.find("tau=0.05: 1 event"), std::string::npos);
  Outcome m = run({"demo", "mushroom"});
  EXPECT_EQ(m.code, 0) << m.err;
  EXPECT_NE(m.out.find("2 fold circles, 0 cusps"), std::string::npos);
}

TEST_F(Cli, DemoMorin) {
  Outcome r = run({"demo", "morin"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count(r.out, "realized"), 3u);
}

TEST_F(Cli, VerifyFlagsSkippedStabilityAndDegenerateGuard) {
  Outcome a = run({"verify", "--grid-n", "8", "--json", at("v.json")});
  EXPECT_NE(a.out.find("[SKIP] 9 grid_stability: skipped-below-minimum"), std::string::npos) << a.out;
  json j = json::parse(read_file(at("v.json")));
  EXPECT_EQ(j["criteria"][8]["status"], "skipped");

  Outcome b = run({"verify", "--tol-guard", "0.5"});
  EXPECT_EQ(b.code, 1);
  EXPECT_NE(b.out.find("[FAIL] 1 collapse_cusp_count"), std::string::npos) << b.out;
}
