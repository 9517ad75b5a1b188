#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "caustic/catalog.hpp"
#include "caustic/io.hpp"

using namespace caustic;

namespace {

std::string tmp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "caustic_io_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

size_t count(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(ChainJson, WriteThenReadCollapse) {
  std::string p = tmp_path("collapse.json");
  write_chain(catalog::collapse(), p);
  ChainDocument d = read_chain(p);
  EXPECT_FALSE(d.is_alpha());
  EXPECT_TRUE(chains_equivalent(d.chain, catalog::collapse()));
}

TEST(ChainJson, ByteStableRoundTrip) {
  for (const auto& a : {catalog::collapse_alpha(), catalog::single_fold_circle_alpha(annulus())}) {
    std::string text = canonical(to_json(a));
    ChainDocument d = parse_chain(text);
    ASSERT_TRUE(d.is_alpha());
    EXPECT_EQ(canonical(to_json(d.alpha())), text);
  }
  std::string text = canonical(to_json(catalog::double_fold_disk()));
  EXPECT_EQ(canonical(to_json(parse_chain(text).chain)), text);
}

TEST(ChainJson, KeysAreSorted) {
  std::string text = canonical(to_json(catalog::collapse()));
  EXPECT_LT(text.find("\"circles\""), text.find("\"regions\""));
  EXPECT_LT(text.find("\"regions\""), text.find("\"schema_version\""));
}

TEST(ChainJson, MissingSideClassIsSchemaError) {
  json j = to_json(catalog::collapse());
  j["regions"][0].erase("side_class");
  EXPECT_THROW(parse_chain(j.dump()), SchemaError);
}

TEST(ChainJson, SeparationViolationRejectedWithReport) {
  json j = to_json(catalog::collapse());
  j["regions"][1]["side_class"] = j["regions"][0]["side_class"];
  try {
    parse_chain(j.dump());
    FAIL() << "document accepted";
  } catch (const InvalidDocumentError& e) {
    EXPECT_TRUE(e.report.has("separation")) << e.report.summary();
  }
}

TEST(ChainJson, VersionMismatchAndMalformedInput) {
  json j = to_json(catalog::collapse());
  j["schema_version"] = schema_version + 1;
  EXPECT_THROW(parse_chain(j.dump()), SchemaError);
  EXPECT_THROW(parse_chain("{\"schema_version\": 1, "), SchemaError);
}

TEST(ChainJson, DanglingIdIsReportedNotThrownRaw) {
  json j = to_json(catalog::collapse());
  j["circles"][0]["v1_into_region"] = 42;
  EXPECT_THROW(parse_chain(j.dump()), InvalidDocumentError);
}

TEST(ChainJson, AlphaDocumentNeedsArcSigns) {
  json j = to_json(catalog::collapse_alpha());
  j["circles"][0].erase("arc_signs");
  EXPECT_THROW(parse_chain(j.dump()), SchemaError);
}

TEST(SurgeryJson, BasisRoundTrip) {
  SplitSpec sp;
  sp.x_euler = 0;
  sp.x_circles = {3};
  sp.x_cls = Homotopy::essential_a;
  sp.x_orientation = -1;
  for (const auto& b : {band_basis(0, 1, 3, sp), birth_basis(2, false), pair_basis(1, 2, 0, Variant::alpha)}) {
    EXPECT_EQ(parse_basis(basis_document(b).dump()), b);
    EXPECT_EQ(parse_basis(to_json(b).dump()), b);
  }
}

TEST(SurgeryJson, BoundBasisKeepsBinding) {
  SurgeryBasis b = bind_basis(catalog::collapse(), band_basis(0, 1, 3, disk_split()));
  ASSERT_TRUE(b.binding.has_value());
  SurgeryBasis back = parse_basis(basis_document(b).dump());
  EXPECT_EQ(back, b);
  Chain2D d = apply_direct(catalog::collapse(), b);
  EXPECT_TRUE(chains_equivalent(apply_inverse(d, back), catalog::collapse()));
}

TEST(SurgeryJson, SequenceRoundTrip) {
  SurgerySequence seq{{birth_basis(0), Direction::direct}, {band_basis(0, 0, 1, disk_split()), Direction::inverse}};
  EXPECT_EQ(parse_sequence(to_json(seq).dump()), seq);
}

TEST(Svg, CollapseChainHasOneCircleFourGlyphsFourArrows) {
  std::string s = chain_svg(catalog::collapse());
  EXPECT_EQ(count(s, "class=\"fold-circle"), 1u);
  EXPECT_EQ(count(s, "<rect class=\"cusp\""), 4u);
  EXPECT_EQ(count(s, "class=\"v2-arrow\""), 4u);
}

TEST(Svg, OneMarkerPerCuspInTheCaustic) {
  CausticDiagram d;
  d.polylines.push_back({{{0, 0}, {1, 0}, {1, 1}}, false, 0, 1});
  d.cusps.push_back({{1, 0}, {0.1, 0}, true, 0});
  d.cusps.push_back({{1, 1}, {0, 0.1}, false, 0});
  d.bbox = {0, 0, 1, 1};
  std::string s = caustic_svg(d);
  EXPECT_EQ(count(s, "<rect class=\"cusp\""), 2u);
  EXPECT_EQ(count(s, "class=\"v2-arrow\""), 2u);
}

TEST(Svg, EmptyDiagramIsAnEmptyCanvas) {
  std::string s = caustic_svg(CausticDiagram{});
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(s, "class=\"cusp\""), 0u);
  EXPECT_EQ(count(s, "<polyline"), 0u);
}

TEST(Svg, TimestampOnlyWhenAsked) {
  SvgOptions on;
  on.timestamp = true;
  EXPECT_EQ(chain_svg(catalog::collapse()), chain_svg(catalog::collapse()));
  EXPECT_NE(chain_svg(catalog::collapse(), on).find("<!-- generated"), std::string::npos);
  EXPECT_EQ(chain_svg(catalog::collapse()).find("<!--"), std::string::npos);
}

TEST(Svg, CoorientationStyles) {
  std::string s = chain_svg(catalog::double_fold_disk());
  EXPECT_EQ(count(s, "v1-out") + count(s, "v1-in"), 2u);
}

TEST(Config, LoadAndRanges) {
  RunConfig c;
  c.load("# comment\ntol_root = 1e-11\ngrid_n=96\nout_dir = out/x\n");
  EXPECT_DOUBLE_EQ(c.tol.tol_root, 1e-11);
  EXPECT_EQ(c.tol.grid_n, 96);
  EXPECT_EQ(c.path("a.json"), "out/x/a.json");
  EXPECT_THROW(c.set("grid_n", "2"), ConfigError);
  EXPECT_THROW(c.set("tol_root", "abc"), ConfigError);
  EXPECT_THROW(c.set("colour", "blue"), ConfigError);
  EXPECT_THROW(c.load("tol_guard\n"), ConfigError);
  // tol_root must stay below tol_guard
  EXPECT_THROW(c.set("tol_guard", "1e-12"), ConfigError);
}

TEST(Config, SeedFromEnvironment) {
  RunConfig c;
  ::setenv("CAUSTIC_FORGE_SEED", "18446744073709551615", 1);
  c.apply_env();
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  ::setenv("CAUSTIC_FORGE_SEED", "-3", 1);
  EXPECT_THROW(c.apply_env(), ConfigError);
  ::unsetenv("CAUSTIC_FORGE_SEED");
}
