#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "caustic/extract.hpp"
#include "caustic/planner.hpp"
#include "caustic/realization.hpp"

namespace caustic {

using json = nlohmann::json;
using detail::SignMap;

inline constexpr int schema_version = 1;

struct SchemaError : DomainError {
  using DomainError::DomainError;
};

// A well-formed document whose chain breaks an invariant.
struct InvalidDocumentError : DomainError {
  ValidationReport report;
  InvalidDocumentError(const std::string& what, ValidationReport r)
      : DomainError(what + ": " + r.summary()), report(std::move(r)) {}
};

namespace detail {

template <class T>
T field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field ") + key + " in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field ") + key + " in " + where + " has the wrong type");
  }
}

inline Homotopy homotopy_from(const std::string& s) {
  for (Homotopy h : {Homotopy::null, Homotopy::essential_a, Homotopy::essential_b, Homotopy::boundary_parallel_1,
                     Homotopy::boundary_parallel_2})
    if (s == to_string(h)) return h;
  throw SchemaError("unknown homotopy_class " + s);
}

inline Side side_from(const std::string& s) {
  if (s == "L1") return Side::L1;
  if (s == "L2") return Side::L2;
  throw SchemaError("unknown side_class " + s);
}

inline void check_version(const json& j) {
  int v = field<int>(j, "schema_version", "document");
  if (v != schema_version)
    throw SchemaError("schema_version " + std::to_string(v) + " is not supported (expected " +
                      std::to_string(schema_version) + ")");
}

}  // namespace detail

// ---- chains ----

inline json to_json(const Surface& s) {
  return {{"genus", s.genus}, {"boundary_count", s.boundary_count}, {"orientable", s.orientable}};
}

inline json to_json(const Region& r) {
  return {{"id", r.id},
          {"euler_char", r.euler_char},
          {"side_class", to_string(r.side)},
          {"boundary_components", r.boundary_components},
          {"incident_circle_ids", r.incident_circles}};
}

inline json to_json(const FoldCircle& f, const std::vector<int>* signs = nullptr) {
  json cusps = json::array();
  for (size_t i = 0; i < f.cusps.size(); ++i)
    cusps.push_back({{"id", f.cusps[i].id}, {"v2_into_region", f.cusps[i].v2_into}, {"position_index", i}});
  json j = {{"id", f.id},
            {"adjacent_regions", f.regions},
            {"v1_into_region", f.v1_into},
            {"homotopy_class", to_string(f.cls)},
            {"orientation", f.orientation},
            {"cusps", cusps}};
  if (signs) j["arc_signs"] = *signs;
  return j;
}

inline json chain_body(const Chain2D& c, const SignMap* signs) {
  json regions = json::array(), circles = json::array();
  for (const auto& r : c.regions) regions.push_back(to_json(r));
  for (const auto& f : c.circles) {
    const std::vector<int>* s = nullptr;
    if (signs) {
      auto it = signs->find(f.id);
      if (it != signs->end()) s = &it->second;
    }
    circles.push_back(to_json(f, s));
  }
  return {{"surface", to_json(c.surface)}, {"regions", regions}, {"circles", circles}};
}

inline json to_json(const Chain2D& c) {
  json j = chain_body(c, nullptr);
  j["schema_version"] = schema_version;
  j["kind"] = "chain";
  return j;
}

inline json to_json(const AlphaChain2D& a) {
  json j = chain_body(a.chain, &a.arc_signs);
  j["schema_version"] = schema_version;
  j["kind"] = "alpha_chain";
  return j;
}

inline Region region_from(const json& j) {
  Region r;
  r.id = detail::field<int>(j, "id", "region");
  r.euler_char = detail::field<int>(j, "euler_char", "region");
  r.side = detail::side_from(detail::field<std::string>(j, "side_class", "region"));
  r.boundary_components = j.contains("boundary_components") ? detail::field<int>(j, "boundary_components", "region") : 0;
  r.incident_circles = detail::field<std::vector<int>>(j, "incident_circle_ids", "region");
  return r;
}

inline FoldCircle circle_from(const json& j, std::vector<int>* signs = nullptr, bool* has_signs = nullptr) {
  FoldCircle f;
  f.id = detail::field<int>(j, "id", "circle");
  auto adj = detail::field<std::vector<int>>(j, "adjacent_regions", "circle");
  if (adj.size() != 2) throw SchemaError("adjacent_regions must list two region ids");
  f.regions = {adj[0], adj[1]};
  f.v1_into = detail::field<int>(j, "v1_into_region", "circle");
  f.cls = detail::homotopy_from(detail::field<std::string>(j, "homotopy_class", "circle"));
  f.orientation = j.contains("orientation") ? detail::field<int>(j, "orientation", "circle") : 1;
  json cusps = detail::field<json>(j, "cusps", "circle");
  if (!cusps.is_array()) throw SchemaError("cusps must be an array");
  std::vector<std::pair<int, Cusp>> ordered;
  for (const auto& k : cusps) {
    Cusp c{detail::field<int>(k, "id", "cusp"), detail::field<int>(k, "v2_into_region", "cusp")};
    int pos = k.contains("position_index") ? detail::field<int>(k, "position_index", "cusp")
                                           : static_cast<int>(ordered.size());
    ordered.emplace_back(pos, c);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (size_t i = 0; i < ordered.size(); ++i) {
    if (ordered[i].first != static_cast<int>(i)) throw SchemaError("cusp position_index values are not 0..n-1");
    f.cusps.push_back(ordered[i].second);
  }
  if (has_signs) *has_signs = j.contains("arc_signs");
  if (signs && j.contains("arc_signs")) *signs = detail::field<std::vector<int>>(j, "arc_signs", "circle");
  return f;
}

struct ChainDocument {
  Chain2D chain;
  std::optional<SignMap> arc_signs;

  bool is_alpha() const { return arc_signs.has_value(); }
  AlphaChain2D alpha() const {
    if (!arc_signs) throw DomainError("document holds a chain, not an alpha-chain");
    return {chain, *arc_signs};
  }
};

// Parses without validating.
inline ChainDocument chain_document_from(const json& j) {
  detail::check_version(j);
  ChainDocument d;
  json s = detail::field<json>(j, "surface", "document");
  d.chain.surface.genus = detail::field<int>(s, "genus", "surface");
  d.chain.surface.boundary_count = detail::field<int>(s, "boundary_count", "surface");
  d.chain.surface.orientable = s.contains("orientable") ? detail::field<bool>(s, "orientable", "surface") : true;
  for (const auto& r : detail::field<json>(j, "regions", "document")) d.chain.regions.push_back(region_from(r));
  std::string kind = j.contains("kind") ? detail::field<std::string>(j, "kind", "document") : "chain";
  if (kind != "chain" && kind != "alpha_chain") throw SchemaError("unknown document kind " + kind);
  bool alpha = kind == "alpha_chain";
  if (alpha) d.arc_signs = SignMap{};
  for (const auto& c : detail::field<json>(j, "circles", "document")) {
    std::vector<int> sg;
    bool has = false;
    d.chain.circles.push_back(circle_from(c, &sg, &has));
    if (alpha) {
      if (!has) throw SchemaError("missing field arc_signs in circle of an alpha_chain");
      (*d.arc_signs)[d.chain.circles.back().id] = sg;
    }
  }
  return d;
}

inline ChainDocument parse_chain(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  ChainDocument d = chain_document_from(j);
  try {
    ValidationReport rep = d.is_alpha() ? validate_chain(d.alpha()) : validate_chain(d.chain);
    if (!rep.ok()) throw InvalidDocumentError("chain document violates invariants", rep);
  } catch (const StructuralError& e) {
    ValidationReport rep;
    rep.add("structure", "document", e.what());
    throw InvalidDocumentError("chain document is not well formed", rep);
  }
  return d;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
  if (!out) throw DomainError("cannot write " + path);
}

inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline ChainDocument read_chain(const std::string& path) { return parse_chain(read_file(path)); }
inline void write_chain(const Chain2D& c, const std::string& path) { write_file(path, canonical(to_json(c))); }
inline void write_chain(const AlphaChain2D& c, const std::string& path) { write_file(path, canonical(to_json(c))); }

// ---- surgeries ----

inline json to_json(const SplitSpec& s) {
  return {{"kind", s.kind == SplitKind::separating ? "separating" : "nonseparating"},
          {"x_euler", s.x_euler},
          {"x_circles", s.x_circles},
          {"x_boundary", s.x_boundary},
          {"x_class", to_string(s.x_cls)},
          {"x_orientation", s.x_orientation}};
}

inline SplitSpec split_from(const json& j) {
  SplitSpec s;
  std::string k = detail::field<std::string>(j, "kind", "split");
  if (k != "separating" && k != "nonseparating") throw SchemaError("unknown split kind " + k);
  s.kind = k == "separating" ? SplitKind::separating : SplitKind::nonseparating;
  s.x_euler = detail::field<int>(j, "x_euler", "split");
  s.x_circles = detail::field<std::vector<int>>(j, "x_circles", "split");
  s.x_boundary = detail::field<int>(j, "x_boundary", "split");
  s.x_cls = detail::homotopy_from(detail::field<std::string>(j, "x_class", "split"));
  s.x_orientation = detail::field<int>(j, "x_orientation", "split");
  return s;
}

inline json to_json(const Patch& p) {
  json regions = json::array(), circles = json::array();
  for (const auto& r : p.regions) regions.push_back(to_json(r));
  for (const auto& f : p.circles) {
    auto it = p.arc_signs.find(f.id);
    circles.push_back(to_json(f, it == p.arc_signs.end() ? nullptr : &it->second));
  }
  return {{"regions", regions}, {"circles", circles}};
}

inline Patch patch_from(const json& j) {
  Patch p;
  for (const auto& r : detail::field<json>(j, "regions", "patch")) p.regions.push_back(region_from(r));
  for (const auto& c : detail::field<json>(j, "circles", "patch")) {
    std::vector<int> sg;
    bool has = false;
    p.circles.push_back(circle_from(c, &sg, &has));
    if (has) p.arc_signs[p.circles.back().id] = sg;
  }
  return p;
}

inline json to_json(const SurgeryBasis& b) {
  json j = {{"order_s", b.order_s},
            {"index_p", b.index_p},
            {"variant", to_string(b.variant)},
            {"region", b.region},
            {"circle", b.circle},
            {"arc_position", b.arc_position},
            {"cusp_a", b.cusp_a},
            {"cusp_b", b.cusp_b}};
  if (b.split) j["split"] = to_json(*b.split);
  if (b.v1_outward) j["v1_outward"] = *b.v1_outward;
  if (b.first_v2_into) j["first_v2_into"] = *b.first_v2_into;
  if (b.binding) j["binding"] = {{"pre", to_json(b.binding->pre)}, {"post", to_json(b.binding->post)}};
  return j;
}

inline SurgeryBasis basis_from(const json& j) {
  SurgeryBasis b;
  b.order_s = detail::field<int>(j, "order_s", "basis");
  b.index_p = detail::field<int>(j, "index_p", "basis");
  std::string v = j.contains("variant") ? detail::field<std::string>(j, "variant", "basis") : "chain";
  if (v != "chain" && v != "alpha") throw SchemaError("unknown variant " + v);
  b.variant = v == "chain" ? Variant::chain : Variant::alpha;
  auto opt_int = [&](const char* k, int dflt) { return j.contains(k) ? detail::field<int>(j, k, "basis") : dflt; };
  b.region = opt_int("region", -1);
  b.circle = opt_int("circle", -1);
  b.arc_position = opt_int("arc_position", 0);
  b.cusp_a = opt_int("cusp_a", -1);
  b.cusp_b = opt_int("cusp_b", -1);
  if (j.contains("split") && !j["split"].is_null()) b.split = split_from(j["split"]);
  if (j.contains("v1_outward") && !j["v1_outward"].is_null()) b.v1_outward = detail::field<bool>(j, "v1_outward", "basis");
  if (j.contains("first_v2_into") && !j["first_v2_into"].is_null())
    b.first_v2_into = detail::field<int>(j, "first_v2_into", "basis");
  if (j.contains("binding") && !j["binding"].is_null()) {
    json bd = j["binding"];
    b.binding = Binding{patch_from(detail::field<json>(bd, "pre", "binding")),
                        patch_from(detail::field<json>(bd, "post", "binding"))};
  }
  return b;
}

inline json basis_document(const SurgeryBasis& b) {
  return {{"schema_version", schema_version}, {"kind", "surgery_basis"}, {"basis", to_json(b)}};
}

inline json to_json(const SurgerySequence& seq) {
  json steps = json::array();
  for (const auto& s : seq) steps.push_back({{"direction", to_string(s.direction)}, {"basis", to_json(s.basis)}});
  return {{"schema_version", schema_version}, {"kind", "surgery_sequence"}, {"steps", steps}};
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

// A document holding one basis, either bare or wrapped with schema_version.
inline SurgeryBasis parse_basis(const std::string& text) {
  json j = parse_json(text);
  if (j.contains("kind") && j["kind"] == "surgery_basis") {
    detail::check_version(j);
    return basis_from(detail::field<json>(j, "basis", "document"));
  }
  return basis_from(j);
}

inline SurgerySequence parse_sequence(const std::string& text) {
  json j = parse_json(text);
  detail::check_version(j);
  SurgerySequence seq;
  for (const auto& s : detail::field<json>(j, "steps", "document")) {
    std::string d = detail::field<std::string>(s, "direction", "step");
    if (d != "direct" && d != "inverse") throw SchemaError("unknown direction " + d);
    seq.push_back({basis_from(detail::field<json>(s, "basis", "step")), d == "direct" ? Direction::direct : Direction::inverse});
  }
  return seq;
}

inline json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"code", x.code}, {"element", x.element}, {"detail", x.detail}});
  return {{"ok", r.ok()}, {"violations", v}};
}

inline json to_json(const PlanResult& r) {
  json j = to_json(r.sequence);
  j["kind"] = "plan";
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  return j;
}

// ---- numerics ----

inline json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
inline json to_json(const Vec2& v) { return json::array({v[0], v[1]}); }

inline json to_json(const Tolerances& t) {
  return {{"tol_root", t.tol_root}, {"tol_guard", t.tol_guard}, {"tol_close", t.tol_close},
          {"grid_n", t.grid_n},     {"step_min", t.step_min},   {"step_max", t.step_max}};
}

inline json to_json(const CuspPoint& c) {
  return {{"location", to_json(c.location)},
          {"v2_direction", to_json(c.v2_direction)},
          {"fourth_deriv_sign", c.fourth_deriv_sign},
          {"v2_into_L1", c.v2_into_L1}};
}

inline json to_json(const FoldCurve& c, bool with_points = true) {
  json cusps = json::array();
  for (const auto& k : c.cusps) cusps.push_back(to_json(k));
  json j = {{"closed", c.closed},
            {"winding_in_fiber", c.winding_in_fiber},
            {"winding_q1", c.winding_q1},
            {"length", c.length},
            {"samples", c.points.size()},
            {"cusps", cusps},
            {"warnings", c.warnings}};
  if (with_points) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(to_json(p));
    j["points"] = pts;
  }
  return j;
}

// Timings are left out so repeated runs produce identical bytes.
inline json to_json(const NumericReport& r, bool with_points = true) {
  json curves = json::array();
  for (const auto& c : r.curves) curves.push_back(to_json(c, with_points));
  return {{"family", r.family},     {"tolerances", to_json(r.tol)}, {"surface", r.surface},
          {"curves", curves},       {"warnings", r.warnings},       {"seed_cells", r.seed_cells},
          {"regions", r.regions},   {"circles", r.circles},         {"cusps", r.cusps},
          {"n1", r.n1},             {"n2", r.n2}};
}

inline json to_json(const Extraction& x, bool with_points = true) {
  return {{"schema_version", schema_version},
          {"kind", "analysis"},
          {"chain", to_json(x.chain)},
          {"alpha_chain", to_json(x.alpha)},
          {"report", to_json(x.report, with_points)}};
}

inline json to_json(const RealizationReport& r) {
  return {{"label", r.label},
          {"success", r.success},
          {"inconclusive", r.inconclusive},
          {"chain_ok", r.chain_ok},
          {"alpha_ok", r.alpha_ok},
          {"embedded_ok", r.embedded_ok},
          {"tau", r.tau},
          {"embedded", r.embedded},
          {"message", r.message}};
}

inline json to_json(const Sigma2Report& r) {
  json ev = json::array();
  for (const auto& e : r.events) ev.push_back({{"theta", e.theta}, {"q", to_json(e.q)}});
  return {{"events", ev}, {"inconclusive", r.inconclusive}, {"message", r.message}};
}

// ---- SVG ----

struct SvgOptions {
  bool timestamp = false;
  double width = 480;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

struct SvgFrame {
  double x0, y0, s, h;  // data -> pixels, y flipped
  double px(double x) const { return (x - x0) * s + 20; }
  double py(double y) const { return h - ((y - y0) * s + 20); }
};

inline std::string svg_open(double w, double h, const SvgOptions& opt) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (opt.timestamp) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    s += "<!-- generated " + std::to_string(static_cast<long long>(now)) + " -->\n";
  }
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " +
       num(w) + " " + num(h) + "\">\n";
  s += "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\">"
       "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#333333\"/></marker></defs>\n";
  return s;
}

inline std::string cusp_glyph(double x, double y, double ax, double ay, const std::string& color) {
  std::string s;
  s += "<rect class=\"cusp\" x=\"" + num(x - 3) + "\" y=\"" + num(y - 3) + "\" width=\"6\" height=\"6\" fill=\"" +
       color + "\" transform=\"rotate(45 " + num(x) + " " + num(y) + ")\"/>\n";
  s += "<line class=\"v2-arrow\" x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(ax) + "\" y2=\"" + num(ay) +
       "\" stroke=\"#333333\" stroke-width=\"1.2\" marker-end=\"url(#head)\"/>\n";
  return s;
}

}  // namespace detail

inline std::string caustic_svg(const CausticDiagram& d, const SvgOptions& opt = {}) {
  double W = opt.width;
  if (d.empty()) return detail::svg_open(W, W, opt) + "</svg>\n";
  double dx = std::max(d.bbox[2] - d.bbox[0], 1e-9), dy = std::max(d.bbox[3] - d.bbox[1], 1e-9);
  double s = (W - 40) / std::max(dx, dy);
  double H = dy * s + 40;
  detail::SvgFrame fr{d.bbox[0], d.bbox[1], s, H};
  std::string out = detail::svg_open(W, H, opt);
  for (const auto& pl : d.polylines) {
    std::string pts;
    for (const auto& p : pl.points) pts += detail::num(fr.px(p[0])) + "," + detail::num(fr.py(p[1])) + " ";
    if (!pts.empty()) pts.pop_back();
    const char* tag = pl.closed ? "polygon" : "polyline";
    out += std::string("<") + tag + " class=\"fold " + (pl.f3_sign >= 0 ? "fold-pos" : "fold-neg") + "\" points=\"" +
           pts + "\" fill=\"none\" stroke=\"" + d.style.at("fold") + "\" stroke-width=\"1.5\"" +
           (pl.f3_sign < 0 ? " stroke-dasharray=\"4 2\"" : "") + "/>\n";
  }
  double L = 0.06 * (W - 40);
  for (const auto& c : d.cusps) {
    double x = fr.px(c.at[0]), y = fr.py(c.at[1]);
    out += detail::cusp_glyph(x, y, x + L * c.arrow[0], y - L * c.arrow[1], d.style.at("cusp"));
  }
  return out + "</svg>\n";
}

// Schematic picture of a chain: each circle drawn round, cusps spaced evenly in cyclic order,
// v2 arrows pointing outward when they enter the first adjacent region.
inline std::string chain_svg(const Chain2D& c, const SvgOptions& opt = {}) {
  const double R = 60, pitch = 3 * R;
  double W = std::max(opt.width, pitch * std::max<size_t>(1, c.circles.size()) + 40), H = pitch + 40;
  std::string out = detail::svg_open(W, H, opt);
  for (size_t i = 0; i < c.circles.size(); ++i) {
    const FoldCircle& f = c.circles[i];
    double cx = 20 + pitch * (i + 0.5), cy = H / 2;
    bool v1_out = f.v1_into == f.regions[0];
    out += "<path class=\"fold-circle " + std::string(v1_out ? "v1-out" : "v1-in") + "\" d=\"M " +
           detail::num(cx + R) + " " + detail::num(cy) + " A " + detail::num(R) + " " + detail::num(R) + " 0 1 0 " +
           detail::num(cx - R) + " " + detail::num(cy) + " A " + detail::num(R) + " " + detail::num(R) + " 0 1 0 " +
           detail::num(cx + R) + " " + detail::num(cy) + "\" fill=\"none\" stroke=\"" +
           (v1_out ? "#1f4e79" : "#7a3b00") + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + detail::num(cx) + "\" y=\"" + detail::num(cy + 4) +
           "\" font-size=\"11\" text-anchor=\"middle\">R" + std::to_string(f.regions[1]) + "</text>\n";
    out += "<text x=\"" + detail::num(cx) + "\" y=\"" + detail::num(cy - R - 8) +
           "\" font-size=\"11\" text-anchor=\"middle\">R" + std::to_string(f.regions[0]) + " / C" +
           std::to_string(f.id) + " " + to_string(f.cls) + "</text>\n";
    size_t n = f.cusps.size();
    for (size_t k = 0; k < n; ++k) {
      double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      double x = cx + R * std::cos(a), y = cy - R * std::sin(a);
      double dir = f.cusps[k].v2_into == f.regions[0] ? 1 : -1;
      out += detail::cusp_glyph(x, y, x + dir * 18 * std::cos(a), y - dir * 18 * std::sin(a), "#b22222");
    }
  }
  return out + "</svg>\n";
}

inline void emit_svg(const CausticDiagram& d, const std::string& path, const SvgOptions& opt = {}) {
  write_file(path, caustic_svg(d, opt));
}
inline void emit_svg(const Chain2D& c, const std::string& path, const SvgOptions& opt = {}) {
  write_file(path, chain_svg(c, opt));
}

// ---- run configuration ----

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Tolerances tol;
  std::string out_dir;
  std::uint64_t seed = 20260101;

  void set(const std::string& key, const std::string& value) {
    auto number = [&](double lo, double hi) {
      double v;
      try {
        size_t used = 0;
        v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw ConfigError("value for " + key + " is not a number: " + value);
      }
      if (!(v >= lo && v <= hi))
        throw ConfigError(key + " = " + value + " outside [" + detail::num(lo) + ", " + detail::num(hi) + "]");
      return v;
    };
    if (key == "tol_root") tol.tol_root = number(1e-14, 1e-6);
    else if (key == "tol_guard") tol.tol_guard = number(1e-12, 1.0);
    else if (key == "tol_close") tol.tol_close = number(1e-12, 1e-2);
    else if (key == "grid_n") tol.grid_n = static_cast<int>(number(4, 512));
    else if (key == "step_min") tol.step_min = number(1e-8, 1e-2);
    else if (key == "step_max") tol.step_max = number(1e-3, 1.0);
    else if (key == "out_dir") out_dir = value;
    else if (key == "seed") {
      size_t used = 0;
      try {
        if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
        seed = std::stoull(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) throw ConfigError("seed must be a non-negative integer: " + value);
    }
    else throw ConfigError("unknown configuration key " + key);
    if (!tol.sane()) throw ConfigError("inconsistent tolerances after setting " + key);
  }

  // key = value lines; '#' starts a comment
  void load(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected key = value");
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  void apply_env() {
    if (const char* s = std::getenv("CAUSTIC_FORGE_SEED")) set("seed", s);
  }

  std::string path(const std::string& name) const {
    return out_dir.empty() ? name : (std::filesystem::path(out_dir) / name).string();
  }
};

inline json to_json(const RunConfig& c) {
  return {{"tolerances", to_json(c.tol)}, {"out_dir", c.out_dir}, {"seed", c.seed}};
}

}  // namespace caustic
