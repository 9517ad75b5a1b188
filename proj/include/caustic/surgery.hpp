#pragma once

#include <optional>

#include "caustic/chain.hpp"

namespace caustic {

enum class Variant { chain, alpha };
enum class Direction { direct, inverse };
enum class SplitKind { separating, nonseparating };

inline const char* to_string(Variant v) { return v == Variant::chain ? "chain" : "alpha"; }
inline const char* to_string(Direction d) { return d == Direction::direct ? "direct" : "inverse"; }

// How a band with both ends on one circle cuts its region. X is the piece next to the circle
// formed by the fold arc running from cusp_a forward to cusp_b.
struct SplitSpec {
  SplitKind kind = SplitKind::separating;
  int x_euler = 1;
  std::vector<int> x_circles;
  int x_boundary = 0;
  Homotopy x_cls = Homotopy::null;
  int x_orientation = 1;

  bool operator==(const SplitSpec&) const = default;
};

inline SplitSpec disk_split() { return {}; }

struct Patch {
  std::vector<Region> regions;
  std::vector<FoldCircle> circles;
  std::map<int, std::vector<int>> arc_signs;

  bool operator==(const Patch&) const = default;
};

// Records touched by an applied direct surgery, before and after.
struct Binding {
  Patch pre;
  Patch post;

  bool operator==(const Binding&) const = default;
};

struct SurgeryBasis {
  int order_s = 1;
  int index_p = 0;
  Variant variant = Variant::chain;
  int region = -1;        // (1,0): host region; (1,1): region containing the band
  int circle = -1;        // (2,0): circle; inverse (1,0): the circle to remove
  int arc_position = 0;   // (2,0)
  int cusp_a = -1;        // (1,1): band ends; inverse (2,0): the cusp pair
  int cusp_b = -1;
  std::optional<SplitSpec> split;
  std::optional<bool> v1_outward;    // nu3/nu4 for (1,0), chain variant only
  std::optional<int> first_v2_into;  // nu1/nu2 for (2,0)
  std::optional<Binding> binding;

  bool is_birth() const { return order_s == 1 && index_p == 0; }
  bool is_band() const { return order_s == 1 && index_p == 1; }
  bool is_pair() const { return order_s == 2 && index_p == 0; }
  bool operator==(const SurgeryBasis&) const = default;
};

struct SurgeryStep {
  SurgeryBasis basis;
  Direction direction = Direction::direct;

  bool operator==(const SurgeryStep&) const = default;
};

using SurgerySequence = std::vector<SurgeryStep>;

inline SurgeryBasis birth_basis(int region, std::optional<bool> v1_outward = true, Variant v = Variant::chain) {
  SurgeryBasis b;
  b.order_s = 1;
  b.index_p = 0;
  b.variant = v;
  b.region = region;
  if (v == Variant::chain) b.v1_outward = v1_outward;
  return b;
}

inline SurgeryBasis band_basis(int region, int cusp_a, int cusp_b, std::optional<SplitSpec> split = std::nullopt,
                               Variant v = Variant::chain) {
  SurgeryBasis b;
  b.order_s = 1;
  b.index_p = 1;
  b.variant = v;
  b.region = region;
  b.cusp_a = cusp_a;
  b.cusp_b = cusp_b;
  b.split = std::move(split);
  return b;
}

inline SurgeryBasis pair_basis(int circle, int arc_position, std::optional<int> first_v2_into,
                               Variant v = Variant::chain) {
  SurgeryBasis b;
  b.order_s = 2;
  b.index_p = 0;
  b.variant = v;
  b.circle = circle;
  b.arc_position = arc_position;
  b.first_v2_into = first_v2_into;
  return b;
}

namespace detail {

inline void normalize(Chain2D& c) {
  std::sort(c.regions.begin(), c.regions.end(), [](const Region& a, const Region& b) { return a.id < b.id; });
  std::sort(c.circles.begin(), c.circles.end(), [](const FoldCircle& a, const FoldCircle& b) { return a.id < b.id; });
  for (auto& r : c.regions) {
    std::sort(r.incident_circles.begin(), r.incident_circles.end());
    r.incident_circles.erase(std::unique(r.incident_circles.begin(), r.incident_circles.end()),
                             r.incident_circles.end());
  }
}

inline void erase_id(std::vector<int>& v, int id) { v.erase(std::remove(v.begin(), v.end(), id), v.end()); }

inline void replace_region_refs(Chain2D& c, int from, int to, const std::set<int>& only_circles) {
  for (auto& f : c.circles) {
    if (!only_circles.empty() && !only_circles.count(f.id)) continue;
    for (auto& r : f.regions)
      if (r == from) r = to;
    if (f.v1_into == from) f.v1_into = to;
    for (auto& k : f.cusps)
      if (k.v2_into == from) k.v2_into = to;
  }
}

inline Binding diff(const Chain2D& pre, const std::map<int, std::vector<int>>* pre_signs, const Chain2D& post,
                    const std::map<int, std::vector<int>>* post_signs) {
  Binding b;
  for (const auto& r : pre.regions) {
    auto* q = post.region(r.id);
    if (!q || !(*q == r)) b.pre.regions.push_back(r);
  }
  for (const auto& r : post.regions) {
    auto* q = pre.region(r.id);
    if (!q || !(*q == r)) b.post.regions.push_back(r);
  }
  auto sign_of = [](const std::map<int, std::vector<int>>* m, int id) -> std::vector<int> {
    if (!m) return {};
    auto it = m->find(id);
    return it == m->end() ? std::vector<int>{} : it->second;
  };
  for (const auto& f : pre.circles) {
    auto* q = post.circle(f.id);
    if (!q || !(*q == f) || sign_of(pre_signs, f.id) != sign_of(post_signs, f.id)) {
      b.pre.circles.push_back(f);
      if (pre_signs) b.pre.arc_signs[f.id] = sign_of(pre_signs, f.id);
    }
  }
  for (const auto& f : post.circles) {
    auto* q = pre.circle(f.id);
    if (!q || !(*q == f) || sign_of(pre_signs, f.id) != sign_of(post_signs, f.id)) {
      b.post.circles.push_back(f);
      if (post_signs) b.post.arc_signs[f.id] = sign_of(post_signs, f.id);
    }
  }
  return b;
}

using SignMap = std::map<int, std::vector<int>>;

struct RewriteResult {
  Chain2D chain;
  SignMap signs;
  ValidationReport report;
};

// Performs the direct rewrite without validating the output; violations of the basis
// conditions are collected in the report.
inline RewriteResult rewrite_direct(const Chain2D& in, const SignMap* in_signs, const SurgeryBasis& b) {
  RewriteResult res{in, in_signs ? *in_signs : SignMap{}, {}};
  Chain2D& c = res.chain;
  SignMap& sg = res.signs;
  ValidationReport& rep = res.report;
  const bool alpha = b.variant == Variant::alpha;
  if (alpha != (in_signs != nullptr)) rep.add("variant", "basis", "basis variant does not match the chain type");

  if (b.is_birth()) {
    Region* R = c.region(b.region);
    if (!R) throw StructuralError("basis references unknown region " + std::to_string(b.region));
    if (alpha && b.v1_outward) rep.add("variant", "basis", "alpha variant carries no nu3/nu4");
    int nc = c.next_circle_id(), nr = c.next_region_id(), k = c.next_cusp_id();
    Side inner = opposite(R->side);
    R->euler_char -= 1;
    R->incident_circles.push_back(nc);
    FoldCircle f;
    f.id = nc;
    f.regions = {b.region, nr};
    if (alpha) f.v1_into = R->side == Side::L1 ? b.region : nr;
    else f.v1_into = b.v1_outward.value_or(true) ? b.region : nr;
    f.cls = Homotopy::null;
    f.cusps = {{k, b.region}, {k + 1, b.region}};
    c.regions.push_back({nr, 1, inner, 0, {nc}});
    c.circles.push_back(f);
    if (alpha) sg[nc] = {1, -1};
  } else if (b.is_pair()) {
    FoldCircle* f = c.circle(b.circle);
    if (!f) throw StructuralError("basis references unknown circle " + std::to_string(b.circle));
    if (b.arc_position < 0 || b.arc_position >= f->arc_count()) {
      rep.add("site", "basis", "arc position out of range");
      return res;
    }
    int first = b.first_v2_into.value_or(f->regions[0]);
    if (!f->adjacent(first)) {
      rep.add("nu", "basis", "nu1 must point into a region adjacent to the circle");
      return res;
    }
    int second = f->other(first);
    int k = c.next_cusp_id();
    Cusp n1{k, first}, n2{k + 1, second};
    if (f->cusps.empty()) {
      f->cusps = {n1, n2};
      if (alpha) {
        int s = sg.at(f->id).at(0);
        sg[f->id] = {-s, s};
      }
    } else {
      size_t pos = static_cast<size_t>(b.arc_position) + 1;
      f->cusps.insert(f->cusps.begin() + static_cast<long>(pos), {n1, n2});
      if (alpha) {
        auto& s = sg.at(f->id);
        int sigma = s.at(static_cast<size_t>(b.arc_position));
        s.insert(s.begin() + static_cast<long>(pos), {-sigma, sigma});
      }
    }
  } else if (b.is_band()) {
    int ca = c.circle_of_cusp(b.cusp_a), cb = c.circle_of_cusp(b.cusp_b);
    if (ca < 0 || cb < 0) throw StructuralError("basis references unknown cusp");
    if (!c.region(b.region)) throw StructuralError("basis references unknown region " + std::to_string(b.region));
    if (b.cusp_a == b.cusp_b) {
      rep.add("condition_a", "basis", "band ends must be distinct cusps");
      return res;
    }
    const int R = b.region;
    FoldCircle A = *c.circle(ca), B = *c.circle(cb);
    if (!A.adjacent(R) || !B.adjacent(R)) {
      rep.add("condition_a", "basis", "band region is not adjacent to both end circles");
      return res;
    }
    int ia = A.cusp_index(b.cusp_a), ib = B.cusp_index(b.cusp_b);
    if (A.cusps[static_cast<size_t>(ia)].v2_into != R || B.cusps[static_cast<size_t>(ib)].v2_into != R)
      rep.add("condition_c", "basis", "v2 at a band end does not point into the band");
    if (!alpha && ((A.v1_into == R) != (B.v1_into == R)))
      rep.add("condition_e", "basis", "v1 is not uniformly into or out of the band region");
    const bool same = ca == cb;
    if (alpha) {
      const auto& sa = sg.at(ca);
      const auto& sb = sg.at(cb);
      size_t ma = sa.size(), mb = sb.size();
      int after_a = sa[static_cast<size_t>(ia)], before_a = sa[(static_cast<size_t>(ia) + ma - 1) % ma];
      int after_b = sb[static_cast<size_t>(ib)], before_b = sb[(static_cast<size_t>(ib) + mb - 1) % mb];
      if (before_a != after_b || before_b != after_a)
        rep.add("condition_d", "basis", "third-derivative signs do not extend across the band");
    }
    if (!rep.ok()) return res;
    int Sa = A.other(R), Sb = B.other(R);

    if (!same) {
      if (b.split) rep.add("split", "basis", "split data given for a band joining two circles");
      int keep = std::min(ca, cb), drop = std::max(ca, cb);
      FoldCircle M;
      M.id = keep;
      int S = std::min(Sa, Sb), gone = std::max(Sa, Sb);
      M.regions = {R, S};
      M.v1_into = A.v1_into == R ? R : S;
      for (size_t i = 1; i < A.cusps.size(); ++i) M.cusps.push_back(A.cusps[(static_cast<size_t>(ia) + i) % A.cusps.size()]);
      for (size_t i = 1; i < B.cusps.size(); ++i) M.cusps.push_back(B.cusps[(static_cast<size_t>(ib) + i) % B.cusps.size()]);
      for (auto& k : M.cusps)
        if (k.v2_into == gone) k.v2_into = S;
      auto cls = reduced_class(c.surface, A.cls, A.orientation);
      cls += reduced_class(c.surface, B.cls, B.orientation);
      auto rep_cls = represent_class(c.surface, cls, {A.cls, B.cls});
      if (!rep_cls) {
        rep.add("class", "basis", "merged circle class is not represented by a single label");
        return res;
      }
      M.cls = rep_cls->first;
      M.orientation = rep_cls->second;
      if (alpha) {
        std::vector<int> s;
        const auto& sa = sg.at(ca);
        const auto& sb = sg.at(cb);
        for (size_t i = 1; i < sa.size(); ++i) s.push_back(sa[(static_cast<size_t>(ia) + i) % sa.size()]);
        for (size_t i = 1; i < sb.size(); ++i) s.push_back(sb[(static_cast<size_t>(ib) + i) % sb.size()]);
        if (s.empty()) s.push_back(sa[static_cast<size_t>(ia)]);
        sg.erase(drop);
        sg[keep] = s;
      }
      // regions: cut R along the band, glue the far sides with a strip
      Region* r = c.region(R);
      r->euler_char += 1;
      erase_id(r->incident_circles, ca);
      erase_id(r->incident_circles, cb);
      r->incident_circles.push_back(keep);
      if (Sa != Sb) {
        Region* s = c.region(S);
        Region* t = c.region(gone);
        s->euler_char = s->euler_char + t->euler_char - 1;
        s->boundary_components += t->boundary_components;
        for (int i : t->incident_circles) s->incident_circles.push_back(i);
        erase_id(s->incident_circles, ca);
        erase_id(s->incident_circles, cb);
        s->incident_circles.push_back(keep);
        replace_region_refs(c, gone, S, {});
        c.regions.erase(std::remove_if(c.regions.begin(), c.regions.end(), [&](const Region& x) { return x.id == gone; }),
                        c.regions.end());
      } else {
        Region* s = c.region(S);
        s->euler_char -= 1;
        erase_id(s->incident_circles, ca);
        erase_id(s->incident_circles, cb);
        s->incident_circles.push_back(keep);
      }
      c.circles.erase(std::remove_if(c.circles.begin(), c.circles.end(),
                                     [&](const FoldCircle& x) { return x.id == ca || x.id == cb; }),
                      c.circles.end());
      c.circles.push_back(M);
    } else {
      if (!b.split) {
        rep.add("split", "basis", "band with both ends on one circle needs split data");
        return res;
      }
      const SplitSpec& sp = *b.split;
      const FoldCircle C = A;
      int S = Sa;
      size_t n = C.cusps.size();
      std::vector<size_t> xi, yi;
      for (size_t i = (static_cast<size_t>(ia) + 1) % n; i != static_cast<size_t>(ib); i = (i + 1) % n) xi.push_back(i);
      for (size_t i = (static_cast<size_t>(ib) + 1) % n; i != static_cast<size_t>(ia); i = (i + 1) % n) yi.push_back(i);
      int ny = c.next_circle_id();
      FoldCircle X, Y;
      X.id = C.id;
      Y.id = ny;
      for (size_t i : xi) X.cusps.push_back(C.cusps[i]);
      for (size_t i : yi) Y.cusps.push_back(C.cusps[i]);
      if (!detail::label_supported(c.surface, sp.x_cls) || (sp.x_orientation != 1 && sp.x_orientation != -1)) {
        rep.add("split", "basis", "unsupported class for the split piece");
        return res;
      }
      auto total = reduced_class(c.surface, C.cls, C.orientation);
      auto xcls = reduced_class(c.surface, sp.x_cls, sp.x_orientation);
      auto ycls = total;
      ycls += -xcls;
      auto yrep = represent_class(c.surface, ycls, {C.cls});
      if (!yrep) {
        rep.add("class", "basis", "split circle class is not represented by a single label");
        return res;
      }
      X.cls = sp.x_cls;
      X.orientation = sp.x_cls == Homotopy::null ? 1 : sp.x_orientation;
      Y.cls = yrep->first;
      Y.orientation = yrep->second;
      if (alpha) {
        const auto& s = sg.at(C.id);
        std::vector<int> sx, sy;
        for (size_t i : xi) sx.push_back(s[i]);
        for (size_t i : yi) sy.push_back(s[i]);
        if (sx.empty()) sx.push_back(s[static_cast<size_t>(ia)]);
        if (sy.empty()) sy.push_back(s[static_cast<size_t>(ib)]);
        sg[X.id] = sx;
        sg[Y.id] = sy;
      }
      Region* s = c.region(S);
      s->euler_char -= 1;
      erase_id(s->incident_circles, C.id);
      s->incident_circles.push_back(X.id);
      s->incident_circles.push_back(Y.id);
      Region rr = *c.region(R);
      std::vector<int> others = rr.incident_circles;
      erase_id(others, C.id);
      int RY = R;
      if (sp.kind == SplitKind::separating) {
        for (int x : sp.x_circles)
          if (std::find(others.begin(), others.end(), x) == others.end()) {
            rep.add("split", "basis", "split piece lists a circle not bounding the band region");
            return res;
          }
        if (sp.x_boundary < 0 || sp.x_boundary > rr.boundary_components) {
          rep.add("split", "basis", "split piece boundary count out of range");
          return res;
        }
        RY = c.next_region_id();
        Region rx{R, sp.x_euler, rr.side, sp.x_boundary, sp.x_circles};
        rx.incident_circles.push_back(X.id);
        Region ry{RY, rr.euler_char + 1 - sp.x_euler, rr.side, rr.boundary_components - sp.x_boundary, {}};
        std::set<int> moved;
        for (int o : others)
          if (std::find(sp.x_circles.begin(), sp.x_circles.end(), o) == sp.x_circles.end()) {
            ry.incident_circles.push_back(o);
            moved.insert(o);
          }
        ry.incident_circles.push_back(Y.id);
        *c.region(R) = rx;
        c.regions.push_back(ry);
        if (!moved.empty()) replace_region_refs(c, R, RY, moved);
        // A planar piece bounded by one fold circle and surface boundary circles fixes the
        // homology of that fold circle up to sign.
        auto piece_ok = [&](const Region& piece, const HomologyClassVector& cls) {
          if (c.surface.genus != 0 || piece.incident_circles.size() != 1) return true;
          if (piece.boundary_components == 1 && c.surface.boundary_count == 2) return !cls.zero();
          return cls.zero();
        };
        if (!piece_ok(rx, xcls) || !piece_ok(ry, ycls))
          rep.add("class", "basis", "split classes contradict the pieces they bound");
      } else {
        Region* r = c.region(R);
        r->euler_char += 1;
        erase_id(r->incident_circles, C.id);
        r->incident_circles.push_back(X.id);
        r->incident_circles.push_back(Y.id);
      }
      auto side_of = [&](int reg, int region_for_R) { return reg == R ? region_for_R : reg; };
      X.regions = {R, S};
      Y.regions = {RY, S};
      X.v1_into = side_of(C.v1_into, R);
      Y.v1_into = side_of(C.v1_into, RY);
      for (auto& k : X.cusps) k.v2_into = side_of(k.v2_into, R);
      for (auto& k : Y.cusps) k.v2_into = side_of(k.v2_into, RY);
      for (auto& f : c.circles)
        if (f.id == C.id) f = X;
      c.circles.push_back(Y);
    }
  } else {
    rep.add("order_index", "basis", "only (s,p) in {(1,0),(1,1),(2,0)} exist on surfaces");
  }
  normalize(c);
  return res;
}

}  // namespace detail

inline ValidationReport check_basis(const Chain2D& chain, const SurgeryBasis& b) {
  require_valid(chain);
  if (b.variant != Variant::chain) {
    ValidationReport rep;
    rep.add("variant", "basis", "alpha-variant basis needs an alpha-chain");
    return rep;
  }
  auto res = detail::rewrite_direct(chain, nullptr, b);
  if (res.report.ok()) {
    auto out = validate_chain(res.chain);
    for (auto& v : out.violations) res.report.add("result", v.element, v.code + (v.detail.empty() ? "" : ": " + v.detail));
  }
  return res.report;
}

inline ValidationReport check_basis(const AlphaChain2D& chain, const SurgeryBasis& b) {
  require_valid(chain);
  if (b.variant != Variant::alpha) {
    ValidationReport rep;
    rep.add("variant", "basis", "chain-variant basis applied to an alpha-chain");
    return rep;
  }
  auto res = detail::rewrite_direct(chain.chain, &chain.arc_signs, b);
  if (res.report.ok()) {
    auto out = validate_chain(AlphaChain2D{res.chain, res.signs});
    for (auto& v : out.violations) res.report.add("result", v.element, v.code + (v.detail.empty() ? "" : ": " + v.detail));
  }
  return res.report;
}

inline Chain2D apply_direct(const Chain2D& chain, const SurgeryBasis& b) {
  auto rep = check_basis(chain, b);
  if (!rep.ok()) throw PreconditionError("invalid surgery basis", rep);
  return detail::rewrite_direct(chain, nullptr, b).chain;
}

inline AlphaChain2D apply_direct(const AlphaChain2D& chain, const SurgeryBasis& b) {
  auto rep = check_basis(chain, b);
  if (!rep.ok()) throw PreconditionError("invalid surgery basis", rep);
  auto res = detail::rewrite_direct(chain.chain, &chain.arc_signs, b);
  return {res.chain, res.signs};
}

// Records the touched elements so that the inverse can be applied to the output exactly.
inline SurgeryBasis bind_basis(const Chain2D& chain, SurgeryBasis b) {
  b.binding.reset();
  Chain2D post = apply_direct(chain, b);
  b.binding = detail::diff(chain, nullptr, post, nullptr);
  return b;
}

inline SurgeryBasis bind_basis(const AlphaChain2D& chain, SurgeryBasis b) {
  b.binding.reset();
  AlphaChain2D post = apply_direct(chain, b);
  b.binding = detail::diff(chain.chain, &chain.arc_signs, post.chain, &post.arc_signs);
  return b;
}

namespace detail {

inline void apply_patch_inverse(Chain2D& c, SignMap* sg, const Binding& bd) {
  for (const auto& r : bd.post.regions) {
    auto* q = c.region(r.id);
    if (!q || !(*q == r)) throw PreconditionError("post-image configuration absent (region " + std::to_string(r.id) + ")");
  }
  for (const auto& f : bd.post.circles) {
    auto* q = c.circle(f.id);
    if (!q || !(*q == f)) throw PreconditionError("post-image configuration absent (circle " + std::to_string(f.id) + ")");
    if (sg) {
      auto it = bd.post.arc_signs.find(f.id);
      auto jt = sg->find(f.id);
      if (it == bd.post.arc_signs.end() || jt == sg->end() || it->second != jt->second)
        throw PreconditionError("post-image arc signs absent (circle " + std::to_string(f.id) + ")");
    }
  }
  auto in_post_r = [&](int id) {
    return std::any_of(bd.post.regions.begin(), bd.post.regions.end(), [&](const Region& r) { return r.id == id; });
  };
  auto in_post_c = [&](int id) {
    return std::any_of(bd.post.circles.begin(), bd.post.circles.end(), [&](const FoldCircle& f) { return f.id == id; });
  };
  for (const auto& r : bd.pre.regions)
    if (!in_post_r(r.id) && c.region(r.id)) throw PreconditionError("region id collision in inverse surgery");
  for (const auto& f : bd.pre.circles)
    if (!in_post_c(f.id) && c.circle(f.id)) throw PreconditionError("circle id collision in inverse surgery");
  c.regions.erase(std::remove_if(c.regions.begin(), c.regions.end(), [&](const Region& r) { return in_post_r(r.id); }),
                  c.regions.end());
  c.circles.erase(std::remove_if(c.circles.begin(), c.circles.end(),
                                 [&](const FoldCircle& f) { return in_post_c(f.id); }),
                  c.circles.end());
  if (sg)
    for (const auto& f : bd.post.circles) sg->erase(f.id);
  for (const auto& r : bd.pre.regions) c.regions.push_back(r);
  for (const auto& f : bd.pre.circles) {
    c.circles.push_back(f);
    if (sg) (*sg)[f.id] = bd.pre.arc_signs.at(f.id);
  }
  normalize(c);
}

// Inverse of (1,0) or (2,0) located from the basis site alone.
inline void inverse_by_pattern(Chain2D& c, SignMap* sg, const SurgeryBasis& b) {
  if (b.is_birth()) {
    const FoldCircle* lips = nullptr;
    auto matches = [&](const FoldCircle& f) {
      if (b.region >= 0 && !f.adjacent(b.region)) return false;
      if (f.cls != Homotopy::null || f.cusps.size() != 2) return false;
      int R = f.cusps[0].v2_into;
      if (f.cusps[1].v2_into != R) return false;
      const Region& D = c.region_at(f.other(R));
      if (b.region >= 0 && R != b.region) return false;
      return D.euler_char == 1 && D.boundary_components == 0 && D.incident_circles.size() == 1;
    };
    if (b.circle >= 0) {
      const FoldCircle* f = c.circle(b.circle);
      if (f && matches(*f)) lips = f;
    } else {
      for (const auto& f : c.circles)
        if (matches(f)) {
          lips = &f;
          break;
        }
    }
    if (!lips) throw PreconditionError("no two-cusp null circle bounding a disk at the site");
    int R = lips->cusps[0].v2_into, D = lips->other(R), id = lips->id;
    Region* r = c.region(R);
    r->euler_char += 1;
    erase_id(r->incident_circles, id);
    c.regions.erase(std::remove_if(c.regions.begin(), c.regions.end(), [&](const Region& x) { return x.id == D; }),
                    c.regions.end());
    c.circles.erase(std::remove_if(c.circles.begin(), c.circles.end(), [&](const FoldCircle& x) { return x.id == id; }),
                    c.circles.end());
    if (sg) sg->erase(id);
  } else if (b.is_pair()) {
    FoldCircle* f = c.circle(b.circle);
    if (!f) throw PreconditionError("inverse site circle absent");
    size_t n = f->cusps.size();
    if (n < 2) throw PreconditionError("circle carries no cusp pair to cancel");
    size_t i = 0;
    if (b.cusp_a >= 0) {
      int ia = f->cusp_index(b.cusp_a);
      if (ia < 0 || f->cusps[(static_cast<size_t>(ia) + 1) % n].id != b.cusp_b)
        throw PreconditionError("cusp pair is not adjacent on the circle");
      i = static_cast<size_t>(ia);
    } else {
      i = n == 2 ? 0 : (static_cast<size_t>(b.arc_position) + 1) % n;
    }
    size_t j = (i + 1) % n;
    if (f->cusps[i].v2_into == f->cusps[j].v2_into) throw PreconditionError("cusp pair v2 directions are not opposite");
    if (sg) {
      auto& s = sg->at(f->id);
      int before = s[(i + n - 1) % n], after = s[j];
      if (before != after || s[i] != -after) throw PreconditionError("cusp pair arc signs do not cancel");
      std::vector<int> ns;
      for (size_t k = 0; k < n; ++k)
        if (k != i && k != j) ns.push_back(s[k]);
      if (ns.empty()) ns.push_back(after);
      s = ns;
    }
    int ki = f->cusps[i].id, kj = f->cusps[j].id;
    f->cusps.erase(std::remove_if(f->cusps.begin(), f->cusps.end(), [&](const Cusp& k) { return k.id == ki || k.id == kj; }),
                   f->cusps.end());
  } else {
    throw PreconditionError("inverse band surgery needs a bound basis");
  }
  normalize(c);
}

}  // namespace detail

inline Chain2D apply_inverse(const Chain2D& chain, const SurgeryBasis& b) {
  require_valid(chain);
  Chain2D c = chain;
  if (b.binding) detail::apply_patch_inverse(c, nullptr, *b.binding);
  else detail::inverse_by_pattern(c, nullptr, b);
  auto rep = validate_chain(c);
  if (!rep.ok()) throw PreconditionError("inverse surgery produced an invalid chain", rep);
  return c;
}

inline AlphaChain2D apply_inverse(const AlphaChain2D& chain, const SurgeryBasis& b) {
  require_valid(chain);
  AlphaChain2D c = chain;
  if (b.binding) detail::apply_patch_inverse(c.chain, &c.arc_signs, *b.binding);
  else detail::inverse_by_pattern(c.chain, &c.arc_signs, b);
  auto rep = validate_chain(c);
  if (!rep.ok()) throw PreconditionError("inverse surgery produced an invalid alpha-chain", rep);
  return c;
}

template <class ChainT>
ChainT apply_sequence(const ChainT& chain, const SurgerySequence& seq) {
  ChainT c = chain;
  for (const auto& st : seq) c = st.direction == Direction::direct ? apply_direct(c, st.basis) : apply_inverse(c, st.basis);
  return c;
}

enum class Coorientation { outward, inward };

// (1,0) then (1,1) joining the two new cusps around the outside of the new disk.
inline SurgerySequence double_fold_sequence(const Chain2D& chain, int region, Coorientation combo) {
  if (!chain.region(region)) throw DomainError("unknown region " + std::to_string(region));
  SurgerySequence seq;
  SurgeryBasis b1 = bind_basis(chain, birth_basis(region, combo == Coorientation::outward));
  Chain2D mid = apply_direct(chain, b1);
  const FoldCircle& lips = mid.circle_at(b1.binding->post.circles.front().id);
  SurgeryBasis b2 = bind_basis(mid, band_basis(region, lips.cusps[0].id, lips.cusps[1].id, disk_split()));
  seq.push_back({b1, Direction::direct});
  seq.push_back({b2, Direction::direct});
  return seq;
}

// The inner circle of the pair carries the third-derivative sign inner_sign.
inline SurgerySequence double_fold_sequence(const AlphaChain2D& chain, int region, int inner_sign = -1) {
  if (!chain.chain.region(region)) throw DomainError("unknown region " + std::to_string(region));
  SurgerySequence seq;
  SurgeryBasis b1 = bind_basis(chain, birth_basis(region, std::nullopt, Variant::alpha));
  AlphaChain2D mid = apply_direct(chain, b1);
  const FoldCircle& lips = mid.chain.circle_at(b1.binding->post.circles.front().id);
  // lips arcs carry (+,-); the disk piece keeps the sign of the arc leaving cusp_a
  int ka = lips.cusps[0].id, kb = lips.cusps[1].id;
  if (inner_sign < 0) std::swap(ka, kb);
  SurgeryBasis b2 = bind_basis(mid, band_basis(region, ka, kb, disk_split(), Variant::alpha));
  seq.push_back({b1, Direction::direct});
  seq.push_back({b2, Direction::direct});
  return seq;
}

inline Chain2D create_double_fold(const Chain2D& chain, int region, Coorientation combo) {
  return apply_sequence(chain, double_fold_sequence(chain, region, combo));
}

inline AlphaChain2D create_double_fold(const AlphaChain2D& chain, int region, int inner_sign = -1) {
  return apply_sequence(chain, double_fold_sequence(chain, region, inner_sign));
}

// Removes nested cusp-free null pairs (disk inside an annulus) with opposite coorientations.
inline Chain2D strip_double_folds(Chain2D c) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& inner : c.circles) {
      if (!inner.cusps.empty() || inner.cls != Homotopy::null) continue;
      for (int d : inner.regions) {
        const Region& D = c.region_at(d);
        if (D.euler_char != 1 || D.boundary_components != 0 || D.incident_circles.size() != 1) continue;
        const Region& N = c.region_at(inner.other(d));
        if (N.euler_char != 0 || N.boundary_components != 0 || N.incident_circles.size() != 2) continue;
        int oid = N.incident_circles[0] == inner.id ? N.incident_circles[1] : N.incident_circles[0];
        const FoldCircle& outer = c.circle_at(oid);
        if (!outer.cusps.empty() || outer.cls != Homotopy::null) continue;
        int R = outer.other(N.id);
        if (R == d) continue;
        bool inner_to_N = inner.v1_into == N.id, outer_to_N = outer.v1_into == N.id;
        if (inner_to_N != outer_to_N) continue;
        int in_id = inner.id, Nid = N.id;
        Region* r = c.region(R);
        r->euler_char += 1;
        detail::erase_id(r->incident_circles, oid);
        c.regions.erase(std::remove_if(c.regions.begin(), c.regions.end(),
                                       [&](const Region& x) { return x.id == d || x.id == Nid; }),
                        c.regions.end());
        c.circles.erase(std::remove_if(c.circles.begin(), c.circles.end(),
                                       [&](const FoldCircle& x) { return x.id == in_id || x.id == oid; }),
                        c.circles.end());
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  detail::normalize(c);
  return c;
}

}  // namespace caustic
