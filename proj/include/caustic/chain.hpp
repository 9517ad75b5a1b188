#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

#include "caustic/types.hpp"

namespace caustic {

namespace detail {

inline std::string rid(int id) { return "region " + std::to_string(id); }
inline std::string cid(int id) { return "circle " + std::to_string(id); }

inline bool label_supported(const Surface& s, Homotopy h) {
  switch (h) {
    case Homotopy::null: return true;
    case Homotopy::essential_a: return s.genus == 1 || s.boundary_count == 2;
    case Homotopy::essential_b: return s.genus == 1;
    case Homotopy::boundary_parallel_1: return s.boundary_count >= 1;
    case Homotopy::boundary_parallel_2: return s.boundary_count == 2;
  }
  return false;
}

// Throws on ids that cannot be resolved or are duplicated.
inline void check_structure(const Chain2D& c) {
  std::set<int> rids, cids, kids;
  for (const auto& r : c.regions)
    if (!rids.insert(r.id).second) throw StructuralError("duplicate region id " + std::to_string(r.id));
  for (const auto& f : c.circles) {
    if (!cids.insert(f.id).second) throw StructuralError("duplicate circle id " + std::to_string(f.id));
    for (int r : f.regions)
      if (!rids.count(r))
        throw StructuralError(cid(f.id) + " references unknown region " + std::to_string(r));
    if (!rids.count(f.v1_into))
      throw StructuralError(cid(f.id) + " v1 references unknown region " + std::to_string(f.v1_into));
    for (const auto& k : f.cusps) {
      if (!kids.insert(k.id).second) throw StructuralError("duplicate cusp id " + std::to_string(k.id));
      if (!rids.count(k.v2_into))
        throw StructuralError("cusp " + std::to_string(k.id) + " references unknown region " +
                              std::to_string(k.v2_into));
    }
  }
  for (const auto& r : c.regions)
    for (int i : r.incident_circles)
      if (!cids.count(i))
        throw StructuralError(rid(r.id) + " lists unknown circle " + std::to_string(i));
}

}  // namespace detail

inline ValidationReport validate_chain(const Chain2D& c) {
  detail::check_structure(c);
  ValidationReport rep;
  const Surface& s = c.surface;
  if (!s.orientable || s.genus < 0 || s.genus > 1 || s.boundary_count < 0 || s.boundary_count > 2)
    rep.add("surface", "surface", "unsupported ambient surface");
  if (c.regions.empty()) {
    rep.add("regions", "chain", "no regions");
    return rep;
  }

  int chi_sum = 0, bsum = 0;
  for (const auto& r : c.regions) {
    chi_sum += r.euler_char;
    bsum += r.boundary_components;
    if (r.boundary_components < 0) rep.add("region_topology", detail::rid(r.id), "negative boundary count");
    int b = static_cast<int>(r.incident_circles.size()) + r.boundary_components;
    int twice_g = 2 - b - r.euler_char;
    if (twice_g < 0 || twice_g % 2 != 0)
      rep.add("region_topology", detail::rid(r.id), "euler characteristic incompatible with boundary count");
    std::set<int> listed(r.incident_circles.begin(), r.incident_circles.end());
    std::set<int> actual;
    for (const auto& f : c.circles)
      if (f.adjacent(r.id)) actual.insert(f.id);
    if (listed != actual || listed.size() != r.incident_circles.size())
      rep.add("incidence", detail::rid(r.id), "incident circle list disagrees with circles");
  }
  if (chi_sum != s.euler())
    rep.add("euler_sum", "chain",
            "sum of region euler characteristics " + std::to_string(chi_sum) + " != " + std::to_string(s.euler()));
  if (bsum != s.boundary_count) rep.add("boundary_sum", "chain", "boundary components do not add up");

  for (const auto& f : c.circles) {
    const Region* a = c.region(f.regions[0]);
    const Region* b = c.region(f.regions[1]);
    if (f.regions[0] == f.regions[1] || a->side == b->side)
      rep.add("separation", detail::cid(f.id), "adjacent regions share side class");
    if (!f.adjacent(f.v1_into)) rep.add("coorientation", detail::cid(f.id), "v1 target not adjacent");
    for (const auto& k : f.cusps)
      if (!f.adjacent(k.v2_into))
        rep.add("cusp_target", "cusp " + std::to_string(k.id), "v2 target not adjacent to its circle");
    if (!detail::label_supported(s, f.cls))
      rep.add("homotopy_label", detail::cid(f.id), std::string("label ") + to_string(f.cls) + " unsupported");
    if (f.orientation != 1 && f.orientation != -1)
      rep.add("homotopy_label", detail::cid(f.id), "orientation must be +1 or -1");
  }

  // connectivity and genus bookkeeping of the region graph
  std::map<int, int> comp;
  for (const auto& r : c.regions) comp[r.id] = r.id;
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (const auto& f : c.circles) comp[find(f.regions[0])] = find(f.regions[1]);
  std::set<int> roots;
  for (const auto& r : c.regions) roots.insert(find(r.id));
  if (roots.size() != 1) {
    rep.add("graph_topology", "chain", "region graph is disconnected");
  } else if (!rep.has("region_topology")) {
    int gsum = 0;
    for (const auto& r : c.regions)
      gsum += (2 - static_cast<int>(r.incident_circles.size()) - r.boundary_components - r.euler_char) / 2;
    int rank = static_cast<int>(c.circles.size()) - static_cast<int>(c.regions.size()) + 1;
    if (gsum + rank != s.genus) rep.add("graph_topology", "chain", "region genera and graph cycles do not match surface genus");
  }
  return rep;
}

inline ValidationReport validate_chain(const AlphaChain2D& a) {
  ValidationReport rep = validate_chain(a.chain);
  for (const auto& f : a.chain.circles) {
    auto it = a.arc_signs.find(f.id);
    if (it == a.arc_signs.end()) {
      rep.add("alternation", detail::cid(f.id), "missing arc signs");
      continue;
    }
    const auto& sg = it->second;
    if (f.cusps.size() % 2 != 0) rep.add("parity", detail::cid(f.id), "odd cusp count");
    if (static_cast<int>(sg.size()) != f.arc_count()) {
      rep.add("alternation", detail::cid(f.id), "arc sign count differs from arc count");
      continue;
    }
    for (int v : sg)
      if (v != 1 && v != -1) rep.add("alternation", detail::cid(f.id), "arc sign must be +1 or -1");
    if (!f.cusps.empty())
      for (size_t i = 0; i < sg.size(); ++i)
        if (sg[i] == sg[(i + 1) % sg.size()]) {
          rep.add("alternation", detail::cid(f.id), "signs do not flip at cusp " + std::to_string(f.cusps[(i + 1) % sg.size()].id));
          break;
        }
    const Region* r = a.chain.region(f.v1_into);
    if (r && r->side != Side::L1) rep.add("alpha_coorientation", detail::cid(f.id), "v1 must point into L1");
  }
  for (const auto& [id, sg] : a.arc_signs)
    if (!a.chain.circle(id)) throw StructuralError("arc signs for unknown circle " + std::to_string(id));
  return rep;
}

inline void require_valid(const Chain2D& c) {
  auto rep = validate_chain(c);
  if (!rep.ok()) throw PreconditionError("invalid chain", rep);
}

inline void require_valid(const AlphaChain2D& c) {
  auto rep = validate_chain(c);
  if (!rep.ok()) throw PreconditionError("invalid alpha-chain", rep);
}

// chi(L1) - chi(L2) + n1 - n2 - sum over surface boundary circles of +/-1 by the class containing them.
inline int euler_value(const Chain2D& c) {
  require_valid(c);
  int v = 0;
  for (const auto& r : c.regions) v += side_sign(r.side) * (r.euler_char - r.boundary_components);
  for (const auto& f : c.circles)
    for (const auto& k : f.cusps) v += side_sign(c.region_at(k.v2_into).side);
  return v;
}

inline int cusps_into(const Chain2D& c, Side s) {
  int n = 0;
  for (const auto& f : c.circles)
    for (const auto& k : f.cusps)
      if (c.region_at(k.v2_into).side == s) ++n;
  return n;
}

struct HomologyClassVector {
  // coefficients over essential_a, essential_b, boundary_parallel_1, boundary_parallel_2
  std::array<int, 4> coeff{0, 0, 0, 0};

  bool zero() const { return coeff == std::array<int, 4>{0, 0, 0, 0}; }
  HomologyClassVector& operator+=(const HomologyClassVector& o) {
    for (int i = 0; i < 4; ++i) coeff[i] += o.coeff[i];
    return *this;
  }
  HomologyClassVector operator-() const {
    HomologyClassVector r;
    for (int i = 0; i < 4; ++i) r.coeff[i] = -coeff[i];
    return r;
  }
  bool operator==(const HomologyClassVector&) const = default;
};

// Class of an oriented circle in H1 of the surface, expressed in a reduced basis:
// boundary-parallel circles on the annulus are multiples of the core, on the disk they vanish.
inline HomologyClassVector reduced_class(const Surface& s, Homotopy h, int orientation) {
  HomologyClassVector v;
  switch (h) {
    case Homotopy::null: break;
    case Homotopy::essential_a: v.coeff[0] = orientation; break;
    case Homotopy::essential_b: v.coeff[1] = orientation; break;
    case Homotopy::boundary_parallel_1:
    case Homotopy::boundary_parallel_2:
      if (s.genus == 0 && s.boundary_count == 2) v.coeff[0] = orientation;
      else if (s.genus == 1 && s.boundary_count == 2) v.coeff[2] = orientation;
      break;
  }
  return v;
}

// Label (and orientation) representing a reduced class, preferring the hinted labels.
inline std::optional<std::pair<Homotopy, int>> represent_class(const Surface& s, const HomologyClassVector& v,
                                                               std::initializer_list<Homotopy> hints = {}) {
  if (v.zero()) return std::make_pair(Homotopy::null, 1);
  std::vector<Homotopy> order(hints);
  for (Homotopy h : {Homotopy::essential_a, Homotopy::essential_b, Homotopy::boundary_parallel_1,
                     Homotopy::boundary_parallel_2})
    order.push_back(h);
  for (Homotopy h : order) {
    if (h == Homotopy::null || !detail::label_supported(s, h)) continue;
    for (int o : {1, -1})
      if (reduced_class(s, h, o) == v) return std::make_pair(h, o);
  }
  return std::nullopt;
}

inline HomologyClassVector maslov_class(const Chain2D& c) {
  require_valid(c);
  HomologyClassVector v;
  for (const auto& f : c.circles) v += reduced_class(c.surface, f.cls, f.orientation);
  return v;
}

struct Realizability {
  bool realizable = false;
  std::map<int, Side> labeling;
};

// Side classes of the input are ignored; a 2-colouring is searched with the lowest region id on L1.
inline Realizability realizable(const Chain2D& weak) {
  detail::check_structure(weak);
  Realizability out;
  std::map<int, std::vector<int>> adj;
  for (const auto& r : weak.regions) adj[r.id];
  for (const auto& f : weak.circles) {
    if (f.regions[0] == f.regions[1]) return out;
    adj[f.regions[0]].push_back(f.regions[1]);
    adj[f.regions[1]].push_back(f.regions[0]);
  }
  std::map<int, int> color;
  for (const auto& [start, _] : adj) {
    if (color.count(start)) continue;
    color[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[x]) {
        auto it = color.find(y);
        if (it == color.end()) {
          color[y] = 1 - color[x];
          stack.push_back(y);
        } else if (it->second == color[x]) {
          return out;
        }
      }
    }
  }
  out.realizable = true;
  for (const auto& [id, col] : color) out.labeling[id] = col == 0 ? Side::L1 : Side::L2;
  return out;
}

namespace detail {

using Code = std::vector<int>;

inline Code min_rotation(const std::vector<std::array<int, 2>>& seq) {
  Code best;
  size_t n = seq.size();
  for (size_t s = 0; s < n; ++s) {
    Code cand;
    for (size_t i = 0; i < n; ++i) {
      cand.push_back(seq[(s + i) % n][0]);
      cand.push_back(seq[(s + i) % n][1]);
    }
    if (s == 0 || cand < best) best = cand;
  }
  return best;
}

// Region-independent description of a circle: label, orientation, v1 side class and the cusp word.
inline Code circle_code(const Chain2D& c, const FoldCircle& f, const std::vector<int>* signs) {
  Code code;
  code.push_back(static_cast<int>(f.cls));
  code.push_back(f.cls == Homotopy::null ? 0 : f.orientation);
  code.push_back(c.region_at(f.v1_into).side == Side::L1 ? 0 : 1);
  code.push_back(static_cast<int>(f.cusps.size()));
  if (f.cusps.empty()) {
    code.push_back(signs ? signs->at(0) : 0);
    return code;
  }
  std::vector<std::array<int, 2>> seq;
  for (size_t i = 0; i < f.cusps.size(); ++i)
    seq.push_back({f.cusps[i].v2_into == f.v1_into ? 0 : 1, signs ? signs->at(i) : 0});
  auto rot = min_rotation(seq);
  code.insert(code.end(), rot.begin(), rot.end());
  return code;
}

struct EquivGraph {
  const Chain2D* chain;
  std::vector<int> ids;                 // region ids by index
  std::map<int, int> index;             // region id -> index
  // (v1-side index, other index) -> sorted circle codes
  std::map<std::pair<int, int>, std::vector<Code>> edges;
  std::vector<std::vector<std::tuple<Code, int, int>>> incident;  // (code, is_v1_side, neighbour)
};

inline EquivGraph build_graph(const Chain2D& c, const std::map<int, std::vector<int>>* signs) {
  EquivGraph g;
  g.chain = &c;
  for (const auto& r : c.regions) {
    g.index[r.id] = static_cast<int>(g.ids.size());
    g.ids.push_back(r.id);
  }
  g.incident.resize(g.ids.size());
  for (const auto& f : c.circles) {
    const std::vector<int>* sg = nullptr;
    if (signs) sg = &signs->at(f.id);
    Code code = circle_code(c, f, sg);
    int a = g.index[f.v1_into], b = g.index[f.other(f.v1_into)];
    g.edges[{a, b}].push_back(code);
    g.incident[a].emplace_back(code, 1, b);
    g.incident[b].emplace_back(code, 0, a);
  }
  for (auto& [k, v] : g.edges) std::sort(v.begin(), v.end());
  return g;
}

inline bool graphs_isomorphic(const EquivGraph& A, const EquivGraph& B) {
  size_t n = A.ids.size();
  if (n != B.ids.size()) return false;
  if (A.chain->circles.size() != B.chain->circles.size()) return false;

  // colour refinement shared between both graphs
  std::map<Code, int> palette;
  auto intern = [&](const Code& k) {
    auto it = palette.find(k);
    if (it != palette.end()) return it->second;
    int v = static_cast<int>(palette.size());
    palette[k] = v;
    return v;
  };
  auto initial = [&](const EquivGraph& G, std::vector<int>& col) {
    col.resize(G.ids.size());
    for (size_t i = 0; i < G.ids.size(); ++i) {
      const Region& r = G.chain->region_at(G.ids[i]);
      Code k{r.side == Side::L1 ? 0 : 1, r.euler_char, r.boundary_components};
      std::vector<Code> inc;
      for (const auto& [code, v1s, nb] : G.incident[i]) {
        Code e = code;
        e.push_back(v1s);
        inc.push_back(e);
      }
      std::sort(inc.begin(), inc.end());
      for (const auto& e : inc) {
        k.push_back(-1000);
        k.insert(k.end(), e.begin(), e.end());
      }
      col[i] = intern(k);
    }
  };
  std::vector<int> ca, cb;
  initial(A, ca);
  initial(B, cb);
  for (size_t round = 0; round < n + 1; ++round) {
    auto refine = [&](const EquivGraph& G, const std::vector<int>& col) {
      std::vector<Code> keys(G.ids.size());
      for (size_t i = 0; i < G.ids.size(); ++i) {
        std::vector<Code> nb;
        for (const auto& [code, v1s, j] : G.incident[i]) {
          Code e{col[j], v1s};
          e.insert(e.end(), code.begin(), code.end());
          nb.push_back(e);
        }
        std::sort(nb.begin(), nb.end());
        Code k{col[i]};
        for (const auto& e : nb) {
          k.push_back(-2000);
          k.insert(k.end(), e.begin(), e.end());
        }
        keys[i] = k;
      }
      return keys;
    };
    auto ka = refine(A, ca), kb = refine(B, cb);
    std::vector<int> na(n), nb2(n);
    for (size_t i = 0; i < n; ++i) na[i] = intern(ka[i]);
    for (size_t i = 0; i < n; ++i) nb2[i] = intern(kb[i]);
    std::set<int> before(ca.begin(), ca.end()), after(na.begin(), na.end());
    ca = na;
    cb = nb2;
    if (after.size() == before.size()) break;
  }
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }

  auto edge = [](const EquivGraph& G, int a, int b) -> const std::vector<Code>* {
    auto it = G.edges.find({a, b});
    return it == G.edges.end() ? nullptr : &it->second;
  };
  auto same_edges = [&](int a1, int a2, int b1, int b2) {
    auto* x = edge(A, a1, a2);
    auto* y = edge(B, b1, b2);
    if (!x || !y) return (!x || x->empty()) && (!y || y->empty());
    return *x == *y;
  };

  std::vector<int> map(n, -1), used(n, 0);
  std::function<bool(size_t)> assign = [&](size_t i) -> bool {
    if (i == n) return true;
    for (size_t j = 0; j < n; ++j) {
      if (used[j] || cb[j] != ca[i]) continue;
      bool ok = true;
      for (size_t k = 0; k < i && ok; ++k) {
        int mk = map[k];
        ok = same_edges(static_cast<int>(i), static_cast<int>(k), static_cast<int>(j), mk) &&
             same_edges(static_cast<int>(k), static_cast<int>(i), mk, static_cast<int>(j));
      }
      if (!ok) continue;
      map[i] = static_cast<int>(j);
      used[j] = 1;
      if (assign(i + 1)) return true;
      used[j] = 0;
      map[i] = -1;
    }
    return false;
  };
  return assign(0);
}

}  // namespace detail

inline bool chains_equivalent(const Chain2D& a, const Chain2D& b) {
  if (!(a.surface == b.surface)) throw DomainError("chains live on different surfaces");
  require_valid(a);
  require_valid(b);
  return detail::graphs_isomorphic(detail::build_graph(a, nullptr), detail::build_graph(b, nullptr));
}

inline bool chains_equivalent(const AlphaChain2D& a, const AlphaChain2D& b) {
  if (!(a.chain.surface == b.chain.surface)) throw DomainError("chains live on different surfaces");
  require_valid(a);
  require_valid(b);
  return detail::graphs_isomorphic(detail::build_graph(a.chain, &a.arc_signs),
                                   detail::build_graph(b.chain, &b.arc_signs));
}

// The alpha signs determine v1 only up to the orientation of the fiber; the chain is compatible
// when the curve systems agree, the signs flip at every cusp and v1 lies on the L1 side.
inline bool alpha_consistency(const AlphaChain2D& alpha, const Chain2D& chain) {
  const Chain2D& x = alpha.chain;
  if (!(x.surface == chain.surface) || x.regions != chain.regions || x.circles.size() != chain.circles.size())
    throw DomainError("alpha-chain and chain describe different curve systems");
  for (const auto& f : chain.circles) {
    const FoldCircle* g = x.circle(f.id);
    if (!g || g->regions != f.regions || g->cusps != f.cusps || g->cls != f.cls)
      throw DomainError("alpha-chain and chain describe different curve systems");
  }
  for (int eps : {1, -1}) {
    bool ok = true;
    for (const auto& f : chain.circles) {
      auto it = alpha.arc_signs.find(f.id);
      if (it == alpha.arc_signs.end() || static_cast<int>(it->second.size()) != f.arc_count()) {
        ok = false;
        break;
      }
      const auto& sg = it->second;
      for (size_t i = 0; i < sg.size() && ok; ++i) {
        int here = eps * sg[i];
        if (here != 1 && here != -1) ok = false;
        if (!f.cusps.empty() && here == eps * sg[(i + 1) % sg.size()]) ok = false;
      }
      if (chain.region_at(f.v1_into).side != Side::L1) ok = false;
      if (!ok) break;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace caustic
