#pragma once

#include "caustic/moves.hpp"

namespace caustic {

// An embedded arc inside `region` from a fold arc of the configuration to a fold arc of
// another circle bounding the same region.
struct WitnessArc {
  int region = -1;
  int start_circle = -1;
  int start_arc = 0;
  int end_circle = -1;
  int end_arc = 0;

  bool operator==(const WitnessArc&) const = default;
};

namespace detail {

// Where the post-image configuration of an inverse surgery sits in the chain.
struct InverseSite {
  int region = -1;            // lips host, or the strip region of a band
  int circle = -1;            // lips circle, or the circle carrying the cusp pair
  std::vector<int> cusps;     // lips cusps, or the cancelling pair in circle order
  std::vector<int> circles;   // band: circles the band touches after the surgery
  std::array<int, 2> side_arcs{0, 0};
};

inline InverseSite inverse_site(const Chain2D& c, const SurgeryBasis& b) {
  InverseSite s;
  if (b.is_birth()) {
    const FoldCircle* lips = nullptr;
    if (b.binding) {
      for (const auto& f : b.binding->post.circles) {
        bool fresh = std::none_of(b.binding->pre.circles.begin(), b.binding->pre.circles.end(),
                                  [&](const FoldCircle& g) { return g.id == f.id; });
        if (fresh) lips = c.circle(f.id);
      }
    } else {
      for (const auto& f : c.circles) {
        if (b.circle >= 0 && f.id != b.circle) continue;
        if (f.cls != Homotopy::null || f.cusps.size() != 2 || f.cusps[0].v2_into != f.cusps[1].v2_into) continue;
        int R = f.cusps[0].v2_into;
        if (b.region >= 0 && R != b.region) continue;
        const Region& D = c.region_at(f.other(R));
        if (D.euler_char == 1 && D.boundary_components == 0 && D.incident_circles.size() == 1) {
          lips = &f;
          break;
        }
      }
    }
    if (!lips || lips->cusps.size() != 2) throw PreconditionError("no circle to remove at the site");
    s.circle = lips->id;
    s.region = lips->cusps[0].v2_into;
    s.cusps = {lips->cusps[0].id, lips->cusps[1].id};
  } else if (b.is_pair()) {
    const FoldCircle* f = c.circle(b.circle);
    if (!f || f->cusps.size() < 2) throw PreconditionError("circle carries no cusp pair to cancel");
    s.circle = f->id;
    if (b.binding) {
      const FoldCircle* before = nullptr;
      for (const auto& g : b.binding->pre.circles)
        if (g.id == f->id) before = &g;
      for (const auto& k : f->cusps)
        if (!before || before->cusp_index(k.id) < 0) s.cusps.push_back(k.id);
    } else if (b.cusp_a >= 0) {
      s.cusps = {b.cusp_a, b.cusp_b};
    } else {
      size_t n = f->cusps.size();
      size_t i = n == 2 ? 0 : (static_cast<size_t>(b.arc_position) + 1) % n;
      s.cusps = {f->cusps[i].id, f->cusps[(i + 1) % n].id};
    }
    if (s.cusps.size() != 2) throw PreconditionError("cusp pair not found at the site");
  } else if (b.is_band()) {
    if (!b.binding) throw PreconditionError("inverse band surgery needs a bound basis");
    const auto& post = b.binding->post.circles;
    const auto& pre = b.binding->pre.circles;
    auto pre_circle = [&](int cusp) -> const FoldCircle* {
      for (const auto& g : pre)
        if (g.cusp_index(cusp) >= 0) return &g;
      return nullptr;
    };
    const FoldCircle* A = pre_circle(b.cusp_a);
    const FoldCircle* B = pre_circle(b.cusp_b);
    if (!A || !B) throw PreconditionError("binding does not record the band ends");
    if (A->id != B->id) {
      const FoldCircle& M = c.circle_at(std::min(A->id, B->id));
      s.circles = {M.id};
      s.region = M.other(b.region);
      int n = static_cast<int>(M.cusps.size());
      int m = static_cast<int>(A->cusps.size());
      s.side_arcs = {n == 0 ? 0 : (m - 1 + n - 1) % n, n == 0 ? 0 : n - 1};
    } else {
      int xid = A->id, yid = -1;
      for (const auto& g : post)
        if (g.id != xid) yid = g.id;
      const FoldCircle& X = c.circle_at(xid);
      const FoldCircle& Y = c.circle_at(yid);
      s.circles = {X.id, Y.id};
      s.region = X.other(b.region);
      s.side_arcs = {X.arc_count() - 1, Y.arc_count() - 1};
    }
  } else {
    throw PreconditionError("unknown surgery kind");
  }
  return s;
}

inline int arc_sign(const Chain2D&, const SignMap* sg, int circle, int arc) {
  if (!sg) return 0;
  return sg->at(circle).at(static_cast<size_t>(arc));
}

template <class ChainT>
int v2_of(const ChainT& chain, int cusp) {
  const Chain2D& c = base_of(chain);
  const FoldCircle& f = c.circle_at(c.circle_of_cusp(cusp));
  return f.cusps[static_cast<size_t>(f.cusp_index(cusp))].v2_into;
}

// Bands joining two given cusps: both orders and every split when they share a circle.
template <class ChainT>
std::vector<SurgeryBasis> band_candidates(const ChainT& chain, int ka, int kb) {
  constexpr Variant V = variant_of<ChainT>;
  const Chain2D& c = base_of(chain);
  std::vector<SurgeryBasis> out;
  int ca = c.circle_of_cusp(ka), cb = c.circle_of_cusp(kb);
  if (ca < 0 || cb < 0) return out;
  int region = v2_of(chain, ka);
  if (v2_of(chain, kb) != region) return out;
  if (ca != cb) {
    out.push_back(band_basis(region, ka, kb, std::nullopt, V));
    return out;
  }
  for (const auto& sp : split_specs(c, region, ca)) {
    out.push_back(band_basis(region, ka, kb, sp, V));
    out.push_back(band_basis(region, kb, ka, sp, V));
  }
  return out;
}

template <class ChainT>
struct Search {
  const ChainT& target;
  SurgerySequence path;

  bool matches(const ChainT& c) const { return chains_equivalent(c, target); }

  template <class Next>
  bool step(const ChainT& c, const SurgeryBasis& b, Next&& next) {
    auto r = try_direct(c, b);
    if (!r) return false;
    path.push_back({b, Direction::direct});
    if (next(*r)) return true;
    path.pop_back();
    return false;
  }

  // (2,0) on `circle` at `arc`; hands the new cusps (into `into`, into the other side) to next.
  template <class Next>
  bool pair_into(const ChainT& c, int circle, int arc, int into, Next&& next) {
    const Chain2D& base = base_of(c);
    const FoldCircle& f = base.circle_at(circle);
    int k = base.next_cusp_id();
    for (int first : {into, f.other(into)}) {
      int u = first == into ? k : k + 1, w = first == into ? k + 1 : k;
      if (step(c, pair_basis(circle, arc, first, variant_of<ChainT>), [&](const ChainT& r) { return next(r, u, w); }))
        return true;
    }
    return false;
  }

  template <class Next>
  bool band(const ChainT& c, int ka, int kb, Next&& next) {
    for (const auto& b : band_candidates(c, ka, kb))
      if (step(c, b, next)) return true;
    return false;
  }

  bool band_last(const ChainT& c, int ka, int kb) {
    return band(c, ka, kb, [&](const ChainT& r) { return matches(r); });
  }
};

template <class ChainT>
std::optional<SurgerySequence> search_decomposition(const ChainT& chain, const SurgeryBasis& b, const WitnessArc& w,
                                                    const ChainT& target) {
  const Chain2D& c = base_of(chain);
  InverseSite site = inverse_site(c, b);
  Search<ChainT> s{target, {}};
  bool found = false;

  if (b.is_pair()) {
    // pair x (into Q), y; cancel x against a new cusp on the far circle, then y against its partner
    const FoldCircle& C = c.circle_at(site.circle);
    int Q = w.region;
    int x = site.cusps[0], y = site.cusps[1];
    if (C.cusps[static_cast<size_t>(C.cusp_index(x))].v2_into != Q) std::swap(x, y);
    found = s.pair_into(chain, w.end_circle, w.end_arc, Q, [&](const ChainT& c1, int u, int wc) {
      return s.band(c1, x, u, [&](const ChainT& c2) { return s.band_last(c2, y, wc); });
    });
  } else if (b.is_birth()) {
    int R = site.region;
    int l1 = site.cusps[0], l2 = site.cusps[1];
    found = s.pair_into(chain, w.end_circle, w.end_arc, R, [&](const ChainT& c1, int u1, int w1) {
      int arcs = base_of(c1).circle_at(w.end_circle).arc_count();
      for (int p2 = 0; p2 < arcs; ++p2) {
        bool ok = s.pair_into(c1, w.end_circle, p2, R, [&](const ChainT& c2, int u2, int w2) {
          for (auto [l, lo] : {std::pair{l1, l2}, std::pair{l2, l1}})
            for (auto [u, uo] : {std::pair{u1, u2}, std::pair{u2, u1}}) {
              bool hit = s.band(c2, l, u, [&](const ChainT& c3) {
                return s.band(c3, lo, uo, [&](const ChainT& c4) { return s.band_last(c4, w1, w2); });
              });
              if (hit) return true;
            }
          return false;
        });
        if (ok) return true;
      }
      return false;
    });
  } else {
    int S = site.region;
    for (int p1 : site.circles) {
      int arcs1 = c.circle_at(p1).arc_count();
      for (int i1 = 0; i1 < arcs1 && !found; ++i1)
        found = s.pair_into(chain, p1, i1, S, [&](const ChainT& c1, int x, int) {
          for (int p2 : site.circles) {
            int arcs2 = base_of(c1).circle_at(p2).arc_count();
            for (int i2 = 0; i2 < arcs2; ++i2) {
              bool ok = s.pair_into(c1, p2, i2, S, [&](const ChainT& c2, int y, int) { return s.band_last(c2, x, y); });
              if (ok) return true;
            }
          }
          return false;
        });
      if (found) break;
    }
  }
  if (!found) return std::nullopt;
  return s.path;
}

template <class ChainT>
std::vector<WitnessArc> witness_candidates(const ChainT& chain, const SurgeryBasis& b) {
  const Chain2D& c = base_of(chain);
  const SignMap* sg = nullptr;
  if constexpr (std::is_same_v<ChainT, AlphaChain2D>) sg = &chain.arc_signs;
  InverseSite site = inverse_site(c, b);
  std::vector<WitnessArc> out;
  auto far_arcs = [&](int Q, int skip, const std::vector<int>& start_arcs, int start_circle) {
    const FoldCircle& S0 = c.circle_at(start_circle);
    for (const auto& f : c.circles) {
      if (f.id == skip || !f.adjacent(Q)) continue;
      if (!sg && ((S0.v1_into == Q) != (f.v1_into == Q))) continue;
      for (int j = 0; j < f.arc_count(); ++j)
        for (int i : start_arcs) {
          if (sg && arc_sign(c, sg, start_circle, i) == arc_sign(c, sg, f.id, j)) continue;
          out.push_back({Q, start_circle, i, f.id, j});
          break;
        }
    }
  };
  if (b.is_pair()) {
    const FoldCircle& C = c.circle_at(site.circle);
    int n = static_cast<int>(C.cusps.size());
    for (int Q : {C.regions[0], C.regions[1]}) {
      int x = site.cusps[0];
      if (C.cusps[static_cast<size_t>(C.cusp_index(x))].v2_into != Q) x = site.cusps[1];
      if (C.cusps[static_cast<size_t>(C.cusp_index(x))].v2_into != Q) continue;
      int entering = (C.cusp_index(x) + n - 1) % n;
      far_arcs(Q, C.id, {entering}, C.id);
      if (C.regions[0] == C.regions[1]) break;
    }
  } else if (b.is_birth()) {
    far_arcs(site.region, site.circle, {0, 1}, site.circle);
  } else {
    out.push_back({site.region, site.circles.front(), site.side_arcs[0], site.circles.back(), site.side_arcs[1]});
  }
  return out;
}

template <class ChainT>
std::optional<WitnessArc> find_witness(const ChainT& chain, const SurgeryBasis& b) {
  try {
    ChainT target = apply_inverse(chain, b);
    for (const auto& w : witness_candidates(chain, b))
      if (search_decomposition(chain, b, w, target)) return w;
  } catch (const PreconditionError&) {
  } catch (const DomainError&) {
  } catch (const StructuralError&) {
  }
  return std::nullopt;
}

template <class ChainT>
SurgerySequence decompose(const ChainT& chain, const SurgeryBasis& b, const std::optional<WitnessArc>& w) {
  if (!w) throw PreconditionError("inverse surgery is not complete: no witness arc");
  ChainT target = apply_inverse(chain, b);
  auto seq = search_decomposition(chain, b, *w, target);
  if (!seq) throw PreconditionError("witness arc does not yield a decomposition");
  ChainT cur = chain;
  for (auto& st : *seq) {
    st.basis = bind_basis(cur, st.basis);
    cur = apply_direct(cur, st.basis);
  }
  return *seq;
}

}  // namespace detail

// The arc is returned only when the direct decomposition it prescribes exists.
inline std::optional<WitnessArc> completeness_witness(const Chain2D& chain, const SurgeryBasis& b) {
  return detail::find_witness(chain, b);
}

inline std::optional<WitnessArc> completeness_witness(const AlphaChain2D& chain, const SurgeryBasis& b) {
  return detail::find_witness(chain, b);
}

inline SurgerySequence decompose_inverse(const Chain2D& chain, const SurgeryBasis& b,
                                         const std::optional<WitnessArc>& witness) {
  return detail::decompose(chain, b, witness);
}

inline SurgerySequence decompose_inverse(const AlphaChain2D& chain, const SurgeryBasis& b,
                                         const std::optional<WitnessArc>& witness) {
  return detail::decompose(chain, b, witness);
}

}  // namespace caustic
