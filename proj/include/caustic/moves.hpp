#pragma once

#include <type_traits>

#include "caustic/surgery.hpp"

namespace caustic {

namespace detail {

inline const Chain2D& base_of(const Chain2D& c) { return c; }
inline const Chain2D& base_of(const AlphaChain2D& a) { return a.chain; }

template <class ChainT>
constexpr Variant variant_of = std::is_same_v<ChainT, AlphaChain2D> ? Variant::alpha : Variant::chain;

// check_basis + apply_direct in one rewrite; the input is assumed valid.
inline std::optional<Chain2D> try_direct(const Chain2D& c, const SurgeryBasis& b) {
  if (b.variant != Variant::chain) return std::nullopt;
  auto res = rewrite_direct(c, nullptr, b);
  if (!res.report.ok() || !validate_chain(res.chain).ok()) return std::nullopt;
  return res.chain;
}

inline std::optional<AlphaChain2D> try_direct(const AlphaChain2D& c, const SurgeryBasis& b) {
  if (b.variant != Variant::alpha) return std::nullopt;
  auto res = rewrite_direct(c.chain, &c.arc_signs, b);
  if (!res.report.ok()) return std::nullopt;
  AlphaChain2D out{res.chain, res.signs};
  if (!validate_chain(out).ok()) return std::nullopt;
  return out;
}

inline int region_genus(const Region& r) {
  int b = static_cast<int>(r.incident_circles.size()) + r.boundary_components;
  return (2 - r.euler_char - b) / 2;
}

}  // namespace detail

// Every way a band with both ends on `circle` may cut `region`, in a fixed order with the
// disk piece first. Candidates are not validated.
inline std::vector<SplitSpec> split_specs(const Chain2D& c, int region, int circle) {
  const Region& R = c.region_at(region);
  std::vector<int> others = R.incident_circles;
  detail::erase_id(others, circle);
  int g = std::max(0, detail::region_genus(R));

  std::vector<std::pair<Homotopy, int>> classes{{Homotopy::null, 1}};
  std::vector<Homotopy> labels;
  if (detail::label_supported(c.surface, Homotopy::essential_a)) labels.push_back(Homotopy::essential_a);
  if (c.surface.genus == 1) labels.push_back(Homotopy::essential_b);
  if (c.surface.genus == 1 && c.surface.boundary_count == 2) labels.push_back(Homotopy::boundary_parallel_1);
  for (Homotopy h : labels)
    for (int o : {1, -1}) classes.emplace_back(h, o);

  std::vector<std::vector<int>> subsets;
  if (others.size() <= 10) {
    size_t n = others.size();
    for (size_t k = 0; k <= n; ++k)
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<size_t>(__builtin_popcount(mask)) != k) continue;
        std::vector<int> s;
        for (size_t i = 0; i < n; ++i)
          if (mask & (1u << i)) s.push_back(others[i]);
        subsets.push_back(s);
      }
  } else {
    subsets = {{}, others};
  }

  std::vector<SplitSpec> out;
  for (const auto& sub : subsets)
    for (int xb = 0; xb <= R.boundary_components; ++xb)
      for (int gx = 0; gx <= g; ++gx)
        for (const auto& [h, o] : classes) {
          SplitSpec sp;
          sp.kind = SplitKind::separating;
          sp.x_circles = sub;
          sp.x_boundary = xb;
          sp.x_euler = 2 - 2 * gx - (static_cast<int>(sub.size()) + 1 + xb);
          sp.x_cls = h;
          sp.x_orientation = o;
          out.push_back(sp);
        }
  if (g >= 1)
    for (const auto& [h, o] : classes) {
      SplitSpec sp;
      sp.kind = SplitKind::nonseparating;
      sp.x_euler = 0;
      sp.x_cls = h;
      sp.x_orientation = o;
      out.push_back(sp);
    }
  return out;
}

template <class ChainT>
struct Move {
  SurgerySequence steps;
  ChainT result;
};

template <class ChainT>
std::vector<Move<ChainT>> band_moves(const ChainT& chain) {
  constexpr Variant V = detail::variant_of<ChainT>;
  const Chain2D& c = detail::base_of(chain);
  std::vector<Move<ChainT>> out;
  for (const auto& R : c.regions) {
    std::vector<std::pair<int, int>> ends;  // (circle, cusp)
    for (const auto& f : c.circles)
      if (f.adjacent(R.id))
        for (const auto& k : f.cusps)
          if (k.v2_into == R.id) ends.emplace_back(f.id, k.id);
    for (size_t i = 0; i < ends.size(); ++i)
      for (size_t j = i + 1; j < ends.size(); ++j) {
        auto [ci, ki] = ends[i];
        auto [cj, kj] = ends[j];
        std::vector<std::optional<SplitSpec>> splits;
        if (ci == cj)
          for (auto& sp : split_specs(c, R.id, ci)) splits.emplace_back(sp);
        else
          splits.emplace_back(std::nullopt);
        for (auto& sp : splits) {
          SurgeryBasis b = band_basis(R.id, ki, kj, sp, V);
          if (auto r = detail::try_direct(chain, b)) out.push_back({{{b, Direction::direct}}, std::move(*r)});
        }
      }
  }
  return out;
}

template <class ChainT>
std::vector<Move<ChainT>> double_fold_moves(const ChainT& chain) {
  constexpr Variant V = detail::variant_of<ChainT>;
  const Chain2D& c = detail::base_of(chain);
  std::vector<Move<ChainT>> out;
  for (const auto& R : c.regions) {
    // chain: the two coorientation patterns; alpha: the two sign patterns
    for (bool flag : {true, false}) {
      std::optional<bool> nu;
      if (V == Variant::chain) nu = flag;
      SurgeryBasis b1 = birth_basis(R.id, nu, V);
      auto mid = detail::try_direct(chain, b1);
      if (!mid) continue;
      const Chain2D& m = detail::base_of(*mid);
      const FoldCircle& f = m.circle_at(c.next_circle_id());
      int ka = f.cusps[0].id, kb = f.cusps[1].id;
      if (V == Variant::alpha && !flag) std::swap(ka, kb);
      SurgeryBasis b2 = band_basis(R.id, ka, kb, disk_split(), V);
      if (auto r = detail::try_direct(*mid, b2))
        out.push_back({{{b1, Direction::direct}, {b2, Direction::direct}}, std::move(*r)});
    }
  }
  return out;
}

template <class ChainT>
std::vector<Move<ChainT>> pair_moves(const ChainT& chain) {
  constexpr Variant V = detail::variant_of<ChainT>;
  const Chain2D& c = detail::base_of(chain);
  std::vector<Move<ChainT>> out;
  for (const auto& f : c.circles)
    for (int arc = 0; arc < f.arc_count(); ++arc)
      for (int first : {f.regions[0], f.regions[1]}) {
        SurgeryBasis b = pair_basis(f.id, arc, first, V);
        if (auto r = detail::try_direct(chain, b)) out.push_back({{{b, Direction::direct}}, std::move(*r)});
      }
  return out;
}

template <class ChainT>
std::vector<Move<ChainT>> birth_moves(const ChainT& chain) {
  constexpr Variant V = detail::variant_of<ChainT>;
  const Chain2D& c = detail::base_of(chain);
  std::vector<Move<ChainT>> out;
  for (const auto& R : c.regions) {
    std::vector<std::optional<bool>> combos;
    if (V == Variant::chain) combos = {true, false};
    else combos = {std::nullopt};
    for (auto nu : combos) {
      SurgeryBasis b = birth_basis(R.id, nu, V);
      if (auto r = detail::try_direct(chain, b)) out.push_back({{{b, Direction::direct}}, std::move(*r)});
    }
  }
  return out;
}

}  // namespace caustic
