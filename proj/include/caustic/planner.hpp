#pragma once

#include "caustic/moves.hpp"

namespace caustic {

struct PlanGoal {
  std::optional<Chain2D> target;  // empty: fold-only

  static PlanGoal fold_only() { return {}; }
  static PlanGoal to(Chain2D t) { return {std::move(t)}; }
};

enum class PlanStatus { found, not_found, impossible };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::found: return "found";
    case PlanStatus::not_found: return "not_found";
    case PlanStatus::impossible: return "impossible";
  }
  return "not_found";
}

struct PlanResult {
  PlanStatus status = PlanStatus::not_found;
  SurgerySequence sequence;
  std::string message;
};

inline AlphaChain2D strip_double_folds(const AlphaChain2D& a) {
  AlphaChain2D out{strip_double_folds(a.chain), {}};
  for (const auto& f : out.chain.circles) out.arc_signs[f.id] = a.arc_signs.at(f.id);
  return out;
}

namespace detail {

// Cheap invariant used to bucket states before the equivalence test.
inline Code state_key(const Chain2D& c, const SignMap* sg) {
  std::vector<Code> codes;
  for (const auto& f : c.circles) codes.push_back(circle_code(c, f, sg ? &sg->at(f.id) : nullptr));
  std::sort(codes.begin(), codes.end());
  std::vector<std::array<int, 4>> regs;
  for (const auto& r : c.regions)
    regs.push_back({r.euler_char, side_sign(r.side), r.boundary_components,
                    static_cast<int>(r.incident_circles.size())});
  std::sort(regs.begin(), regs.end());
  Code key;
  for (const auto& r : regs) key.insert(key.end(), r.begin(), r.end());
  key.push_back(-1000);
  for (const auto& cd : codes) {
    key.insert(key.end(), cd.begin(), cd.end());
    key.push_back(-1001);
  }
  return key;
}

inline Code state_key(const Chain2D& c) { return state_key(c, nullptr); }
inline Code state_key(const AlphaChain2D& a) { return state_key(a.chain, &a.arc_signs); }

template <class ChainT>
class Planner {
 public:
  Planner(const PlanGoal& goal, int max_depth) : goal_(goal), max_depth_(max_depth) {
    if (goal_.target) {
      target_ = strip_double_folds(*goal_.target);
      target_cusps_ = target_->cusp_count();
    }
  }

  PlanResult run(const ChainT& start) {
    PlanResult res;
    int h0 = heuristic(start);
    for (int bound = h0; bound <= max_depth_; ++bound) {
      seen_.clear();
      path_.clear();
      if (dfs(start, 0, bound)) {
        res.status = PlanStatus::found;
        ChainT cur = start;
        for (auto st : path_) {
          st.basis = bind_basis(cur, st.basis);
          cur = apply_direct(cur, st.basis);
          res.sequence.push_back(st);
        }
        res.message = "plan of length " + std::to_string(res.sequence.size());
        return res;
      }
    }
    res.status = PlanStatus::not_found;
    res.message = "no plan within depth " + std::to_string(max_depth_);
    return res;
  }

 private:
  int heuristic(const ChainT& c) const {
    int n = base_of(c).cusp_count();
    if (!target_) return n / 2;
    return std::abs(n - target_cusps_) / 2;
  }

  bool is_goal(const ChainT& c) const {
    const Chain2D& base = base_of(c);
    if (!target_) return base.cusp_count() == 0;
    if (base.cusp_count() != target_cusps_) return false;
    return chains_equivalent(strip_double_folds(base), *target_);
  }

  // true when an equivalent state was already expanded at the same or smaller depth
  bool visited(const ChainT& c, int depth) {
    auto& bucket = seen_[state_key(c)];
    for (auto& [other, d] : bucket)
      if (chains_equivalent(other, c)) {
        if (d <= depth) return true;
        d = depth;
        return false;
      }
    bucket.emplace_back(c, depth);
    return false;
  }

  bool dfs(const ChainT& c, int depth, int bound) {
    if (is_goal(c)) return true;
    if (depth + heuristic(c) > bound || depth >= bound) return false;
    if (visited(c, depth)) return false;
    for (auto gen : {&band_moves<ChainT>, &double_fold_moves<ChainT>, &pair_moves<ChainT>, &birth_moves<ChainT>}) {
      for (auto& m : gen(c)) {
        int d = depth + static_cast<int>(m.steps.size());
        if (d > bound) continue;
        for (const auto& st : m.steps) path_.push_back(st);
        if (dfs(m.result, d, bound)) return true;
        path_.resize(path_.size() - m.steps.size());
      }
    }
    return false;
  }

  PlanGoal goal_;
  int max_depth_;
  std::optional<Chain2D> target_;
  int target_cusps_ = 0;
  std::map<Code, std::vector<std::pair<ChainT, int>>> seen_;
  SurgerySequence path_;
};

template <class ChainT>
PlanResult plan(const ChainT& chain, const PlanGoal& goal, int max_depth) {
  require_valid(chain);
  const Chain2D& base = base_of(chain);
  if (goal.target) {
    require_valid(*goal.target);
    if (!(goal.target->surface == base.surface))
      return {PlanStatus::impossible, {}, "conserved invariants differ: surfaces differ"};
    if (euler_value(*goal.target) != euler_value(base))
      return {PlanStatus::impossible, {}, "conserved invariants differ: euler value"};
    if (!(maslov_class(*goal.target) == maslov_class(base)))
      return {PlanStatus::impossible, {}, "conserved invariants differ: Maslov class"};
  }
  return Planner<ChainT>(goal, max_depth).run(chain);
}

}  // namespace detail

inline PlanResult plan_surgeries(const Chain2D& chain, const PlanGoal& goal, int max_depth = 8) {
  return detail::plan(chain, goal, max_depth);
}

inline PlanResult plan_surgeries(const AlphaChain2D& chain, const PlanGoal& goal, int max_depth = 8) {
  return detail::plan(chain, goal, max_depth);
}

}  // namespace caustic
