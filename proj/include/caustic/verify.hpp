#pragma once

#include <cstdio>

#include "caustic/io.hpp"
#include "caustic/property.hpp"

namespace caustic {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "fail";
}

struct Measurement {
  std::string quantity;
  std::string measured;
  std::string expected;
  std::string tolerance;
  bool ok = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  Status status = Status::fail;
  std::string message;
  std::vector<Measurement> measurements;
  double seconds = 0;

  void measure(std::string q, std::string got, std::string want, std::string tol, bool ok) {
    measurements.push_back({std::move(q), std::move(got), std::move(want), std::move(tol), ok});
  }
  // pass iff every measurement holds
  void settle() {
    status = Status::pass;
    for (const auto& m : measurements)
      if (!m.ok) {
        status = Status::fail;
        if (message.empty()) message = m.quantity + " = " + m.measured + ", expected " + m.expected;
      }
  }
};

struct VerifyReport {
  Tolerances tol;
  std::uint64_t seed = default_seed;
  std::vector<CriterionResult> criteria;

  bool ok() const {
    for (const auto& c : criteria)
      if (c.status == Status::fail) return false;
    return true;
  }
};

namespace detail {

inline std::string fmt(double x, const char* f = "%.3g") {
  char b[64];
  std::snprintf(b, sizeof b, f, x);
  return b;
}

inline std::string yes(bool b) { return b ? "true" : "false"; }

template <class F>
CriterionResult run_criterion(int id, std::string name, F&& body) {
  Stopwatch sw;
  CriterionResult c;
  c.id = id;
  c.name = std::move(name);
  try {
    body(c);
    if (c.status != Status::skipped) c.settle();
  } catch (const std::exception& e) {
    c.status = Status::fail;
    c.message = e.what();
  }
  c.seconds = sw.seconds();
  return c;
}

inline double periodic_gap(double a, double b, double p) {
  double d = std::fmod(std::abs(a - b), p);
  return std::min(d, p - d);
}

inline int cusp_total(const Chain2D& c) {
  int n = 0;
  for (const auto& f : c.circles) n += static_cast<int>(f.cusps.size());
  return n;
}

}  // namespace detail

// Collapse family at eps = 0.1 is shared by criteria 1 to 4.
inline constexpr double collapse_eps = 0.1;

inline CriterionResult criterion_collapse_cusps(const Tolerances& tol, std::optional<Extraction>& out) {
  return detail::run_criterion(1, "collapse_cusp_count", [&](CriterionResult& c) {
    Tolerances t = tol;
    t.grid_n = std::max(t.grid_n, 64);
    detail::Stopwatch sw;
    Extraction x = extract_chain(collapse_family(collapse_eps), t);
    double secs = sw.seconds();
    out = x;
    const auto& curves = x.report.curves;
    c.measure("closed fold curves", std::to_string(curves.size()), "1", "exact", curves.size() == 1);
    if (curves.size() != 1) return;
    const FoldCurve& fc = curves.front();
    c.measure("fiber winding", std::to_string(std::abs(fc.winding_in_fiber)), "1", "exact",
              fc.closed && std::abs(fc.winding_in_fiber) == 1);
    c.measure("cusps", std::to_string(fc.cusps.size()), "4", "exact", fc.cusps.size() == 4);
    const double pi = std::numbers::pi;
    std::vector<double> xis{0, pi / 2, pi, 3 * pi / 2};
    std::vector<Vec2> qs{{0.2, 0}, {0, 0.2}, {-0.2, 0}, {0, -0.2}};
    std::vector<bool> xi_used(4, false), q_used(4, false);
    double worst_xi = 0, worst_q = 0;
    bool matched = fc.cusps.size() == 4;
    for (const auto& k : fc.cusps) {
      int bx = -1, bq = -1;
      double dx = 1e300, dq = 1e300;
      for (int i = 0; i < 4; ++i) {
        double gx = detail::periodic_gap(k.location[2], xis[static_cast<size_t>(i)], 2 * pi);
        double gq = std::hypot(k.location[0] - qs[static_cast<size_t>(i)][0], k.location[1] - qs[static_cast<size_t>(i)][1]);
        if (!xi_used[static_cast<size_t>(i)] && gx < dx) dx = gx, bx = i;
        if (!q_used[static_cast<size_t>(i)] && gq < dq) dq = gq, bq = i;
      }
      if (bx < 0 || bq < 0) {
        matched = false;
        break;
      }
      xi_used[static_cast<size_t>(bx)] = q_used[static_cast<size_t>(bq)] = true;
      worst_xi = std::max(worst_xi, dx);
      worst_q = std::max(worst_q, dq);
    }
    c.measure("max |dxi| to {0, pi/2, pi, 3pi/2}", detail::fmt(worst_xi), "0", "1e-6", matched && worst_xi <= 1e-6);
    c.measure("max |dq| to (+-0.2, 0), (0, +-0.2)", detail::fmt(worst_q), "0", "1e-6", matched && worst_q <= 1e-6);
    c.measure("runtime s", detail::fmt(secs), "< 10", "", secs < 10);
  });
}

inline CriterionResult criterion_collapse_euler(const std::optional<Extraction>& x) {
  return detail::run_criterion(2, "collapse_euler_balance", [&](CriterionResult& c) {
    if (!x) throw DomainError("collapse extraction unavailable");
    int n1 = cusps_into(x->chain, Side::L1), n2 = cusps_into(x->chain, Side::L2);
    c.measure("n1", std::to_string(n1), "2", "exact", n1 == 2);
    c.measure("n2", std::to_string(n2), "2", "exact", n2 == 2);
    c.measure("euler_value", std::to_string(euler_value(x->chain)), "0", "exact", euler_value(x->chain) == 0);
  });
}

inline CriterionResult criterion_collapse_signs(const std::optional<Extraction>& x) {
  return detail::run_criterion(3, "collapse_alpha_signs", [&](CriterionResult& c) {
    if (!x) throw DomainError("collapse extraction unavailable");
    if (x->alpha.arc_signs.size() != 1) throw DomainError("expected one fold circle");
    const auto& s = x->alpha.arc_signs.begin()->second;
    std::string got;
    for (int v : s) got += v > 0 ? '+' : '-';
    c.measure("arc signs", got, "+-+-", "exact", s == std::vector<int>{1, -1, 1, -1});
  });
}

inline CriterionResult criterion_cusp_elimination(const std::optional<Extraction>& x) {
  return detail::run_criterion(4, "cusp_elimination_plan", [&](CriterionResult& c) {
    if (!x) throw DomainError("collapse extraction unavailable");
    detail::Stopwatch sw;
    PlanResult p = plan_surgeries(x->chain, PlanGoal::fold_only(), 8);
    bool found = p.status == PlanStatus::found;
    c.measure("chain plan status", to_string(p.status), "found", "exact", found);
    c.measure("chain plan length", std::to_string(p.sequence.size()), "2", "exact", p.sequence.size() == 2);
    bool bands = !p.sequence.empty();
    for (const auto& st : p.sequence) bands = bands && st.basis.is_band() && st.direction == Direction::direct;
    c.measure("all steps (1,1) direct", detail::yes(bands), "true", "exact", bands);
    if (found) {
      Chain2D end = apply_sequence(x->chain, p.sequence);
      c.measure("chain plan ends fold-only", detail::yes(detail::cusp_total(end) == 0), "true", "exact",
                detail::cusp_total(end) == 0);
      SurgeryBasis b = with_variant(p.sequence.front().basis, Variant::alpha);
      b.binding.reset();
      bool rejected = !check_basis(x->alpha, b).ok();
      c.measure("same arcs rejected for the alpha-chain", detail::yes(rejected), "true", "exact", rejected);
    }
    PlanResult pa = plan_surgeries(x->alpha, PlanGoal::fold_only(), 8);
    bool afound = pa.status == PlanStatus::found;
    c.measure("alpha plan status (depth 8)", to_string(pa.status), "found", "exact", afound);
    if (afound) {
      AlphaChain2D end = apply_sequence(x->alpha, pa.sequence);
      c.measure("alpha plan ends fold-only", detail::yes(detail::cusp_total(end.chain) == 0), "true", "exact",
                detail::cusp_total(end.chain) == 0);
    }
    double secs = sw.seconds();
    c.measure("runtime s", detail::fmt(secs), "< 5", "", secs < 5);
  });
}

inline CriterionResult criterion_mushroom(const Tolerances& tol) {
  return detail::run_criterion(5, "mushroom_double_fold", [&](CriterionResult& c) {
    Extraction before = extract_chain(mushroom_family(0), tol);
    Extraction after = extract_chain(mushroom_family(-0.05), tol);
    const Chain2D& ch = after.chain;
    c.measure("fold circles", std::to_string(ch.circles.size()), "2", "exact", ch.circles.size() == 2);
    c.measure("cusps", std::to_string(detail::cusp_total(ch)), "0", "exact", detail::cusp_total(ch) == 0);
    bool concentric = ch.circles.size() == 2;
    bool opposite = false;
    if (concentric) {
      const auto &f = ch.circles[0], &g = ch.circles[1];
      int shared = -1;
      for (int r : f.regions)
        if (g.adjacent(r)) shared = r;
      concentric = shared >= 0 && f.cls == Homotopy::null && g.cls == Homotopy::null;
      // v1 leaving the annulus between them on both sides points one inward, one outward
      opposite = concentric && f.v1_into != shared && g.v1_into != shared;
    }
    c.measure("concentric null circles", detail::yes(concentric), "true", "exact", concentric);
    c.measure("opposite v1 coorientations", detail::yes(opposite), "true", "exact", opposite);
    c.measure("euler_value before", std::to_string(euler_value(before.chain)), "0", "exact",
              euler_value(before.chain) == 0);
    c.measure("euler_value after", std::to_string(euler_value(ch)), "0", "exact", euler_value(ch) == 0);
    bool eq = chains_equivalent(ch, catalog::double_fold_disk());
    c.measure("equivalent to the double fold on a disk", detail::yes(eq), "true", "exact", eq);
  });
}

inline CriterionResult criterion_morin(const Tolerances& tol) {
  return detail::run_criterion(6, "morin_realization", [&](CriterionResult& c) {
    detail::Stopwatch sw;
    for (auto k : {MorinKind::birth, MorinKind::band, MorinKind::pair}) {
      RealizationReport r = verify_surgery_realization(morin_path(k), morin_expectation(k), tol, 10);
      std::string tag = std::string("(") + to_string(k) + ")";
      c.measure(tag + " realization", r.success ? "success" : r.message, "success", "exact", r.success);
      int emb = 0;
      for (bool e : r.embedded) emb += e ? 1 : 0;
      c.measure(tag + " embedded tau samples", std::to_string(emb) + "/" + std::to_string(r.embedded.size()), "10/10",
                "exact", emb == 10 && r.embedded.size() == 10);
    }
    double secs = sw.seconds();
    c.measure("runtime s", detail::fmt(secs), "< 30", "", secs < 30);
  });
}

inline CriterionResult criterion_sigma2() {
  return detail::run_criterion(7, "sigma2_passage", [&](CriterionResult& c) {
    for (double tau : {-0.1, 0.0, 0.05}) {
      Sigma2Report r = detect_sigma2_events(QuadRot{tau});
      std::string tag = "tau=" + detail::fmt(tau, "%g");
      size_t want = tau < 0 ? 0 : 1;
      c.measure(tag + " conclusive", detail::yes(!r.inconclusive), "true", "exact", !r.inconclusive);
      c.measure(tag + " events", std::to_string(r.events.size()), std::to_string(want), "exact", r.events.size() == want);
      if (want == 1 && r.events.size() == 1) {
        const auto& e = r.events.front();
        double th = std::atan2(1.0, 2 * tau);
        double dq = std::hypot(e.q[0], e.q[1]);
        c.measure(tag + " |theta - arccot(2 tau)|", detail::fmt(std::abs(e.theta - th)), "0", "1e-8",
                  std::abs(e.theta - th) <= 1e-8);
        c.measure(tag + " |q|", detail::fmt(dq), "0", "1e-8", dq <= 1e-8);
      }
    }
  });
}

inline CriterionResult criterion_properties(std::uint64_t seed, const Tolerances& tol) {
  return detail::run_criterion(8, "property_suites", [&](CriterionResult& c) {
    detail::Stopwatch sw;
    auto results = std::vector<PropertyResult>{prop_round_trip(seed), prop_conservation(seed), prop_decompose(seed),
                                               prop_extract_valid(seed, 200, tol), prop_derivatives(seed)};
    for (const auto& r : results) {
      std::string got = std::to_string(r.cases) + " cases, " + std::to_string(r.failures) + " failures";
      if (!r.first_failure.empty()) got += " (" + r.first_failure + ")";
      c.measure(r.name, got, ">= 200 cases, 0 failures", "exact", r.ok());
    }
    double secs = sw.seconds();
    c.measure("runtime s", detail::fmt(secs), "< 60", "", secs < 60);
  });
}

inline constexpr int stability_min_grid = 32;

// Fold sets at grid_n and 2 grid_n on the collapse and mushroom families.
inline CriterionResult criterion_stability(const Tolerances& tol) {
  return detail::run_criterion(9, "grid_stability", [&](CriterionResult& c) {
    if (tol.grid_n < stability_min_grid) {
      c.status = Status::skipped;
      c.message = "skipped-below-minimum: grid_n " + std::to_string(tol.grid_n) + " < " +
                  std::to_string(stability_min_grid);
      return;
    }
    Tolerances fine = tol;
    fine.grid_n = std::min(512, 2 * tol.grid_n);
    for (auto& [name, f] : std::vector<std::pair<std::string, GenFun>>{{"collapse", collapse_family(collapse_eps)},
                                                                          {"mushroom", mushroom_family(-0.05)}}) {
      Extraction a = extract_chain(f, tol), b = extract_chain(f, fine);
      bool same = a.report.circles == b.report.circles && a.report.cusps == b.report.cusps;
      c.measure(name + " circle/cusp counts", std::to_string(a.report.circles) + "/" + std::to_string(a.report.cusps),
                std::to_string(b.report.circles) + "/" + std::to_string(b.report.cusps), "exact", same);
      double h = fold_hausdorff(f, a.report.curves, b.report.curves, tol);
      c.measure(name + " Hausdorff", detail::fmt(h), "0", detail::fmt(10 * tol.tol_close), h < 10 * tol.tol_close);
    }
  });
}

inline VerifyReport verify_suite(const Tolerances& tol = {}, std::uint64_t seed = default_seed) {
  VerifyReport rep;
  rep.tol = tol;
  rep.seed = seed;
  std::optional<Extraction> collapse;
  rep.criteria.push_back(criterion_collapse_cusps(tol, collapse));
  rep.criteria.push_back(criterion_collapse_euler(collapse));
  rep.criteria.push_back(criterion_collapse_signs(collapse));
  rep.criteria.push_back(criterion_cusp_elimination(collapse));
  rep.criteria.push_back(criterion_mushroom(tol));
  rep.criteria.push_back(criterion_morin(tol));
  rep.criteria.push_back(criterion_sigma2());
  rep.criteria.push_back(criterion_properties(seed, tol));
  rep.criteria.push_back(criterion_stability(tol));
  return rep;
}

inline std::string summary_line(const CriterionResult& c) {
  std::string tag = c.status == Status::pass ? "PASS" : (c.status == Status::fail ? "FAIL" : "SKIP");
  std::string line = "[" + tag + "] " + std::to_string(c.id) + " " + c.name;
  if (!c.message.empty()) line += ": " + c.message;
  line += " (" + detail::fmt(c.seconds, "%.2f") + " s)";
  return line;
}

// Timings stay out of the JSON so reports are reproducible.
inline json to_json(const VerifyReport& r) {
  json cs = json::array();
  for (const auto& c : r.criteria) {
    json ms = json::array();
    for (const auto& m : c.measurements) {
      if (m.quantity == "runtime s") {
        ms.push_back({{"quantity", "runtime within limit"}, {"expected", m.expected}, {"ok", m.ok}});
        continue;
      }
      ms.push_back({{"quantity", m.quantity},
                    {"measured", m.measured},
                    {"expected", m.expected},
                    {"tolerance", m.tolerance},
                    {"ok", m.ok}});
    }
    cs.push_back({{"id", c.id}, {"name", c.name}, {"status", to_string(c.status)}, {"message", c.message},
                  {"measurements", ms}});
  }
  return {{"schema_version", schema_version}, {"kind", "verify_report"}, {"ok", r.ok()},
          {"seed", r.seed}, {"tolerances", to_json(r.tol)}, {"criteria", cs}};
}

}  // namespace caustic
