#pragma once

#include <chrono>
#include <deque>
#include <map>

#include "caustic/catalog.hpp"
#include "caustic/chain.hpp"
#include "caustic/numeric.hpp"

namespace caustic {

struct NumericReport {
  std::string family;
  Tolerances tol;
  std::string surface;  // "disk" or "annulus"
  std::vector<FoldCurve> curves;
  std::vector<std::string> warnings;
  int seed_cells = 0;
  int regions = 0, circles = 0, cusps = 0;
  int n1 = 0, n2 = 0;  // cusps whose v2 enters L1 / L2
  double seconds = 0;
};

struct Extraction {
  Chain2D chain;
  AlphaChain2D alpha;
  NumericReport report;
  std::map<int, int> circle_curve;                    // circle id -> index in report.curves
  std::map<int, std::pair<int, int>> cusp_point;     // cusp id -> (curve, index in curve.cusps)

  const CuspPoint& cusp(int id) const {
    auto [c, k] = cusp_point.at(id);
    return report.curves[static_cast<size_t>(c)].cusps[static_cast<size_t>(k)];
  }
};

namespace detail {

// Sign grid of f_xixi over the chart, cut into connected regions.
struct ChartGrid {
  const GenFun& f;
  const Chart& ch;
  int Nu, Nw;
  std::vector<int> sign, label;
  int labels = 0;

  ChartGrid(const GenFun& g, int n) : f(g), ch(*g.chart), Nu(n), Nw(n) {
    sign.resize(static_cast<size_t>(Nu * Nw));
    for (int j = 0; j < Nw; ++j)
      for (int i = 0; i < Nu; ++i) sign[idx(i, j)] = sgn(G(cu(i + 0.5), cw(j + 0.5))) >= 0 ? 1 : -1;
    fill();
  }

  size_t idx(int i, int j) const { return static_cast<size_t>(j * Nu + i); }
  double cu(double x) const { return ch.u.lo + ch.u.length() * x / Nu; }
  double cw(double y) const { return ch.w.lo + ch.w.length() * y / Nw; }
  double du() const { return ch.u.length() / Nu; }
  double dw() const { return ch.w.length() / Nw; }
  double G(double u, double w) const {
    Vec3 p = ch.point(u, w);
    return raw_derivs(f, p[0], p[1], p[2]).xi[2];
  }
  Vec2 grad(double u, double w) const {
    double eu = 1e-5 * ch.u.length(), ew = 1e-5 * ch.w.length();
    return {(G(u + eu, w) - G(u - eu, w)) / (2 * eu), (G(u, w + ew) - G(u, w - ew)) / (2 * ew)};
  }
  int cell_label(double u, double w) const {
    double x = (u - ch.u.lo) / du(), y = (w - ch.w.lo) / dw();
    int i = static_cast<int>(std::floor(x)), j = static_cast<int>(std::floor(y));
    if (ch.u_periodic()) i = ((i % Nu) + Nu) % Nu;
    else i = std::clamp(i, 0, Nu - 1);
    j = std::clamp(j, 0, Nw - 1);
    return label[idx(i, j)];
  }

  void fill() {
    label.assign(sign.size(), -1);
    bool per = ch.u_periodic(), pole = ch.topology == ChartTopology::polar_disk;
    for (int j0 = 0; j0 < Nw; ++j0)
      for (int i0 = 0; i0 < Nu; ++i0) {
        if (label[idx(i0, j0)] >= 0) continue;
        int id = labels++;
        int s = sign[idx(i0, j0)];
        std::deque<std::pair<int, int>> q{{i0, j0}};
        label[idx(i0, j0)] = id;
        auto visit = [&](int i, int j) {
          if (per) i = (i + Nu) % Nu;
          if (i < 0 || i >= Nu || j < 0 || j >= Nw) return;
          if (label[idx(i, j)] >= 0 || sign[idx(i, j)] != s) return;
          label[idx(i, j)] = id;
          q.emplace_back(i, j);
        };
        while (!q.empty()) {
          auto [i, j] = q.front();
          q.pop_front();
          visit(i + 1, j);
          visit(i - 1, j);
          visit(i, j + 1);
          visit(i, j - 1);
          if (pole && j == 0)
            for (int k = 0; k < Nu; ++k) visit(k, 0);
        }
      }
  }

  // cells of each boundary circle of the chart
  std::vector<std::vector<size_t>> boundaries() const {
    std::vector<std::vector<size_t>> out;
    auto row = [&](int j) {
      std::vector<size_t> r;
      for (int i = 0; i < Nu; ++i) r.push_back(idx(i, j));
      return r;
    };
    switch (ch.topology) {
      case ChartTopology::box_disk: {
        std::vector<size_t> b = row(0);
        auto top = row(Nw - 1);
        b.insert(b.end(), top.begin(), top.end());
        for (int j = 0; j < Nw; ++j) {
          b.push_back(idx(0, j));
          b.push_back(idx(Nu - 1, j));
        }
        out.push_back(b);
        break;
      }
      case ChartTopology::cylinder: out = {row(0), row(Nw - 1)}; break;
      case ChartTopology::polar_disk: out = {row(Nw - 1)}; break;
    }
    return out;
  }
};

inline std::vector<Vec2> chart_coords(const GenFun& f, const FoldCurve& c) {
  Periods per(f);
  std::vector<Vec2> uv;
  for (const auto& p : c.points) uv.push_back(f.chart->coords(per.wrap(p, f)));
  return uv;
}

inline double u_step(const Chart& ch, double a, double b) {
  double d = b - a;
  return ch.u_periodic() ? Periods::reduce(d, ch.u.length()) : d;
}

// +1 when the sample order has (grad g, tangent) positive in the oriented chart
inline int chart_orientation(const ChartGrid& g, const std::vector<Vec2>& uv) {
  int vote = 0;
  size_t n = uv.size();
  for (size_t k = 1; k + 1 < n; ++k) {
    Vec2 gr = g.grad(uv[k][0], uv[k][1]);
    Vec2 t{u_step(g.ch, uv[k - 1][0], uv[k + 1][0]), uv[k + 1][1] - uv[k - 1][1]};
    vote += sgn((gr[0] * t[1] - gr[1] * t[0]) * g.ch.orientation);
  }
  return vote >= 0 ? 1 : -1;
}

// Sample indices strictly between cusp k and cusp k+1 of a closed curve.
inline std::vector<int> arc_samples(const FoldCurve& c, size_t k) {
  int n = static_cast<int>(c.points.size()) - 1;  // the last sample repeats the first
  size_t nk = c.cusps.size();
  int a = (c.cusps[k].segment + 1) % n, b = c.cusps[(k + 1) % nk].segment % n;
  std::vector<int> out;
  if (nk > 1 && c.cusps[k].segment == c.cusps[(k + 1) % nk].segment) return out;
  for (int i = a;; i = (i + 1) % n) {
    out.push_back(i);
    if (i == b) break;
  }
  return out;
}

inline void reverse_curve(FoldCurve& c) {
  std::reverse(c.points.begin(), c.points.end());
  std::reverse(c.f3_sign.begin(), c.f3_sign.end());
  c.winding_in_fiber = -c.winding_in_fiber;
  c.winding_q1 = -c.winding_q1;
}

}  // namespace detail

// Traces folds, locates cusps and assembles the induced chain and alpha-chain.
inline Extraction extract_chain(const GenFun& f, const Tolerances& tol = {}) {
  auto t0 = std::chrono::steady_clock::now();
  if (!tol.sane()) throw DomainError("tolerances out of range");
  Extraction ex;
  NumericReport& rep = ex.report;
  rep.family = f.name;
  rep.tol = tol;
  TraceReport tr = trace_folds(f, tol);
  rep.seed_cells = tr.seed_cells;
  rep.warnings = tr.warnings;
  for (const auto& c : tr.curves)
    if (!c.closed) throw UnsupportedError("fold curve is not closed: " + c.warnings.front());

  if (!f.chart) {
    if (!tr.curves.empty()) throw UnsupportedError(f.name + ": folds present but V_L has no chart");
    CriticalSheets cs = critical_sheets(f, tol);
    if (cs.min_count != 1 || cs.max_count != 1 || cs.boundary_roots != 0)
      throw UnsupportedError(f.name + ": V_L is not a single sheet (" + std::to_string(cs.min_count) + " to " +
                             std::to_string(cs.max_count) + " roots per base point)");
    int s = 0;
    for (const auto& smp : cs.samples) {
      int here = detail::sgn(detail::raw_derivs(f, smp.q[0], smp.q[1], smp.roots[0]).xi[2]);
      if (s == 0) s = here;
      if (here != s || here == 0) throw UnsupportedError(f.name + ": degenerate sheet");
    }
    ex.chain = catalog::fold_free(disk(), s > 0 ? Side::L1 : Side::L2);
    ex.alpha = {ex.chain, {}};
    rep.surface = "disk";
    rep.regions = 1;
  } else {
    const Chart& ch = *f.chart;
    detail::ChartGrid grid(f, std::max(128, 4 * tol.grid_n));
    auto bounds = grid.boundaries();
    std::map<int, int> region_boundaries;
    for (const auto& b : bounds) {
      int l = grid.label[b.front()];
      for (size_t c : b)
        if (grid.label[c] != l) throw UnsupportedError(f.name + ": fold curves reach the boundary of V_L");
      region_boundaries[l] += 1;
    }
    if (grid.labels != static_cast<int>(tr.curves.size()) + 1)
      throw UnsupportedError(f.name + ": " + std::to_string(grid.labels) + " chart regions for " +
                             std::to_string(tr.curves.size()) + " fold circles");

    Chain2D& C = ex.chain;
    C.surface = ch.surface();
    for (int l = 0; l < grid.labels; ++l) {
      Region r;
      r.id = l;
      size_t first = std::find(grid.label.begin(), grid.label.end(), l) - grid.label.begin();
      r.side = grid.sign[first] > 0 ? Side::L1 : Side::L2;
      r.boundary_components = region_boundaries[l];
      C.regions.push_back(r);
    }
    int next_cusp = 0;
    for (size_t ci = 0; ci < tr.curves.size(); ++ci) {
      FoldCurve& cv = tr.curves[ci];
      auto uv = detail::chart_coords(f, cv);
      if (detail::chart_orientation(grid, uv) < 0) {
        detail::reverse_curve(cv);
        std::reverse(uv.begin(), uv.end());
      }
      cv.cusps = locate_cusps(cv, f, tol);

      // sides by offsetting across the fold along the chart gradient of f_xixi
      std::map<int, int> plus, minus;
      size_t stride = std::max<size_t>(1, uv.size() / 64);
      for (size_t k = 0; k < uv.size(); k += stride) {
        Vec2 gr = grid.grad(uv[k][0], uv[k][1]);
        Vec2 n{gr[0] * grid.du(), gr[1] * grid.dw()};
        double len = std::hypot(n[0], n[1]);
        if (!(len > 0)) continue;
        n = {2.5 * n[0] / len * grid.du(), 2.5 * n[1] / len * grid.dw()};
        plus[grid.cell_label(uv[k][0] + n[0], uv[k][1] + n[1])]++;
        minus[grid.cell_label(uv[k][0] - n[0], uv[k][1] - n[1])]++;
      }
      auto top = [](const std::map<int, int>& m) {
        return std::max_element(m.begin(), m.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
      };
      if (plus.empty()) throw UnsupportedError(f.name + ": degenerate fold circle");
      int r1 = top(plus), r2 = top(minus);
      if (r1 == r2 || C.regions[static_cast<size_t>(r1)].side != Side::L1 ||
          C.regions[static_cast<size_t>(r2)].side != Side::L2)
        throw UnsupportedError(f.name + ": fold circle " + std::to_string(ci) + " does not separate L1 from L2");

      FoldCircle fc;
      fc.id = static_cast<int>(ci);
      fc.regions = {r1, r2};
      fc.v1_into = r1;  // v1 = sign(f_xixixi) d/dxi raises f_xixi
      if (ch.topology == ChartTopology::cylinder) {
        double wind = 0;
        for (size_t k = 0; k + 1 < uv.size(); ++k) wind += detail::u_step(ch, uv[k][0], uv[k + 1][0]);
        int w = static_cast<int>(std::lround(wind / ch.u.length()));
        if (std::abs(w) > 1) throw UnsupportedError(f.name + ": fold circle winds more than once");
        if (w != 0) {
          // generator: the u-circle traversed positively in the oriented chart
          fc.cls = Homotopy::essential_a;
          fc.orientation = w * ch.orientation;
        }
      }
      // first cusp: smallest chart u, then w
      size_t nk = cv.cusps.size();
      size_t start = 0;
      auto key = [&](const CuspPoint& k) {
        Vec2 c = ch.coords(detail::Periods(f).wrap(k.location, f));
        if (ch.u_periodic() && c[0] > ch.u.hi - 1e-9) c[0] -= ch.u.length();
        return c;
      };
      for (size_t k = 1; k < nk; ++k) {
        Vec2 a = key(cv.cusps[k]), b = key(cv.cusps[start]);
        if (a[0] < b[0] - 1e-9 || (std::abs(a[0] - b[0]) <= 1e-9 && a[1] < b[1])) start = k;
      }
      std::rotate(cv.cusps.begin(), cv.cusps.begin() + static_cast<long>(start), cv.cusps.end());
      std::vector<int> signs;
      for (size_t k = 0; k < nk; ++k) {
        const CuspPoint& cp = cv.cusps[k];
        Cusp cu;
        cu.id = next_cusp++;
        cu.v2_into = cp.v2_into_L1 ? r1 : r2;
        fc.cusps.push_back(cu);
        ex.cusp_point[cu.id] = {static_cast<int>(ci), static_cast<int>(k)};
        int vote = 0;
        for (int i : detail::arc_samples(cv, k)) vote += cv.f3_sign[static_cast<size_t>(i)];
        signs.push_back(vote >= 0 ? 1 : -1);
      }
      if (nk == 0) signs.push_back(cv.f3_sign.front());
      ex.alpha.arc_signs[fc.id] = signs;
      ex.circle_curve[fc.id] = static_cast<int>(ci);
      C.circles.push_back(fc);
    }
    for (const auto& fc : C.circles)
      for (int r : fc.regions) C.regions[static_cast<size_t>(r)].incident_circles.push_back(fc.id);
    for (auto& r : C.regions)
      r.euler_char = 2 - static_cast<int>(r.incident_circles.size()) - r.boundary_components;
    ex.alpha.chain = C;
    rep.surface = ch.topology == ChartTopology::cylinder ? "annulus" : "disk";
    rep.regions = grid.labels;
  }

  rep.curves = tr.curves;
  rep.circles = static_cast<int>(ex.chain.circles.size());
  rep.cusps = ex.chain.cusp_count();
  rep.n1 = cusps_into(ex.chain, Side::L1);
  rep.n2 = cusps_into(ex.chain, Side::L2);
  auto v = validate_chain(ex.chain);
  if (!v.ok()) throw DomainError(f.name + ": extracted chain is invalid: " + v.summary());
  auto va = validate_chain(ex.alpha);
  if (!va.ok()) throw DomainError(f.name + ": extracted alpha-chain is invalid: " + va.summary());
  if (!alpha_consistency(ex.alpha, ex.chain)) throw DomainError(f.name + ": chain and alpha-chain disagree");
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return ex;
}

// ---- caustic diagram ----

struct CausticDiagram {
  struct Polyline {
    std::vector<Vec2> points;
    bool closed = false;
    int curve = 0;
    int f3_sign = 0;
  };
  struct Vertex {
    Vec2 at{};
    Vec2 arrow{};
    bool v2_into_L1 = false;
    int curve = 0;
  };
  std::vector<Polyline> polylines;
  std::vector<Vertex> cusps;
  std::array<double, 4> bbox{0, 0, 0, 0};  // xmin, ymin, xmax, ymax
  std::map<std::string, std::string> style{{"fold", "#1f4e79"}, {"cusp", "#b22222"}, {"arrow", "#333333"}};

  bool empty() const { return polylines.empty(); }
};

inline CausticDiagram caustic_from(const GenFun& f, const std::vector<FoldCurve>& curves) {
  CausticDiagram d;
  double per = f.q1_period();
  auto proj = [&](const Vec3& p) {
    Vec2 q{p[0], p[1]};
    if (per > 0) q[0] = detail::Periods::wrap_angle_like(q[0], f.q1.lo, per);
    return q;
  };
  auto start_line = [&](int ci, int sign) {
    CausticDiagram::Polyline pl;
    pl.curve = ci;
    pl.f3_sign = sign;
    return pl;
  };
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const FoldCurve& c = curves[ci];
    const auto& P = c.points;
    int cid = static_cast<int>(ci);
    if (c.cusps.empty()) {
      auto pl = start_line(cid, c.f3_sign.empty() ? 0 : c.f3_sign.front());
      for (const auto& p : P) {
        Vec2 q = proj(p);
        if (per > 0 && !pl.points.empty() && std::abs(q[0] - pl.points.back()[0]) > per / 2) {
          d.polylines.push_back(pl);
          pl = start_line(cid, pl.f3_sign);
        }
        pl.points.push_back(q);
      }
      pl.closed = c.closed && per == 0;
      d.polylines.push_back(pl);
    } else {
      size_t nk = c.cusps.size();
      for (size_t k = 0; k < nk; ++k) {
        const CuspPoint& a = c.cusps[k];
        const CuspPoint& b = c.cusps[(k + 1) % nk];
        auto pl = start_line(cid, 0);
        pl.points.push_back(proj(a.location));
        int vote = 0;
        for (int i : detail::arc_samples(c, k)) {
          Vec2 q = proj(P[static_cast<size_t>(i)]);
          if (per > 0 && std::abs(q[0] - pl.points.back()[0]) > per / 2) {
            d.polylines.push_back(pl);
            pl = start_line(cid, 0);
          }
          pl.points.push_back(q);
          vote += c.f3_sign[static_cast<size_t>(i)];
        }
        pl.points.push_back(proj(b.location));
        pl.f3_sign = vote >= 0 ? 1 : -1;
        d.polylines.push_back(pl);
      }
      for (const auto& k : c.cusps) d.cusps.push_back({proj(k.location), k.v2_direction, k.v2_into_L1, cid});
    }
  }
  bool first = true;
  for (const auto& pl : d.polylines)
    for (const auto& q : pl.points) {
      if (first) d.bbox = {q[0], q[1], q[0], q[1]};
      first = false;
      d.bbox = {std::min(d.bbox[0], q[0]), std::min(d.bbox[1], q[1]), std::max(d.bbox[2], q[0]),
                std::max(d.bbox[3], q[1])};
    }
  return d;
}

inline CausticDiagram caustic(const GenFun& f, const Tolerances& tol = {}) {
  TraceReport tr = trace_folds(f, tol);
  for (auto& c : tr.curves) c.cusps = locate_cusps(c, f, tol);
  return caustic_from(f, tr.curves);
}

}  // namespace caustic
