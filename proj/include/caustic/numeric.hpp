#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "caustic/families.hpp"
#include "caustic/genfun.hpp"

namespace caustic {

namespace detail {

inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 mul(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline std::string fmt_point(const Vec3& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", p[0], p[1], p[2]);
  return buf;
}

// Periodic bookkeeping for points (q1, q2, xi).
struct Periods {
  double q1 = 0, xi = 0;

  explicit Periods(const GenFun& f) : q1(f.q1_period()), xi(f.xi_period()) {}

  static double reduce(double d, double p) { return p > 0 ? d - p * std::round(d / p) : d; }
  // b shifted by whole periods to lie near a
  Vec3 image_near(const Vec3& b, const Vec3& a) const {
    return {a[0] + reduce(b[0] - a[0], q1), b[1], a[2] + reduce(b[2] - a[2], xi)};
  }
  double dist(const Vec3& a, const Vec3& b) const { return norm(sub(image_near(b, a), a)); }
  Vec3 wrap(const Vec3& p, const GenFun& f) const {
    Vec3 r = p;
    if (q1 > 0) r[0] = wrap_angle_like(p[0], f.q1.lo, q1);
    if (xi > 0) r[2] = wrap_angle_like(p[2], f.xi.lo, xi);
    return r;
  }
  static double wrap_angle_like(double x, double lo, double p) {
    double r = std::fmod(x - lo, p);
    if (r < 0) r += p;
    if (r > p - 1e-9) r = 0;
    return lo + r;
  }
};

inline double seg_dist(const Vec3& p, const Vec3& a, const Vec3& b, double* lambda = nullptr) {
  Vec3 d = sub(b, a);
  double L = dot(d, d);
  double t = L > 0 ? std::clamp(dot(sub(p, a), d) / L, 0.0, 1.0) : 0.0;
  if (lambda) *lambda = L > 0 ? dot(sub(p, a), d) / L : 0.0;
  return norm(sub(p, add(a, mul(d, t))));
}

// The fold system F = (f_xi, f_xixi) in the unknowns (q1, q2, xi).
struct FoldSystem {
  const GenFun& f;
  double tol_root;

  Derivs at(const Vec3& x) const { return raw_derivs(f, x[0], x[1], x[2]); }

  static void rows(const Derivs& d, Vec3& j1, Vec3& j2) {
    j1 = {d.q_xi[0], d.q_xi[1], d.xi[2]};
    j2 = {d.q_xixi[0], d.q_xixi[1], d.xi[3]};
  }
  Vec3 tangent(const Vec3& x) const {
    Vec3 a, b;
    rows(at(x), a, b);
    Vec3 t = cross(a, b);
    double n = norm(t);
    return n > 0 ? mul(t, 1 / n) : Vec3{0, 0, 0};
  }
  // minimum-norm Newton; returns converged point and iteration count
  std::optional<std::pair<Vec3, int>> correct(Vec3 x, int max_it = 12, double max_move = 1e300) const {
    Vec3 x0 = x;
    for (int it = 0; it <= max_it; ++it) {
      Derivs d = at(x);
      double F1 = d.xi[1], F2 = d.xi[2];
      if (!std::isfinite(F1) || !std::isfinite(F2)) return std::nullopt;
      if (std::max(std::abs(F1), std::abs(F2)) <= 1e-3 * tol_root) return std::pair{x, it};
      if (it == max_it) break;
      Vec3 a, b;
      rows(d, a, b);
      double A11 = dot(a, a), A12 = dot(a, b), A22 = dot(b, b);
      double det = A11 * A22 - A12 * A12;
      if (!(std::abs(det) > 1e-300)) return std::nullopt;
      double y1 = (A22 * F1 - A12 * F2) / det, y2 = (A11 * F2 - A12 * F1) / det;
      x = sub(x, add(mul(a, y1), mul(b, y2)));
      if (norm(sub(x, x0)) > max_move) return std::nullopt;
    }
    Derivs d = at(x);
    if (std::max(std::abs(d.xi[1]), std::abs(d.xi[2])) <= tol_root) return std::pair{x, max_it};
    return std::nullopt;
  }
};

}  // namespace detail

// ---- critical sheets ----

struct SheetSample {
  Vec2 q{};
  std::vector<double> roots;
  std::vector<bool> at_boundary;
};

struct CriticalSheets {
  int n1 = 0, n2 = 0, fiber_samples = 0;
  std::vector<SheetSample> samples;  // row-major, q1 fastest
  int boundary_roots = 0;
  int min_count = 0, max_count = 0;

  const SheetSample& at(int i, int j) const { return samples[static_cast<size_t>(j * n1 + i)]; }
};

namespace detail {

inline double axis_node(const Interval& I, bool periodic, int n, int i) {
  return periodic ? I.lo + I.length() * i / n : I.lo + I.length() * i / (n - 1);
}

inline void fiber_roots(const GenFun& f, double a, double b, int M, double tol_root, double tol_guard,
                        SheetSample& out) {
  auto fx = [&](double s) { return raw_derivs(f, a, b, s).xi[1]; };
  bool circ = f.fiber == Fiber::circle;
  double lo = f.xi.lo, len = f.xi.length();
  std::vector<double> xs, vs;
  if (circ) {
    for (int i = 0; i < M; ++i) xs.push_back(lo + (i + 0.5) * len / M);
  } else {
    for (int i = 0; i <= M; ++i) xs.push_back(lo + i * len / M);
  }
  for (double x : xs) vs.push_back(fx(x));
  auto polish = [&](double x0, double x1, double v0, double v1) {
    boost::uintmax_t it = 100;
    auto r = boost::math::tools::toms748_solve(fx, x0, x1, v0, v1, boost::math::tools::eps_tolerance<double>(50), it);
    double x = 0.5 * (r.first + r.second);
    Derivs d = raw_derivs(f, a, b, x);
    if (d.xi[2] != 0) {
      double y = x - d.xi[1] / d.xi[2];
      if (y >= std::min(x0, x1) && y <= std::max(x0, x1) && std::abs(fx(y)) < std::abs(d.xi[1])) x = y;
    }
    return x;
  };
  size_t n = xs.size();
  auto push = [&](double x, bool edge) {
    out.roots.push_back(x);
    out.at_boundary.push_back(edge);
  };
  if (!circ && std::abs(vs[0]) <= tol_root) push(xs[0], true);
  size_t segs = circ ? n : n - 1;
  for (size_t i = 0; i < segs; ++i) {
    size_t j = (i + 1) % n;
    double x0 = xs[i], x1 = j == 0 ? xs[0] + len : xs[j];
    double v0 = vs[i], v1 = vs[j];
    if (v0 == 0 && (circ || i > 0)) {
      push(x0, false);
      continue;
    }
    if (!(v0 * v1 < 0)) continue;
    double x = polish(x0, x1, v0, v1);
    if (circ) x = Periods::wrap_angle_like(x, lo, len);
    push(x, !circ && (x - lo < tol_guard || f.xi.hi - x < tol_guard));
  }
  if (!circ && std::abs(vs[n - 1]) <= tol_root) push(xs[n - 1], true);
}

}  // namespace detail

// Roots of f_xi over a grid_n x grid_n lattice of base points.
inline CriticalSheets critical_sheets(const GenFun& f, const Tolerances& tol = {}, int fiber_samples = 256) {
  if (!tol.sane()) throw DomainError("tolerances out of range");
  CriticalSheets cs;
  cs.n1 = cs.n2 = tol.grid_n;
  cs.fiber_samples = fiber_samples;
  cs.min_count = 1 << 30;
  for (int j = 0; j < cs.n2; ++j)
    for (int i = 0; i < cs.n1; ++i) {
      SheetSample s;
      s.q = {detail::axis_node(f.q1, f.q1_periodic, cs.n1, i), detail::axis_node(f.q2, false, cs.n2, j)};
      detail::fiber_roots(f, s.q[0], s.q[1], fiber_samples, tol.tol_root, tol.tol_guard, s);
      for (bool b : s.at_boundary) cs.boundary_roots += b;
      int k = static_cast<int>(s.roots.size());
      cs.min_count = std::min(cs.min_count, k);
      cs.max_count = std::max(cs.max_count, k);
      cs.samples.push_back(std::move(s));
    }
  return cs;
}

// ---- fold tracing ----

struct CuspPoint {
  Vec3 location{};
  Vec2 v2_direction{};
  int fourth_deriv_sign = 0;
  double third_residual = 0;  // |f_xixixi| at location
  double fourth = 0;          // f_xixixixi at location
  bool v2_into_L1 = false;
  int segment = 0;  // lies between samples segment and segment + 1
  Vec3 tangent{};
};

struct FoldCurve {
  // xi, and q1 on periodic bases, are unwrapped so consecutive samples are continuous
  std::vector<Vec3> points;
  std::vector<int> f3_sign;  // v1 side tag: fiber direction of positive third derivative
  bool closed = false;
  int winding_in_fiber = 0;
  int winding_q1 = 0;
  double length = 0;
  std::vector<CuspPoint> cusps;
  std::vector<std::string> warnings;
};

struct TraceReport {
  std::vector<FoldCurve> curves;
  std::vector<std::string> warnings;
  int seed_cells = 0;
};

namespace detail {

struct Marcher {
  const GenFun& f;
  const Tolerances& tol;
  FoldSystem sys;
  Periods per;

  Marcher(const GenFun& g, const Tolerances& t) : f(g), tol(t), sys{g, t.tol_root}, per(g) {}

  bool inside(const Vec3& x) const {
    bool q1 = f.q1_periodic || f.q1.contains(x[0]);
    bool xi = f.fiber == Fiber::circle || f.xi.contains(x[2]);
    return q1 && f.q2.contains(x[1]) && xi;
  }

  struct Leg {
    std::vector<Vec3> pts;
    bool closed = false;
    std::string stop;
  };

  Leg march(const Vec3& x0, Vec3 dir) const {
    Leg L;
    L.pts.push_back(x0);
    Vec3 x = x0, T = dir;
    double h = std::clamp(0.02, tol.step_min, tol.step_max), travelled = 0;
    bool far = false;
    for (int step = 0; step < 400000; ++step) {
      auto res = sys.correct(add(x, mul(T, h)), 8, 4 * h);
      bool ok = res.has_value();
      Vec3 y{}, Ty{};
      if (ok) {
        y = res->first;
        double dy = norm(sub(y, x));
        Ty = sys.tangent(y);
        if (dot(Ty, T) < 0) Ty = mul(Ty, -1);
        ok = dy > 0.3 * h && dy < 2 * h && dot(Ty, T) > 0.9;
      }
      if (!ok) {
        h *= 0.5;
        if (h < tol.step_min) {
          L.stop = "continuation step underflow near " + fmt_point(x);
          return L;
        }
        continue;
      }
      // closure: the start lies on the chord just taken
      Vec3 s = per.image_near(x0, x);
      double lam = 0;
      if (far && seg_dist(s, x, y, &lam) < std::max(0.25 * h, 10 * tol.tol_close) && lam >= 0 && lam <= 1.0) {
        L.pts.push_back(s);
        L.closed = true;
        return L;
      }
      if (!inside(y)) {
        L.stop = "left the domain near " + fmt_point(y);
        return L;
      }
      travelled += norm(sub(y, x));
      if (!far && per.dist(y, x0) > 0.05 && travelled > 0.05) far = true;
      L.pts.push_back(y);
      x = y;
      T = Ty;
      if (res->second <= 2) h = std::min(h * 1.5, tol.step_max);
    }
    L.stop = "step limit reached";
    return L;
  }

  FoldCurve trace(const Vec3& x0) const {
    FoldCurve c;
    Vec3 T = sys.tangent(x0);
    Leg fw = march(x0, T);
    if (fw.closed) {
      c.points = std::move(fw.pts);
      c.closed = true;
    } else {
      Leg bw = march(x0, mul(T, -1));
      c.points.assign(bw.pts.rbegin(), bw.pts.rend());
      c.points.insert(c.points.end(), fw.pts.begin() + 1, fw.pts.end());
      c.warnings.push_back("open fold curve: " + fw.stop + "; " + bw.stop);
    }
    double dxi = c.points.back()[2] - c.points.front()[2], dq = c.points.back()[0] - c.points.front()[0];
    if (c.closed && per.xi > 0) c.winding_in_fiber = static_cast<int>(std::lround(dxi / per.xi));
    if (c.closed && per.q1 > 0) c.winding_q1 = static_cast<int>(std::lround(dq / per.q1));
    if (c.winding_in_fiber < 0 || (c.winding_in_fiber == 0 && c.winding_q1 < 0)) {
      std::reverse(c.points.begin(), c.points.end());
      c.winding_in_fiber = -c.winding_in_fiber;
      c.winding_q1 = -c.winding_q1;
    }
    for (size_t i = 0; i + 1 < c.points.size(); ++i) c.length += norm(sub(c.points[i + 1], c.points[i]));
    for (const auto& p : c.points) c.f3_sign.push_back(sgn(sys.at(p).xi[3]));
    return c;
  }

  double distance_to(const FoldCurve& c, const Vec3& p) const {
    double best = 1e300;
    for (size_t i = 0; i + 1 < c.points.size(); ++i) {
      Vec3 q = per.image_near(p, c.points[i]);
      best = std::min(best, seg_dist(q, c.points[i], c.points[i + 1]));
    }
    if (c.points.size() == 1) best = per.dist(p, c.points[0]);
    return best;
  }
};

}  // namespace detail

// Cells of a grid_n^3 lattice over base box x fiber where f_xi and f_xixi both change sign.
inline std::vector<Vec3> fold_seeds(const GenFun& f, const Tolerances& tol = {}) {
  int n = tol.grid_n;
  bool p0 = f.q1_periodic, p2 = f.fiber == Fiber::circle;
  int c0 = p0 ? n : n - 1, c1 = n - 1, c2 = p2 ? n : n - 1;
  std::vector<double> A(static_cast<size_t>(n * n * n)), B(A.size());
  auto idx = [n](int i, int j, int k) { return static_cast<size_t>((k * n + j) * n + i); };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Derivs d = detail::raw_derivs(f, detail::axis_node(f.q1, p0, n, i), detail::axis_node(f.q2, false, n, j),
                                      detail::axis_node(f.xi, p2, n, k));
        A[idx(i, j, k)] = d.xi[1];
        B[idx(i, j, k)] = d.xi[2];
      }
  std::vector<Vec3> seeds;
  for (int k = 0; k < c2; ++k)
    for (int j = 0; j < c1; ++j)
      for (int i = 0; i < c0; ++i) {
        bool apos = false, aneg = false, bpos = false, bneg = false;
        for (int c = 0; c < 8; ++c) {
          size_t id = idx((i + (c & 1)) % n, j + ((c >> 1) & 1), (k + ((c >> 2) & 1)) % n);
          (A[id] > 0 ? apos : aneg) = true;
          (B[id] > 0 ? bpos : bneg) = true;
        }
        if (!(apos && aneg && bpos && bneg)) continue;
        auto mid = [n](const Interval& I, bool per, int m) {
          double step = per ? I.length() / n : I.length() / (n - 1);
          return I.lo + (m + 0.5) * step;
        };
        seeds.push_back({mid(f.q1, p0, i), mid(f.q2, false, j), mid(f.xi, p2, k)});
      }
  return seeds;
}

inline std::vector<CuspPoint> locate_cusps(const FoldCurve& curve, const GenFun& f, const Tolerances& tol = {});

inline TraceReport trace_folds(const GenFun& f, const std::vector<Vec3>& seeds, const Tolerances& tol = {}) {
  detail::Marcher m(f, tol);
  TraceReport rep;
  rep.seed_cells = static_cast<int>(seeds.size());
  const double cover = 0.05;
  for (const auto& s : seeds) {
    bool covered = false;
    for (const auto& c : rep.curves)
      if (m.distance_to(c, s) < cover) covered = true;
    if (covered) continue;
    auto x = m.sys.correct(s, 30, 1.0);
    if (!x || !m.inside(x->first)) continue;
    for (const auto& c : rep.curves)
      if (m.distance_to(c, x->first) < cover) covered = true;
    if (covered) continue;
    FoldCurve c = m.trace(x->first);
    for (const auto& w : c.warnings) rep.warnings.push_back(w);
    rep.curves.push_back(std::move(c));
  }
  return rep;
}

inline TraceReport trace_folds(const GenFun& f, const Tolerances& tol = {}) {
  return trace_folds(f, fold_seeds(f, tol), tol);
}

// ---- cusps ----

inline std::vector<CuspPoint> locate_cusps(const FoldCurve& curve, const GenFun& f, const Tolerances& tol) {
  detail::FoldSystem sys{f, tol.tol_root};
  const auto& P = curve.points;
  std::vector<CuspPoint> out;
  if (P.size() < 2) return out;
  std::vector<double> f3(P.size());
  for (size_t i = 0; i < P.size(); ++i) f3[i] = sys.at(P[i]).xi[3];
  std::vector<bool> near(P.size(), false);
  for (size_t i = 0; i + 1 < P.size(); ++i) {
    if (detail::sgn(f3[i]) * detail::sgn(f3[i + 1]) > 0) continue;
    if (f3[i] == 0 && i > 0) continue;  // counted with the previous segment
    near[i] = near[i + 1] = true;
    // bisection along the chord, projected onto the curve
    double lo = 0, hi = 1;
    int slo = detail::sgn(f3[i]);
    Vec3 best = P[i];
    double bestv = f3[i];
    for (int it = 0; it < 200 && std::abs(bestv) > 1e-2 * tol.tol_root; ++it) {
      double mid = 0.5 * (lo + hi);
      Vec3 guess = detail::add(P[i], detail::mul(detail::sub(P[i + 1], P[i]), mid));
      auto pr = sys.correct(guess, 12);
      if (!pr) break;
      best = pr->first;
      bestv = sys.at(best).xi[3];
      if (detail::sgn(bestv) == slo) lo = mid;
      else hi = mid;
      if (hi - lo < 1e-17) break;
    }
    Derivs d = sys.at(best);
    if (std::abs(d.xi[3]) > tol.tol_root)
      throw DomainError("degenerate cusp at " + detail::fmt_point(best) + ": third derivative did not resolve");
    if (std::abs(d.xi[4]) < tol.tol_guard)
      throw DomainError("degenerate cusp at " + detail::fmt_point(best) + ": fourth derivative below guard");
    CuspPoint c;
    c.location = detail::Periods(f).wrap(best, f);
    c.third_residual = std::abs(d.xi[3]);
    c.fourth = d.xi[4];
    c.fourth_deriv_sign = detail::sgn(d.xi[4]);
    c.segment = static_cast<int>(i);
    Vec3 T = sys.tangent(best);
    if (detail::dot(T, detail::sub(P[i + 1], P[i])) < 0) T = detail::mul(T, -1);
    c.tangent = T;
    const double delta = 1e-3;
    auto pp = sys.correct(detail::add(best, detail::mul(T, delta)), 12);
    auto pm = sys.correct(detail::sub(best, detail::mul(T, delta)), 12);
    if (!pp || !pm) throw DomainError("degenerate cusp at " + detail::fmt_point(best) + ": projection failed");
    // the caustic leaves the cusp along +dd on both branches; v2 points the other way
    Vec2 dd{pp->first[0] + pm->first[0] - 2 * best[0], pp->first[1] + pm->first[1] - 2 * best[1]};
    double n = std::hypot(dd[0], dd[1]);
    if (!(n > 0)) throw DomainError("degenerate cusp at " + detail::fmt_point(best) + ": flat caustic");
    c.v2_direction = {-dd[0] / n, -dd[1] / n};
    c.v2_into_L1 = d.q_xixi[0] * c.v2_direction[0] + d.q_xixi[1] * c.v2_direction[1] > 0;
    out.push_back(c);
  }
  // a closed curve repeats its first point; the sign test above covers every segment.
  for (size_t i = 0; i < P.size(); ++i)
    if (!near[i] && std::abs(f3[i]) <= tol.tol_guard)
      throw DomainError("degenerate cusp at " + detail::fmt_point(P[i]) + ": third derivative below guard");
  return out;
}

// ---- embeddedness ----

struct EmbeddedReport {
  bool embedded = true;
  double closest = 1e300;  // smallest |dp| between distinct sheets over one base point
  Vec2 at_q{};
  Vec2 at_xi{};
  int samples = 0;
};

inline EmbeddedReport check_embedded(const CriticalSheets& cs, const GenFun& f, const Tolerances& tol = {}) {
  EmbeddedReport r;
  detail::Periods per(f);
  for (const auto& s : cs.samples) {
    r.samples += static_cast<int>(s.roots.size());
    std::vector<Vec2> p;
    for (double x : s.roots) p.push_back(detail::raw_derivs(f, s.q[0], s.q[1], x).q);
    for (size_t a = 0; a < p.size(); ++a)
      for (size_t b = a + 1; b < p.size(); ++b) {
        double sep = std::abs(detail::Periods::reduce(s.roots[a] - s.roots[b], per.xi));
        if (sep <= tol.tol_guard) continue;
        double d = std::hypot(p[a][0] - p[b][0], p[a][1] - p[b][1]);
        if (d < r.closest) {
          r.closest = d;
          r.at_q = s.q;
          r.at_xi = {s.roots[a], s.roots[b]};
        }
        if (d < tol.tol_close) r.embedded = false;
      }
  }
  return r;
}

inline EmbeddedReport check_embedded(const GenFun& f, const Tolerances& tol = {}) {
  return check_embedded(critical_sheets(f, tol), f, tol);
}

// ---- Sigma^2 passage ----

struct Sigma2Event {
  double theta = 0;
  Vec2 q{};
};

struct Sigma2Report {
  std::vector<Sigma2Event> events;
  bool inconclusive = false;
  std::string message;
};

// Points where Hess f_tau(q) = cot(theta) Id, theta in (lo, hi].
inline Sigma2Report detect_sigma2_events(const QuadRot& Q, Interval theta = {0, std::numbers::pi / 2}) {
  if (!(theta.lo >= 0 && theta.hi <= std::numbers::pi / 2 + 1e-15 && theta.lo < theta.hi))
    throw DomainError("theta range must lie in (0, pi/2]");
  Sigma2Report rep;
  auto newton = [&](std::array<double, 3> x) -> std::optional<std::array<double, 3>> {
    for (int it = 0; it < 50; ++it) {
      auto H = Q.hessian(x[0], x[1]);
      auto D = Q.hessian_d(x[0], x[1]);
      double F[3] = {H[0] - x[2], H[1] - x[2], H[2]};
      if (std::max({std::abs(F[0]), std::abs(F[1]), std::abs(F[2])}) < 1e-14) return x;
      double J[3][3] = {{D[0][0], D[0][1], -1}, {D[1][0], D[1][1], -1}, {D[2][0], D[2][1], 0}};
      double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                   J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
      if (std::abs(det) < 1e-300) return std::nullopt;
      // Cramer
      std::array<double, 3> dx{};
      for (int c = 0; c < 3; ++c) {
        double M[3][3];
        for (int r = 0; r < 3; ++r)
          for (int k = 0; k < 3; ++k) M[r][k] = k == c ? F[r] : J[r][k];
        dx[static_cast<size_t>(c)] = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                                      M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                                      M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
                                     det;
      }
      for (int c = 0; c < 3; ++c) x[static_cast<size_t>(c)] -= dx[static_cast<size_t>(c)];
      if (!std::isfinite(x[0] + x[1] + x[2]) || std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]) > 1e8)
        return std::nullopt;
    }
    return std::nullopt;
  };
  std::vector<std::array<double, 3>> sols;
  bool any = false;
  for (int level = 0; level < 2 && !any; ++level) {
    int m = level == 0 ? 3 : 9;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          auto lin = [m](int i) { return m == 1 ? 0.0 : -1 + 2.0 * i / (m - 1); };
          auto s = newton({lin(a), lin(b), 4 * lin(c)});
          if (!s) continue;
          any = true;
          bool dup = false;
          for (auto& t : sols)
            if (std::abs(t[0] - (*s)[0]) + std::abs(t[1] - (*s)[1]) + std::abs(t[2] - (*s)[2]) < 1e-9) dup = true;
          if (!dup) sols.push_back(*s);
        }
  }
  if (!any) {
    rep.inconclusive = true;
    rep.message = "Newton diverged from every start, including the refined grid";
    return rep;
  }
  for (auto& s : sols) {
    double th = std::atan2(1.0, s[2]);  // cot(theta) = c
    if (th > theta.lo && th <= theta.hi + 1e-12) rep.events.push_back({std::min(th, theta.hi), {s[0], s[1]}});
  }
  return rep;
}

// ---- refinement stability ----

// Symmetric Hausdorff distance between two traced fold sets. For each sample the foot point on
// the nearest segment of the other set is pulled back onto the fold set by the corrector, so
// the result measures the other set, not its chord sag.
inline double fold_hausdorff(const GenFun& f, const std::vector<FoldCurve>& A, const std::vector<FoldCurve>& B,
                             const Tolerances& tol = {}) {
  detail::Marcher m(f, tol);
  auto one_way = [&](const std::vector<FoldCurve>& X, const std::vector<FoldCurve>& Y) {
    double worst = 0;
    for (const auto& c : X)
      for (const auto& p : c.points) {
        double best = 1e300;
        Vec3 foot{};
        for (const auto& d : Y)
          for (size_t i = 0; i + 1 < d.points.size(); ++i) {
            Vec3 a = d.points[i], b = d.points[i + 1];
            Vec3 q = m.per.image_near(p, a);
            double lam = 0;
            double g = detail::seg_dist(q, a, b, &lam);
            if (g < best) {
              best = g;
              lam = std::clamp(lam, 0.0, 1.0);
              foot = m.per.image_near(detail::add(a, detail::mul(detail::sub(b, a), lam)), p);
            }
          }
        if (best > 0.5) return 1e300;
        auto pr = m.sys.correct(foot, 12);
        worst = std::max(worst, pr ? m.per.dist(pr->first, p) : best);
      }
    return worst;
  };
  if (A.empty() && B.empty()) return 0;
  if (A.empty() || B.empty()) return 1e300;
  return std::max(one_way(A, B), one_way(B, A));
}

}  // namespace caustic
