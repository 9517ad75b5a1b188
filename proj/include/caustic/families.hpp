#pragma once

#include <algorithm>
#include <vector>

#include "caustic/genfun.hpp"

namespace caustic {

namespace detail {

constexpr double pi = std::numbers::pi;

// quintic smoothstep on [0,1] and its derivative
inline double smoothstep(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return x * x * x * (x * (6 * x - 15) + 10);
}
inline double smoothstep_d(double x) {
  if (x <= 0 || x >= 1) return 0;
  return 30 * x * x * (x - 1) * (x - 1);
}

// 1 on |x| <= inner, 0 on |x| >= outer
struct Bump {
  double inner, outer;
  double operator()(double x) const { return 1 - smoothstep((std::abs(x) - inner) / (outer - inner)); }
  double d(double x) const {
    double s = x < 0 ? -1 : 1;
    return -s * smoothstep_d((std::abs(x) - inner) / (outer - inner)) / (outer - inner);
  }
};

inline double wrap_angle(double u, double lo) {
  double p = 2 * pi;
  double r = std::fmod(u - lo, p);
  if (r < 0) r += p;
  return lo + r;
}

}  // namespace detail

// Collapse cutoff: eps/2 for r <= 100, 0 for r >= 1000, monotone between.
inline double collapse_cutoff(double eps, double r) {
  return 0.5 * eps * (1 - detail::smoothstep((r - 100) / 900));
}
inline double collapse_cutoff_d(double eps, double r) { return -0.5 * eps * detail::smoothstep_d((r - 100) / 900) / 900; }

// f = q1 cos xi + q2 sin xi - chi(|q|) cos 2xi on the circle fiber
inline GenFun collapse_family(double eps) {
  GenFun f;
  f.name = "collapse";
  f.q1 = {-1.2, 1.2};
  f.q2 = {-1.2, 1.2};
  f.fiber = Fiber::circle;
  f.xi = {0, 2 * detail::pi};
  f.derivs = [eps](double a, double b, double x) {
    Derivs d;
    double r = std::hypot(a, b);
    double chi = collapse_cutoff(eps, r), chid = collapse_cutoff_d(eps, r);
    Vec2 rq = r > 0 ? Vec2{a / r, b / r} : Vec2{0, 0};
    double p2 = 1;
    for (int k = 0; k < 6; ++k) {
      double ph = k * detail::pi / 2;
      double c1 = std::cos(x + ph), s1 = std::sin(x + ph), c2 = std::cos(2 * x + ph);
      double dk = a * c1 + b * s1 - chi * p2 * c2;
      d.xi[static_cast<size_t>(k)] = dk;
      Vec2 dq{c1 - chid * rq[0] * p2 * c2, s1 - chid * rq[1] * p2 * c2};
      if (k == 0) d.q = dq;
      if (k == 1) d.q_xi = dq;
      if (k == 2) d.q_xixi = dq;
      p2 *= 2;
    }
    return d;
  };
  // (u, w) = (xi, t) with q = t e(xi) + s e'(xi), s = -eps sin 2xi inside r <= 100
  auto chart = std::make_shared<Chart>();
  chart->topology = ChartTopology::cylinder;
  chart->u = {0, 2 * detail::pi};
  chart->w = {-1, 1};
  chart->orientation = -1;
  chart->point = [eps](double u, double w) {
    double s = -eps * std::sin(2 * u);
    return Vec3{w * std::cos(u) - s * std::sin(u), w * std::sin(u) + s * std::cos(u), u};
  };
  chart->coords = [](const Vec3& p) {
    double u = detail::wrap_angle(p[2], 0);
    return Vec2{u, p[0] * std::cos(u) + p[1] * std::sin(u)};
  };
  f.chart = chart;
  return f;
}

// q-independent f = cos 2xi: four sheets over every q, all with p = 0
inline GenFun cos2_family() {
  GenFun f;
  f.name = "cos2";
  f.fiber = Fiber::circle;
  f.xi = {0, 2 * detail::pi};
  f.derivs = [](double, double, double x) {
    Derivs d;
    double p2 = 1;
    for (int k = 0; k < 6; ++k) {
      d.xi[static_cast<size_t>(k)] = p2 * std::cos(2 * x + k * detail::pi / 2);
      p2 *= 2;
    }
    return d;
  };
  return f;
}

inline GenFun xi_squared_family() {
  GenFun f;
  f.name = "xi2";
  f.fiber = Fiber::line;
  f.xi = {-2, 2};
  f.derivs = [](double, double, double x) {
    Derivs d;
    d.xi[0] = x * x;
    d.xi[1] = 2 * x;
    d.xi[2] = 2;
    return d;
  };
  return f;
}

struct MushroomParams {
  double eps = 0.05;
  double r1 = 0.5, r2 = 1, r3 = 9, r4 = 16;
  double center = 5, plateau = 1.5, reach = 2.5;  // support of the plateau modulation
  double alpha_out = 1, kappa = 1;
  double rho_max = 7;
};

// t_a: zero outside [r1, r4], linear on [r2, r3] from 100a to -100a, C1 cubic blends elsewhere.
inline std::pair<double, double> mushroom_profile(const MushroomParams& P, double a, double r) {
  double T2 = 100 * a, T3 = -100 * a, L = (T3 - T2) / (P.r3 - P.r2);
  auto hermite = [](double r0, double r1, double p0, double m0, double p1, double m1, double r) {
    double D = r1 - r0, s = (r - r0) / D;
    double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1, d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
    double v = h00 * p0 + h10 * D * m0 + h01 * p1 + h11 * D * m1;
    double dv = (d00 * p0 + d10 * D * m0 + d01 * p1 + d11 * D * m1) / D;
    return std::pair{v, dv};
  };
  if (r <= P.r1 || r >= P.r4) return {0, 0};
  if (r < P.r2) return hermite(P.r1, P.r2, 0, 0, T2, L, r);
  if (r <= P.r3) return {T2 + L * (r - P.r2), L};
  return hermite(P.r3, P.r4, T3, L, 0, 0, r);
}

inline std::pair<double, double> mushroom_alpha(const MushroomParams& P, double a, double r) {
  detail::Bump m{P.plateau, P.reach};
  double amp = (a / P.eps) * (P.alpha_out + P.kappa);
  return {P.alpha_out + m(r - P.center) * amp, m.d(r - P.center) * amp};
}

namespace detail {

// Profile curve {4 xi^3 + 2 alpha(rho) xi + t(rho) = 0} of the rotationally symmetric V_L,
// sampled by arclength from the axis.
struct Profile {
  std::vector<double> s, rho, xi;

  Vec2 at(double sigma) const {
    sigma = std::clamp(sigma, 0.0, s.back());
    size_t k = static_cast<size_t>(std::upper_bound(s.begin(), s.end(), sigma) - s.begin());
    k = std::clamp<size_t>(k, 1, s.size() - 1);
    double lam = (sigma - s[k - 1]) / (s[k] - s[k - 1]);
    return {rho[k - 1] + lam * (rho[k] - rho[k - 1]), xi[k - 1] + lam * (xi[k] - xi[k - 1])};
  }
  double nearest(double r, double x) const {
    size_t best = 0;
    double bd = 1e300;
    for (size_t i = 0; i < s.size(); ++i) {
      double d = (rho[i] - r) * (rho[i] - r) + (xi[i] - x) * (xi[i] - x);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return s[best];
  }
};

inline Profile trace_profile(const MushroomParams& P, double a) {
  auto h = [&](double r, double x, double& hr, double& hx) {
    auto [t, td] = mushroom_profile(P, a, r);
    auto [al, ald] = mushroom_alpha(P, a, r);
    hr = 2 * ald * x + td;
    hx = 12 * x * x + 2 * al;
    return 4 * x * x * x + 2 * al * x + t;
  };
  Profile pr;
  double r = 0, x = 0, s = 0, ds = 2e-3;
  Vec2 dir{1, 0};
  pr.s.push_back(0);
  pr.rho.push_back(0);
  pr.xi.push_back(0);
  while (r < P.rho_max && pr.s.size() < 200000) {
    double hr, hx;
    h(r, x, hr, hx);
    Vec2 t{-hx, hr};
    double n = std::hypot(t[0], t[1]);
    t = {t[0] / n, t[1] / n};
    if (t[0] * dir[0] + t[1] * dir[1] < 0) t = {-t[0], -t[1]};
    double nr = r + ds * t[0], nx = x + ds * t[1];
    for (int it = 0; it < 20; ++it) {
      double gr, gx;
      double v = h(nr, nx, gr, gx);
      double g2 = gr * gr + gx * gx;
      nr -= v * gr / g2;
      nx -= v * gx / g2;
      if (std::abs(v) < 1e-14) break;
    }
    s += std::hypot(nr - r, nx - x);
    dir = t;
    r = nr;
    x = nx;
    pr.s.push_back(s);
    pr.rho.push_back(r);
    pr.xi.push_back(x);
  }
  return pr;
}

}  // namespace detail

// f_a = xi^4 + alpha_a(r) xi^2 + t_a(r) xi; a in [-eps, 0]
inline GenFun mushroom_family(double a, MushroomParams P = {}) {
  GenFun f;
  f.name = "mushroom";
  f.q1 = {-7.5, 7.5};
  f.q2 = {-7.5, 7.5};
  f.fiber = Fiber::line;
  f.xi = {-2.5, 2.5};
  f.derivs = [a, P](double q1, double q2, double x) {
    Derivs d;
    double r = std::hypot(q1, q2);
    auto [t, td] = mushroom_profile(P, a, r);
    auto [al, ald] = mushroom_alpha(P, a, r);
    Vec2 rq = r > 0 ? Vec2{q1 / r, q2 / r} : Vec2{0, 0};
    d.xi = {x * x * x * x + al * x * x + t * x, 4 * x * x * x + 2 * al * x + t, 12 * x * x + 2 * al, 24 * x, 24, 0};
    double fr = ald * x * x + td * x, fxr = 2 * ald * x + td, fxxr = 2 * ald;
    d.q = {fr * rq[0], fr * rq[1]};
    d.q_xi = {fxr * rq[0], fxr * rq[1]};
    d.q_xixi = {fxxr * rq[0], fxxr * rq[1]};
    return d;
  };
  auto prof = std::make_shared<detail::Profile>(detail::trace_profile(P, a));
  auto chart = std::make_shared<Chart>();
  chart->topology = ChartTopology::polar_disk;
  chart->u = {0, 2 * detail::pi};
  chart->w = {0, prof->s.back()};
  chart->point = [prof](double u, double w) {
    Vec2 rx = prof->at(w);
    return Vec3{rx[0] * std::cos(u), rx[0] * std::sin(u), rx[1]};
  };
  chart->coords = [prof](const Vec3& p) {
    double u = detail::wrap_angle(std::atan2(p[1], p[0]), 0);
    return Vec2{u, prof->nearest(std::hypot(p[0], p[1]), p[2])};
  };
  f.chart = chart;
  return f;
}

enum class MorinKind { birth, band, pair };

inline const char* to_string(MorinKind k) {
  switch (k) {
    case MorinKind::birth: return "1,0";
    case MorinKind::band: return "1,1";
    case MorinKind::pair: return "2,0";
  }
  return "";
}

struct MorinParams {
  double kappa = 0.25;
  double amplitude = 1;  // coefficient of sin(u) xi^2 in the (2,0) model
};

// theta_tau = theta - tau (theta + kappa) bump
struct MorinTheta {
  MorinKind kind;
  double tau;
  MorinParams P;

  std::pair<double, double> base(double y) const {
    switch (kind) {
      case MorinKind::birth: return {1 + y * y, 2 * y};
      case MorinKind::band: return {(y * y - 1) * (y * y - 9) / 9, (4 * y * y * y - 20 * y) / 9};
      case MorinKind::pair: return {1, 0};
    }
    return {0, 0};
  }
  detail::Bump bump() const {
    switch (kind) {
      case MorinKind::birth: return {0.5, 1.0};
      case MorinKind::band: return {1.2, 2.0};
      case MorinKind::pair: return {0.3, 0.6};
    }
    return {0, 1};
  }
  std::pair<double, double> operator()(double y) const {
    auto [th, thd] = base(y);
    auto b = bump();
    double v = th - tau * (th + P.kappa) * b(y);
    double dv = thd - tau * (thd * b(y) + (th + P.kappa) * b.d(y));
    return {v, dv};
  }
};

// Local models: (1,0) and (1,1) use xi^4 + theta_tau(y) xi^2 + t xi over (y, t);
// (2,0) uses xi^5 + theta_tau(u) xi^3 + A sin(u) xi^2 + w xi over the cylinder (u, w).
inline GenFun morin_family(MorinKind kind, double tau, MorinParams P = {}) {
  GenFun f;
  f.name = std::string("morin_") + to_string(kind);
  MorinTheta th{kind, tau, P};
  auto chart = std::make_shared<Chart>();
  if (kind == MorinKind::pair) {
    f.q1 = {-detail::pi, detail::pi};
    f.q1_periodic = true;
    f.q2 = {-2, 2};
    f.xi = {-1.2, 1.2};
    double A = P.amplitude;
    f.derivs = [th, A](double u, double w, double x) {
      Derivs d;
      double uu = detail::wrap_angle(u, -detail::pi);
      auto [t, td] = th(uu);
      double su = A * std::sin(u), cu = A * std::cos(u);
      double x2 = x * x, x3 = x2 * x;
      d.xi = {x2 * x3 + t * x3 + su * x2 + w * x, 5 * x2 * x2 + 3 * t * x2 + 2 * su * x + w, 20 * x3 + 6 * t * x + 2 * su,
              60 * x2 + 6 * t, 120 * x, 120};
      d.q = {td * x3 + cu * x2, x};
      d.q_xi = {3 * td * x2 + 2 * cu * x, 1};
      d.q_xixi = {6 * td * x + 2 * cu, 0};
      return d;
    };
    chart->topology = ChartTopology::cylinder;
    chart->u = {-detail::pi, detail::pi};
    chart->w = f.xi;
    chart->point = [th, A](double u, double x) {
      auto [t, td] = th(detail::wrap_angle(u, -detail::pi));
      return Vec3{u, -(5 * x * x * x * x + 3 * t * x * x + 2 * A * std::sin(u) * x), x};
    };
    chart->coords = [](const Vec3& p) { return Vec2{detail::wrap_angle(p[0], -detail::pi), p[2]}; };
  } else {
    f.q1 = kind == MorinKind::birth ? Interval{-2, 2} : Interval{-4.5, 4.5};
    f.q2 = kind == MorinKind::birth ? Interval{-1, 1} : Interval{-10, 10};
    f.xi = {-1.5, 1.5};
    f.derivs = [th](double y, double t, double x) {
      Derivs d;
      auto [v, vd] = th(y);
      double x2 = x * x;
      d.xi = {x2 * x2 + v * x2 + t * x, 4 * x2 * x + 2 * v * x + t, 12 * x2 + 2 * v, 24 * x, 24, 0};
      d.q = {vd * x2, x};
      d.q_xi = {2 * vd * x, 1};
      d.q_xixi = {2 * vd, 0};
      return d;
    };
    chart->topology = ChartTopology::box_disk;
    chart->u = f.q1;
    chart->w = f.xi;
    chart->point = [th](double y, double x) {
      auto [v, vd] = th(y);
      return Vec3{y, -(4 * x * x * x + 2 * v * x), x};
    };
    chart->coords = [](const Vec3& p) { return Vec2{p[0], p[2]}; };
  }
  f.chart = chart;
  return f;
}

// Plane function f_tau = -q1^2 q2 + q2^3/3 + tau (q1^2 + q2^2) whose graph is rotated in the
// (q, p) planes; only its Hessian matters.
struct QuadRot {
  double tau = 0;

  std::array<double, 3> hessian(double q1, double q2) const {  // (H11, H22, H12)
    return {-2 * q2 + 2 * tau, 2 * q2 + 2 * tau, -2 * q1};
  }
  // rows d(H11), d(H22), d(H12) with respect to (q1, q2)
  std::array<Vec2, 3> hessian_d(double, double) const { return {Vec2{0, -2}, Vec2{0, 2}, Vec2{-2, 0}}; }
};

}  // namespace caustic
