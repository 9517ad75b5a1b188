#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>

#include "caustic/types.hpp"

namespace caustic {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

struct Derivs {
  std::array<double, 6> xi{};  // d^i f / d xi^i, i = 0..5
  Vec2 q{};                    // df/dq
  Vec2 q_xi{};                 // d/dq of f_xi
  Vec2 q_xixi{};               // d/dq of f_xixi
};

struct Interval {
  double lo = 0, hi = 1;
  double length() const { return hi - lo; }
  bool contains(double x, double slack = 1e-12) const { return x >= lo - slack && x <= hi + slack; }
};

enum class Fiber { line, circle };

enum class ChartTopology { box_disk, cylinder, polar_disk };

// Parametrization of V_L by two coordinates (u, w). u is periodic for cylinder and polar
// charts; for polar charts w = 0 is the pole. orientation = -1 reverses du^dw.
struct Chart {
  ChartTopology topology = ChartTopology::box_disk;
  Interval u, w;
  int orientation = 1;
  std::function<Vec3(double, double)> point;
  std::function<Vec2(const Vec3&)> coords;

  bool u_periodic() const { return topology != ChartTopology::box_disk; }
  Surface surface() const { return topology == ChartTopology::cylinder ? annulus() : disk(); }
};

struct GenFun {
  std::string name;
  Interval q1{-1, 1}, q2{-1, 1};
  bool q1_periodic = false;
  Fiber fiber = Fiber::line;
  Interval xi{-1, 1};
  bool analytic = true;
  std::function<Derivs(double, double, double)> derivs;  // analytic families
  std::function<double(double, double, double)> value;   // used when not analytic
  std::shared_ptr<const Chart> chart;

  double xi_period() const { return fiber == Fiber::circle ? 2 * std::numbers::pi : 0.0; }
  double q1_period() const { return q1_periodic ? q1.length() : 0.0; }
  bool in_domain(double a, double b, double x) const {
    bool ok_q1 = q1_periodic || q1.contains(a);
    bool ok_xi = fiber == Fiber::circle || xi.contains(x);
    return ok_q1 && q2.contains(b) && ok_xi;
  }
};

struct Tolerances {
  double tol_root = 1e-10;
  double tol_guard = 1e-6;
  double tol_close = 1e-6;
  int grid_n = 64;
  double step_min = 1e-4;
  double step_max = 1e-1;

  bool sane() const {
    return tol_root > 0 && tol_guard > 0 && tol_close > 0 && tol_root < tol_guard && grid_n >= 4 && step_min > 0 &&
           step_min <= step_max;
  }
};

namespace detail {

// Central difference of g at x, Richardson-extrapolated over four step halvings.
inline double richardson(const std::function<double(double)>& g, double x, double h = 0.05) {
  double T[4][4];
  for (int i = 0; i < 4; ++i) {
    double hi = h / std::pow(2.0, i);
    T[i][0] = (g(x + hi) - g(x - hi)) / (2 * hi);
    for (int j = 1; j <= i; ++j) {
      double p = std::pow(4.0, j);
      T[i][j] = (p * T[i][j - 1] - T[i - 1][j - 1]) / (p - 1);
    }
  }
  return T[3][3];
}

// k-th derivative of g by a centred k-th difference, Richardson-extrapolated.
inline double nth_difference(const std::function<double(double)>& g, double x, int k, double h) {
  auto D = [&](double s) {
    double acc = 0, binom = 1;
    for (int j = 0; j <= k; ++j) {
      acc += ((j % 2) ? -1.0 : 1.0) * binom * g(x + (k / 2.0 - j) * s);
      binom = binom * (k - j) / (j + 1);
    }
    return acc / std::pow(s, k);
  };
  double a = D(h), b = D(h / 2), c = D(h / 4);
  double ab = (4 * b - a) / 3, bc = (4 * c - b) / 3;
  return (16 * bc - ab) / 15;
}

inline Derivs fd_derivs(const std::function<double(double, double, double)>& v, double a, double b, double x) {
  Derivs d;
  auto along = [&](double q1, double q2) { return [&, q1, q2](double s) { return v(q1, q2, s); }; };
  d.xi[0] = v(a, b, x);
  const double steps[6] = {0, 1e-2, 2e-2, 4e-2, 8e-2, 1.2e-1};
  for (int k = 1; k <= 5; ++k) d.xi[static_cast<size_t>(k)] = nth_difference(along(a, b), x, k, steps[k]);
  for (int i = 0; i < 2; ++i) {
    auto shift = [&](double s, int order) {
      double q1 = a + (i == 0 ? s : 0), q2 = b + (i == 1 ? s : 0);
      if (order == 0) return v(q1, q2, x);
      return nth_difference(along(q1, q2), x, order, steps[order]);
    };
    for (int order = 0; order < 3; ++order) {
      double val = richardson([&](double s) { return shift(s, order); }, 0.0, 1e-2);
      if (order == 0) d.q[static_cast<size_t>(i)] = val;
      else if (order == 1) d.q_xi[static_cast<size_t>(i)] = val;
      else d.q_xixi[static_cast<size_t>(i)] = val;
    }
  }
  return d;
}

// Evaluation without the domain check, used by charts that leave the seeding box.
inline Derivs raw_derivs(const GenFun& f, double a, double b, double x) {
  if (f.analytic && f.derivs) return f.derivs(a, b, x);
  if (!f.value) throw DomainError("generating function " + f.name + " has no evaluator");
  return fd_derivs(f.value, a, b, x);
}

}  // namespace detail

inline Derivs eval_derivatives(const GenFun& f, double q1, double q2, double xi) {
  if (!f.in_domain(q1, q2, xi))
    throw DomainError("point (" + std::to_string(q1) + ", " + std::to_string(q2) + ", " + std::to_string(xi) +
                      ") outside the domain of " + f.name);
  return detail::raw_derivs(f, q1, q2, xi);
}

inline GenFun from_value(std::string name, std::function<double(double, double, double)> v, Interval q1,
                         Interval q2, Fiber fiber, Interval xi) {
  GenFun f;
  f.name = std::move(name);
  f.q1 = q1;
  f.q2 = q2;
  f.fiber = fiber;
  f.xi = fiber == Fiber::circle ? Interval{0, 2 * std::numbers::pi} : xi;
  f.analytic = false;
  f.value = std::move(v);
  return f;
}

struct DerivativeCheck {
  bool ok = true;
  double worst_error = 0;  // relative, with unit floor
  Vec3 worst_point{};
  int worst_order = 0;
};

// Each analytic xi-derivative of order i against a Richardson difference of order i-1.
inline DerivativeCheck cross_check(const GenFun& f, double q1, double q2, double xi, double tol = 1e-6) {
  DerivativeCheck r;
  Derivs d = detail::raw_derivs(f, q1, q2, xi);
  for (int i = 1; i <= 5; ++i) {
    auto g = [&](double s) { return detail::raw_derivs(f, q1, q2, s).xi[static_cast<size_t>(i - 1)]; };
    double fd = detail::richardson(g, xi);
    double a = d.xi[static_cast<size_t>(i)];
    double err = std::abs(fd - a) / std::max(1.0, std::abs(a));
    if (err > r.worst_error) {
      r.worst_error = err;
      r.worst_point = {q1, q2, xi};
      r.worst_order = i;
    }
  }
  r.ok = r.worst_error <= tol;
  return r;
}

}  // namespace caustic
