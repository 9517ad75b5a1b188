#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <random>

#include "caustic/catalog.hpp"
#include "caustic/complete.hpp"
#include "caustic/extract.hpp"
#include "caustic/moves.hpp"

namespace caustic {

inline constexpr std::uint64_t default_seed = 20260101;

// CAUSTIC_FORGE_SEED wins over the compiled-in seed.
inline std::uint64_t property_seed(std::uint64_t fallback = default_seed) {
  if (const char* s = std::getenv("CAUSTIC_FORGE_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') return v;
  }
  return fallback;
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
  bool coin() { return uniform(0, 1) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
};

// ---- generators ----

template <class ChainT>
std::vector<Move<ChainT>> direct_moves(const ChainT& c) {
  auto out = band_moves(c);
  for (auto* gen : {&pair_moves<ChainT>, &birth_moves<ChainT>})
    for (auto& m : gen(c)) out.push_back(std::move(m));
  return out;
}

inline std::vector<Chain2D> base_chains() {
  return {catalog::fold_free(disk()),          catalog::fold_free(disk(), Side::L2), catalog::fold_free(sphere()),
          catalog::fold_free(annulus()),       catalog::fold_free(torus()),          catalog::collapse(),
          catalog::single_fold_circle(),       catalog::single_fold_circle(annulus()), catalog::double_fold_disk()};
}

inline std::vector<AlphaChain2D> base_alpha_chains() {
  std::vector<AlphaChain2D> out;
  for (Surface s : {disk(), sphere(), annulus(), torus()}) out.push_back({catalog::fold_free(s), {}});
  out.push_back(catalog::collapse_alpha());
  out.push_back(catalog::single_fold_circle_alpha());
  out.push_back(catalog::single_fold_circle_alpha(annulus()));
  return out;
}

// A base chain pushed through a few random valid direct surgeries. Growth is capped to keep
// the graph isomorphism tests cheap.
template <class ChainT>
ChainT random_chain(Rng& rng, const std::vector<ChainT>& bases, int max_steps = 3) {
  ChainT c = rng.pick(bases);
  int steps = rng.uniform(0, max_steps);
  for (int i = 0; i < steps; ++i) {
    const Chain2D& b = detail::base_of(c);
    int cusps = 0;
    for (const auto& f : b.circles) cusps += static_cast<int>(f.cusps.size());
    if (b.circles.size() >= 4 || cusps >= 6) break;
    auto moves = direct_moves(c);
    if (moves.empty()) break;
    c = rng.pick(moves).result;
  }
  return c;
}

// ---- suites ----

struct PropertyResult {
  std::string name;
  std::uint64_t seed = 0;
  int cases = 0;
  int failures = 0;
  int skipped = 0;
  int min_cases = 200;
  std::string first_failure;
  double seconds = 0;

  bool ok() const { return failures == 0 && cases >= min_cases; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

namespace detail {

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

// A random chain (or alpha-chain) with a random valid bound direct basis.
template <class ChainT>
std::optional<std::pair<ChainT, SurgeryBasis>> random_site(Rng& rng, const std::vector<ChainT>& bases) {
  ChainT c = random_chain(rng, bases);
  auto moves = direct_moves(c);
  if (moves.empty()) return std::nullopt;
  SurgeryBasis b = rng.pick(moves).steps.front().basis;
  return std::make_pair(c, bind_basis(c, b));
}

template <class F>
void run_cases(PropertyResult& r, Rng& rng, int cases, int max_attempts, F&& body) {
  for (int attempt = 0; r.cases < cases && attempt < max_attempts; ++attempt) {
    try {
      if (body(rng)) ++r.cases;
      else ++r.skipped;
    } catch (const std::exception& e) {
      ++r.cases;
      r.fail(std::string("case ") + std::to_string(r.cases) + " threw: " + e.what());
    }
  }
}

template <class ChainT>
bool round_trip_case(PropertyResult& r, Rng& rng, const std::vector<ChainT>& bases) {
  auto site = random_site(rng, bases);
  if (!site) return false;
  auto& [c, b] = *site;
  ChainT back = apply_inverse(apply_direct(c, b), b);
  if (!chains_equivalent(back, c)) r.fail("round trip changed the chain at case " + std::to_string(r.cases + 1));
  return true;
}

template <class ChainT>
bool conservation_case(PropertyResult& r, Rng& rng, const std::vector<ChainT>& bases) {
  auto site = random_site(rng, bases);
  if (!site) return false;
  auto& [c, b] = *site;
  ChainT d = apply_direct(c, b);
  const Chain2D& x = base_of(c);
  const Chain2D& y = base_of(d);
  if (euler_value(x) != euler_value(y)) r.fail("euler_value changed at case " + std::to_string(r.cases + 1));
  else if (!(maslov_class(x) == maslov_class(y))) r.fail("maslov_class changed at case " + std::to_string(r.cases + 1));
  else if (!validate_chain(d).ok()) r.fail("direct output invalid at case " + std::to_string(r.cases + 1));
  return true;
}

template <class ChainT>
bool decompose_case(PropertyResult& r, Rng& rng, const std::vector<ChainT>& bases) {
  auto site = random_site(rng, bases);
  if (!site) return false;
  auto& [c, b] = *site;
  ChainT d = apply_direct(c, b);
  auto w = completeness_witness(d, b);
  if (!w) return false;
  auto seq = decompose_inverse(d, b, w);
  ChainT cur = d;
  for (const auto& st : seq) {
    if (st.direction != Direction::direct || !check_basis(cur, st.basis).ok()) {
      r.fail("decomposition step is not a valid direct surgery at case " + std::to_string(r.cases + 1));
      return true;
    }
    cur = apply_direct(cur, st.basis);
  }
  if (!chains_equivalent(cur, apply_inverse(d, b)))
    r.fail("decomposition differs from the inverse at case " + std::to_string(r.cases + 1));
  return true;
}

}  // namespace detail

inline PropertyResult prop_round_trip(std::uint64_t seed, int cases = 200) {
  detail::Stopwatch sw;
  PropertyResult r;
  r.name = "round_trip";
  r.seed = seed;
  Rng rng(seed);
  auto bases = base_chains();
  auto abases = base_alpha_chains();
  detail::run_cases(r, rng, cases, 20 * cases, [&](Rng& g) {
    return g.coin() ? detail::round_trip_case(r, g, bases) : detail::round_trip_case(r, g, abases);
  });
  r.seconds = sw.seconds();
  return r;
}

inline PropertyResult prop_conservation(std::uint64_t seed, int cases = 200) {
  detail::Stopwatch sw;
  PropertyResult r;
  r.name = "conservation";
  r.seed = seed;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto bases = base_chains();
  auto abases = base_alpha_chains();
  detail::run_cases(r, rng, cases, 20 * cases, [&](Rng& g) {
    return g.coin() ? detail::conservation_case(r, g, bases) : detail::conservation_case(r, g, abases);
  });
  r.seconds = sw.seconds();
  return r;
}

// Only sites carrying a completeness witness count as cases.
inline PropertyResult prop_decompose(std::uint64_t seed, int cases = 200) {
  detail::Stopwatch sw;
  PropertyResult r;
  r.name = "decompose_inverse";
  r.seed = seed;
  Rng rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  auto bases = base_chains();
  auto abases = base_alpha_chains();
  detail::run_cases(r, rng, cases, 40 * cases, [&](Rng& g) {
    return g.coin() ? detail::decompose_case(r, g, bases) : detail::decompose_case(r, g, abases);
  });
  r.seconds = sw.seconds();
  return r;
}

// Builtin families at generic parameters: away from the degenerate plateau of the mushroom.
inline GenFun random_builtin(Rng& rng, std::string* label = nullptr) {
  int k = rng.uniform(0, 6);
  char buf[64];
  GenFun f;
  switch (k) {
    case 0: {
      double eps = rng.real(0.05, 0.2);
      std::snprintf(buf, sizeof buf, "collapse eps=%.4f", eps);
      f = collapse_family(eps);
      break;
    }
    case 1: {
      double a = rng.real(-0.05, -0.035);
      std::snprintf(buf, sizeof buf, "mushroom a=%.4f", a);
      f = mushroom_family(a);
      break;
    }
    case 2:
    case 3:
    case 4: {
      auto kind = static_cast<MorinKind>(k - 2);
      MorinParams P;
      P.kappa = rng.real(0.15, 0.4);
      double tau = rng.coin() ? 1.0 : 0.0;
      std::snprintf(buf, sizeof buf, "morin %s tau=%.0f kappa=%.3f", to_string(kind), tau, P.kappa);
      f = morin_family(kind, tau, P);
      break;
    }
    case 5:
      std::snprintf(buf, sizeof buf, "mushroom a=0");
      f = mushroom_family(0);
      break;
    default:
      std::snprintf(buf, sizeof buf, "xi^2");
      f = xi_squared_family();
      break;
  }
  if (label) *label = buf;
  return f;
}

inline PropertyResult prop_extract_valid(std::uint64_t seed, int cases = 200, const Tolerances& base = {}) {
  detail::Stopwatch sw;
  PropertyResult r;
  r.name = "extract_valid";
  r.seed = seed;
  Rng rng(seed ^ 0x165667b19e3779f9ULL);
  for (int i = 0; i < cases; ++i) {
    std::string label;
    GenFun f = random_builtin(rng, &label);
    Tolerances tol = base;
    tol.grid_n = rng.uniform(32, 48);
    ++r.cases;
    try {
      Extraction x = extract_chain(f, tol);
      auto rep = validate_chain(x.chain);
      if (!rep.ok()) r.fail(label + ": " + rep.summary());
      else if (!validate_chain(x.alpha).ok()) r.fail(label + ": alpha-chain invalid");
      else if (!alpha_consistency(x.alpha, x.chain)) r.fail(label + ": alpha-chain inconsistent");
      else if (euler_value(x.chain) != 0) r.fail(label + ": euler_value " + std::to_string(euler_value(x.chain)));
    } catch (const std::exception& e) {
      r.fail(label + " threw: " + e.what());
    }
  }
  r.seconds = sw.seconds();
  return r;
}

inline std::vector<std::pair<std::string, GenFun>> builtin_families() {
  std::vector<std::pair<std::string, GenFun>> out{
      {"collapse", collapse_family(0.1)},     {"mushroom a=0", mushroom_family(0)},
      {"mushroom a=-0.05", mushroom_family(-0.05)}, {"cos2", cos2_family()},
      {"xi^2", xi_squared_family()}};
  for (auto k : {MorinKind::birth, MorinKind::band, MorinKind::pair})
    for (double tau : {0.0, 0.5, 1.0})
      out.emplace_back(std::string("morin ") + to_string(k) + " tau=" + std::to_string(tau), morin_family(k, tau));
  return out;
}

// `points` random domain points per builtin; one case per point.
inline PropertyResult prop_derivatives(std::uint64_t seed, int points = 1000) {
  detail::Stopwatch sw;
  PropertyResult r;
  r.name = "derivatives";
  r.seed = seed;
  Rng rng(seed ^ 0x27d4eb2f165667c5ULL);
  for (const auto& [name, f] : builtin_families())
    for (int i = 0; i < points; ++i) {
      double a = rng.real(f.q1.lo, f.q1.hi), b = rng.real(f.q2.lo, f.q2.hi), x = rng.real(f.xi.lo, f.xi.hi);
      ++r.cases;
      auto chk = cross_check(f, a, b, x, 1e-6);
      if (!chk.ok)
        r.fail(name + ": order " + std::to_string(chk.worst_order) + " error " + std::to_string(chk.worst_error) +
               " at " + detail::fmt_point(chk.worst_point));
    }
  r.seconds = sw.seconds();
  return r;
}

inline std::vector<PropertyResult> run_property_suites(std::uint64_t seed, int cases = 200) {
  return {prop_round_trip(seed, cases), prop_conservation(seed, cases), prop_decompose(seed, cases),
          prop_extract_valid(seed, cases), prop_derivatives(seed)};
}

}  // namespace caustic
