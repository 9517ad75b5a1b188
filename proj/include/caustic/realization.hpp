#pragma once

#include "caustic/extract.hpp"
#include "caustic/surgery.hpp"

namespace caustic {

// What the end of a deformation family should look like, computed from its start.
struct Expectation {
  std::string label;
  std::function<Chain2D(const Extraction&)> chain;
  std::function<AlphaChain2D(const Extraction&)> alpha;
};

inline SurgeryBasis with_variant(SurgeryBasis b, Variant v) {
  b.variant = v;
  if (v == Variant::alpha) b.v1_outward.reset();
  return b;
}

inline Expectation expect_basis(std::string label, std::function<SurgeryBasis(const Extraction&)> basis) {
  Expectation e;
  e.label = std::move(label);
  e.chain = [basis](const Extraction& x) { return apply_direct(x.chain, with_variant(basis(x), Variant::chain)); };
  e.alpha = [basis](const Extraction& x) { return apply_direct(x.alpha, with_variant(basis(x), Variant::alpha)); };
  return e;
}

struct RealizationReport {
  std::string label;
  bool success = false;
  bool inconclusive = false;
  bool chain_ok = false, alpha_ok = false, embedded_ok = false;
  std::vector<double> tau;
  std::vector<bool> embedded;
  std::string message;
  Chain2D start, end, expected;
  AlphaChain2D start_alpha, end_alpha, expected_alpha;
  double seconds = 0;
};

inline RealizationReport verify_surgery_realization(const std::function<GenFun(double)>& family,
                                                    const Expectation& expect, const Tolerances& tol = {},
                                                    int samples = 10) {
  auto t0 = std::chrono::steady_clock::now();
  RealizationReport r;
  r.label = expect.label;
  auto done = [&]() -> RealizationReport& {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
  Extraction e0, e1;
  try {
    e0 = extract_chain(family(0), tol);
    e1 = extract_chain(family(1), tol);
  } catch (const std::exception& ex) {
    r.inconclusive = true;
    r.message = std::string("chain extraction failed: ") + ex.what();
    return done();
  }
  r.start = e0.chain;
  r.end = e1.chain;
  r.start_alpha = e0.alpha;
  r.end_alpha = e1.alpha;
  try {
    r.expected = expect.chain(e0);
    r.chain_ok = r.expected.surface == r.end.surface && chains_equivalent(r.expected, r.end);
  } catch (const std::exception& ex) {
    r.message += std::string("chain variant: ") + ex.what() + "; ";
  }
  try {
    r.expected_alpha = expect.alpha(e0);
    r.alpha_ok = r.expected_alpha.chain.surface == r.end_alpha.chain.surface &&
                 chains_equivalent(r.expected_alpha, r.end_alpha);
  } catch (const std::exception& ex) {
    r.message += std::string("alpha variant: ") + ex.what() + "; ";
  }
  r.embedded_ok = true;
  for (int k = 0; k < samples; ++k) {
    double tau = samples == 1 ? 0.0 : static_cast<double>(k) / (samples - 1);
    bool emb = check_embedded(family(tau), tol).embedded;
    r.tau.push_back(tau);
    r.embedded.push_back(emb);
    if (!emb) r.embedded_ok = false;
  }
  if (!r.chain_ok) r.message += "end chain differs from the expected chain; ";
  if (!r.alpha_ok) r.message += "end alpha-chain differs from the expected alpha-chain; ";
  if (!r.embedded_ok) r.message += "family leaves the embedded class; ";
  r.success = r.chain_ok && r.alpha_ok && r.embedded_ok;
  if (r.success) r.message = "realized";
  return done();
}

// ---- builtin expectations ----

inline Expectation morin_expectation(MorinKind kind) {
  switch (kind) {
    case MorinKind::birth:
      return expect_basis("morin 1,0: lips in the only region",
                          [](const Extraction& x) { return birth_basis(x.chain.regions.front().id, true); });
    case MorinKind::band:
      // the two cusps facing each other across y = 0
      return expect_basis("morin 1,1: band between the inner cusps", [](const Extraction& x) {
        int ka = -1, kb = -1;
        double da = 1e300, db = 1e300;
        for (const auto& [id, where] : x.cusp_point) {
          double y = x.cusp(id).location[0];
          if (std::abs(y + 1) < da) da = std::abs(y + 1), ka = id;
          if (std::abs(y - 1) < db) db = std::abs(y - 1), kb = id;
        }
        if (ka < 0 || kb < 0) throw PreconditionError("start chain has no cusps to join");
        const FoldCircle& fc = x.chain.circle_at(x.chain.circle_of_cusp(ka));
        return band_basis(fc.cusps[static_cast<size_t>(fc.cusp_index(ka))].v2_into, ka, kb);
      });
    case MorinKind::pair:
      return expect_basis("morin 2,0: cusp pair on the fold circle", [](const Extraction& x) {
        if (x.chain.circles.size() != 1) throw PreconditionError("start chain should have one fold circle");
        const FoldCircle& f = x.chain.circles.front();
        int l2 = x.chain.region_at(f.regions[0]).side == Side::L2 ? f.regions[0] : f.regions[1];
        return pair_basis(f.id, 0, l2);
      });
  }
  throw DomainError("unknown Morin kind");
}

// The circle bounding the disk of V_L lies over the larger radius and carries f_xixixi > 0.
inline Expectation mushroom_expectation() {
  Expectation e;
  e.label = "mushroom: double fold in the only region";
  e.chain = [](const Extraction& x) {
    return create_double_fold(x.chain, x.chain.regions.front().id, Coorientation::outward);
  };
  e.alpha = [](const Extraction& x) { return create_double_fold(x.alpha, x.alpha.chain.regions.front().id, 1); };
  return e;
}

inline std::function<GenFun(double)> morin_path(MorinKind kind, MorinParams P = {}) {
  return [kind, P](double tau) { return morin_family(kind, tau, P); };
}

// a runs from 0 to a_end as tau goes from 0 to 1
inline std::function<GenFun(double)> mushroom_path(double a_end = -0.05, MushroomParams P = {}) {
  return [a_end, P](double tau) { return mushroom_family(tau * a_end, P); };
}

}  // namespace caustic
