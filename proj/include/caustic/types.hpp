#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace caustic {

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : DomainError {
  using DomainError::DomainError;
};

enum class Side { L1, L2 };

inline Side opposite(Side s) { return s == Side::L1 ? Side::L2 : Side::L1; }
inline const char* to_string(Side s) { return s == Side::L1 ? "L1" : "L2"; }
inline int side_sign(Side s) { return s == Side::L1 ? 1 : -1; }

enum class Homotopy { null, essential_a, essential_b, boundary_parallel_1, boundary_parallel_2 };

inline const char* to_string(Homotopy h) {
  switch (h) {
    case Homotopy::null: return "null";
    case Homotopy::essential_a: return "essential_a";
    case Homotopy::essential_b: return "essential_b";
    case Homotopy::boundary_parallel_1: return "boundary_parallel_1";
    case Homotopy::boundary_parallel_2: return "boundary_parallel_2";
  }
  return "null";
}

struct Violation {
  std::string code;
  std::string element;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
  }
  void add(std::string code, std::string element, std::string detail = {}) {
    violations.push_back({std::move(code), std::move(element), std::move(detail)});
  }
  void merge(const ValidationReport& o) {
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  }
  std::string summary() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v.code + "(" + v.element + ")";
      if (!v.detail.empty()) s += ": " + v.detail;
    }
    return s;
  }
};

struct PreconditionError : std::runtime_error {
  ValidationReport report;
  explicit PreconditionError(const std::string& what, ValidationReport r = {})
      : std::runtime_error(r.ok() ? what : what + ": " + r.summary()), report(std::move(r)) {}
};

struct Surface {
  int genus = 0;
  int boundary_count = 0;
  bool orientable = true;

  int euler() const { return 2 - 2 * genus - boundary_count; }
  bool operator==(const Surface&) const = default;
};

inline Surface sphere() { return {0, 0, true}; }
inline Surface disk() { return {0, 1, true}; }
inline Surface annulus() { return {0, 2, true}; }
inline Surface torus() { return {1, 0, true}; }

struct Region {
  int id = 0;
  int euler_char = 0;
  Side side = Side::L1;
  int boundary_components = 0;  // surface boundary circles lying in this region
  std::vector<int> incident_circles;

  bool operator==(const Region&) const = default;
};

struct Cusp {
  int id = 0;
  int v2_into = 0;

  bool operator==(const Cusp&) const = default;
};

// Cusps are listed along the intrinsic orientation: (v1, tangent) positive.
// Arc k runs from cusp k to cusp k+1; a cusp-free circle has a single arc.
struct FoldCircle {
  int id = 0;
  std::array<int, 2> regions{0, 0};
  int v1_into = 0;
  Homotopy cls = Homotopy::null;
  int orientation = 1;  // homology class of the intrinsically oriented circle is orientation * [cls]
  std::vector<Cusp> cusps;

  int other(int r) const { return regions[0] == r ? regions[1] : regions[0]; }
  bool adjacent(int r) const { return regions[0] == r || regions[1] == r; }
  int arc_count() const { return cusps.empty() ? 1 : static_cast<int>(cusps.size()); }
  int cusp_index(int cusp_id) const {
    for (size_t i = 0; i < cusps.size(); ++i)
      if (cusps[i].id == cusp_id) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const FoldCircle&) const = default;
};

struct Chain2D {
  Surface surface;
  std::vector<Region> regions;
  std::vector<FoldCircle> circles;

  const Region* region(int id) const {
    for (const auto& r : regions)
      if (r.id == id) return &r;
    return nullptr;
  }
  Region* region(int id) {
    for (auto& r : regions)
      if (r.id == id) return &r;
    return nullptr;
  }
  const FoldCircle* circle(int id) const {
    for (const auto& c : circles)
      if (c.id == id) return &c;
    return nullptr;
  }
  FoldCircle* circle(int id) {
    for (auto& c : circles)
      if (c.id == id) return &c;
    return nullptr;
  }
  const Region& region_at(int id) const {
    auto* r = region(id);
    if (!r) throw StructuralError("unknown region id " + std::to_string(id));
    return *r;
  }
  const FoldCircle& circle_at(int id) const {
    auto* c = circle(id);
    if (!c) throw StructuralError("unknown circle id " + std::to_string(id));
    return *c;
  }
  // circle id holding the cusp, or -1
  int circle_of_cusp(int cusp_id) const {
    for (const auto& c : circles)
      if (c.cusp_index(cusp_id) >= 0) return c.id;
    return -1;
  }
  int cusp_count() const {
    int n = 0;
    for (const auto& c : circles) n += static_cast<int>(c.cusps.size());
    return n;
  }
  int next_region_id() const {
    int m = -1;
    for (const auto& r : regions) m = std::max(m, r.id);
    return m + 1;
  }
  int next_circle_id() const {
    int m = -1;
    for (const auto& c : circles) m = std::max(m, c.id);
    return m + 1;
  }
  int next_cusp_id() const {
    int m = -1;
    for (const auto& c : circles)
      for (const auto& k : c.cusps) m = std::max(m, k.id);
    return m + 1;
  }
  bool operator==(const Chain2D&) const = default;
};

// Arc signs are the signs of the third fiber derivative along each arc.
struct AlphaChain2D {
  Chain2D chain;
  std::map<int, std::vector<int>> arc_signs;

  bool operator==(const AlphaChain2D&) const = default;
};

}  // namespace caustic
