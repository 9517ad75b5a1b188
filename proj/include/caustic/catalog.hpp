#pragma once

#include "caustic/types.hpp"

// Small hand-built chains used by the CLI demos and the tests.
namespace caustic::catalog {

inline Chain2D fold_free(Surface s, Side side = Side::L1) {
  Chain2D c;
  c.surface = s;
  c.regions.push_back({0, s.euler(), side, s.boundary_count, {}});
  return c;
}

// Cylinder with one essential fold circle and four cusps whose v2 alternate between the
// two annular regions. Region 0 is L1 and receives v1; cusp 0 sends v2 into L2 and is
// followed by the arc of positive third derivative.
inline Chain2D collapse() {
  Chain2D c;
  c.surface = annulus();
  c.regions.push_back({0, 0, Side::L1, 1, {0}});
  c.regions.push_back({1, 0, Side::L2, 1, {0}});
  FoldCircle f;
  f.id = 0;
  f.regions = {0, 1};
  f.v1_into = 0;
  f.cls = Homotopy::essential_a;
  f.orientation = 1;
  f.cusps = {{0, 1}, {1, 0}, {2, 1}, {3, 0}};
  c.circles.push_back(f);
  return c;
}

inline AlphaChain2D collapse_alpha() { return {collapse(), {{0, {1, -1, 1, -1}}}}; }

// One null cusp-free circle on the disk around an L2 disk.
inline Chain2D single_fold_circle(Surface s = disk()) {
  Chain2D c;
  c.surface = s;
  c.regions.push_back({0, s.euler() - 1, Side::L1, s.boundary_count, {0}});
  c.regions.push_back({1, 1, Side::L2, 0, {0}});
  FoldCircle f;
  f.id = 0;
  f.regions = {0, 1};
  f.v1_into = 0;
  c.circles.push_back(f);
  return c;
}

inline AlphaChain2D single_fold_circle_alpha(Surface s = disk()) { return {single_fold_circle(s), {{0, {1}}}}; }

// Mushroom output: two concentric cusp-free circles with opposite coorientations.
inline Chain2D double_fold_disk() {
  Chain2D c;
  c.surface = disk();
  c.regions.push_back({0, 0, Side::L1, 1, {0}});
  c.regions.push_back({1, 0, Side::L2, 0, {0, 1}});
  c.regions.push_back({2, 1, Side::L1, 0, {1}});
  FoldCircle outer, inner;
  outer.id = 0;
  outer.regions = {0, 1};
  outer.v1_into = 0;
  inner.id = 1;
  inner.regions = {1, 2};
  inner.v1_into = 2;
  c.circles = {outer, inner};
  return c;
}

}  // namespace caustic::catalog
