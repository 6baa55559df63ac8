#pragma once

#include "polyprop/geometry.hpp"

#include <utility>
#include <vector>

namespace polyprop {

struct PolygonalPath {
  std::vector<Vec2> vertices;       // source, corners..., destination
  std::vector<int> corner_ids;      // index into corners_of(cs) per interior vertex
  std::vector<double> segment_times;
  double length = 0.0;
  double action = 0.0;

  int n_corners() const { return static_cast<int>(corner_ids.size()); }
  int n_segments() const { return static_cast<int>(vertices.size()) - 1; }
  std::vector<double> segment_lengths() const;
};

// Node 0 is the source, nodes 1..C are the corners in order, node C+1 the target.
struct VisibilityGraph {
  std::vector<Vec2> nodes;
  std::vector<std::vector<std::pair<int, double>>> adjacency;

  int source() const { return 0; }
  int target() const { return static_cast<int>(nodes.size()) - 1; }
};

VisibilityGraph build_visibility_graph(const ConstraintSet& cs, const Vec2& q_src, const Vec2& q_dst);

std::vector<PolygonalPath> enumerate_paths(const ConstraintSet& cs, const Vec2& q_src, const Vec2& q_dst,
                                           int max_corners);

PolygonalPath allocate_times(PolygonalPath path, double T, double mass = 1.0);

double path_action(const PolygonalPath& path, double mass = 1.0);

}  // namespace polyprop
