#include "polyprop/paths.hpp"

#include "polyprop/errors.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace polyprop {

std::vector<double> PolygonalPath::segment_lengths() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < vertices.size(); ++i) out.push_back((vertices[i] - vertices[i - 1]).norm());
  return out;
}

VisibilityGraph build_visibility_graph(const ConstraintSet& cs, const Vec2& q_src, const Vec2& q_dst) {
  VisibilityGraph g;
  g.nodes.push_back(q_src);
  for (const auto& c : cs.corners()) g.nodes.push_back(c.position);
  g.nodes.push_back(q_dst);
  const int n = static_cast<int>(g.nodes.size());
  g.adjacency.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!segment_feasible(cs, g.nodes[i], g.nodes[j])) continue;
      const double len = (g.nodes[j] - g.nodes[i]).norm();
      g.adjacency[i].emplace_back(j, len);
      g.adjacency[j].emplace_back(i, len);
    }
  }
  return g;
}

std::vector<PolygonalPath> enumerate_paths(const ConstraintSet& cs, const Vec2& q_src, const Vec2& q_dst,
                                           int max_corners) {
  if (max_corners < 0) throw std::invalid_argument("enumerate_paths: max_corners must be >= 0");
  const VisibilityGraph g = build_visibility_graph(cs, q_src, q_dst);
  const int src = g.source();
  const int dst = g.target();

  std::vector<PolygonalPath> paths;
  std::vector<int> stack{src};
  std::vector<bool> on_path(g.nodes.size(), false);
  on_path[src] = true;

  std::function<void(int, double)> walk = [&](int node, double length) {
    for (const auto& [next, len] : g.adjacency[node]) {
      if (on_path[next]) continue;
      if (next == dst) {
        PolygonalPath p;
        for (int v : stack) p.vertices.push_back(g.nodes[v]);
        p.vertices.push_back(g.nodes[dst]);
        for (std::size_t k = 1; k < stack.size(); ++k) p.corner_ids.push_back(stack[k] - 1);
        p.length = length + len;
        paths.push_back(std::move(p));
        continue;
      }
      if (static_cast<int>(stack.size()) - 1 >= max_corners) continue;
      on_path[next] = true;
      stack.push_back(next);
      walk(next, length + len);
      stack.pop_back();
      on_path[next] = false;
    }
  };
  walk(src, 0.0);

  if (paths.empty()) throw NoPath("no feasible polygonal path between source and destination");
  std::sort(paths.begin(), paths.end(), [](const PolygonalPath& a, const PolygonalPath& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.corner_ids < b.corner_ids;
  });
  return paths;
}

PolygonalPath allocate_times(PolygonalPath path, double T, double mass) {
  if (!(T > 0.0)) throw std::invalid_argument("allocate_times: T must be positive");
  if (path.n_segments() < 1) throw std::invalid_argument("allocate_times: path has no segments");
  const auto lengths = path.segment_lengths();
  double total = 0.0;
  for (double l : lengths) total += l;
  path.length = total;
  path.segment_times.assign(lengths.size(), 0.0);
  if (total == 0.0) {
    if (lengths.size() > 1) throw ZeroLength("polygon with several segments has zero length");
    path.segment_times[0] = T;
    path.action = 0.0;
    return path;
  }
  double used = 0.0;
  for (std::size_t i = 0; i + 1 < lengths.size(); ++i) {
    path.segment_times[i] = T * lengths[i] / total;
    used += path.segment_times[i];
  }
  path.segment_times.back() = T - used;
  path.action = path_action(path, mass);
  return path;
}

double path_action(const PolygonalPath& path, double mass) {
  if (path.segment_times.size() != static_cast<std::size_t>(path.n_segments()))
    throw std::invalid_argument("path_action: segment times not assigned");
  double s = 0.0;
  for (int i = 0; i < path.n_segments(); ++i) {
    const double dt = path.segment_times[i];
    const double l2 = (path.vertices[i + 1] - path.vertices[i]).squaredNorm();
    if (l2 == 0.0) continue;
    s += 0.5 * mass * l2 / dt;
  }
  return s;
}

}  // namespace polyprop
