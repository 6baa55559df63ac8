#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace polyprop {

using Vec2 = Eigen::Vector2d;

inline constexpr double kEpsActive = 1e-9;
inline constexpr double kEpsCorner = 1e-7;
inline constexpr double kInactive = -std::numeric_limits<double>::infinity();

struct Box {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};

  bool contains(const Vec2& q, double tol = 0.0) const {
    return q.x() >= lo.x() - tol && q.x() <= hi.x() + tol && q.y() >= lo.y() - tol &&
           q.y() <= hi.y() + tol;
  }
  Vec2 extent() const { return hi - lo; }
};

// One face of an obstacle. g(q) = n.(q - a) inside the slab between a and b and
// for points at most `depth` behind the face, -inf elsewhere. A zero-thickness
// panel is two faces with opposite normals and depth 0; a solid wall is one face
// with infinite depth.
struct WallSegment {
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
  Vec2 outward_normal{0.0, 0.0};  // unit, points from the feasible side into the obstacle
  double depth = 0.0;

  double length() const { return (b - a).norm(); }
  double slab(const Vec2& q) const { return (q - a).dot(b - a) / (b - a).squaredNorm(); }
  double signed_distance(const Vec2& q) const { return outward_normal.dot(q - a); }
  bool thin() const { return depth <= kEpsActive; }
  double eval(const Vec2& q) const;
};

struct Constraint {
  int id = 0;
  std::function<double(const Vec2&, double)> eval;
  std::function<Vec2(const Vec2&, double)> grad_q;
  std::function<double(const Vec2&, double)> grad_t;
  std::optional<WallSegment> face;  // set when the constraint is a lowered wall face
};

Constraint lower_face(int id, const WallSegment& w);

// Half-open angular range [lo, hi) in radians, lo in [0, 2pi), hi - lo <= 2pi.
struct AngularInterval {
  double lo = 0.0;
  double hi = 0.0;
  double measure() const { return hi - lo; }
};

struct Corner {
  Vec2 position{0.0, 0.0};
  std::vector<int> incident_constraints;
  std::vector<AngularInterval> outgoing_cone;

  double cone_measure() const;
  bool in_cone(const Vec2& direction) const;
  // Direction at the given fraction in [0,1) of the cone's total measure.
  Vec2 cone_direction(double fraction) const;
};

struct GeometryWarning {
  Vec2 where{0.0, 0.0};
  std::string message;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::vector<WallSegment> faces, Box bounds, std::vector<Constraint> extra = {});

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<WallSegment>& faces() const { return faces_; }
  const std::vector<Corner>& corners() const { return corners_; }
  const std::vector<GeometryWarning>& warnings() const { return warnings_; }
  const Box& bounds() const { return bounds_; }

  double max_g(const Vec2& q, double t = 0.0) const;
  bool feasible(const Vec2& q, double t = 0.0) const { return max_g(q, t) <= kEpsActive; }
  ConstraintSet translated(const Vec2& offset) const;

 private:
  std::vector<WallSegment> faces_;
  std::vector<Constraint> extra_;
  std::vector<Constraint> constraints_;
  std::vector<Corner> corners_;
  std::vector<GeometryWarning> warnings_;
  Box bounds_;
};

// A two-sided zero-thickness panel from a to b.
std::vector<WallSegment> thin_panel(const Vec2& a, const Vec2& b);
// A solid wall whose face runs from a to b; `into` points into the material.
WallSegment solid_wall(const Vec2& a, const Vec2& b, const Vec2& into);

std::vector<int> active_set(const ConstraintSet& cs, const Vec2& q, double t = 0.0);
const std::vector<Corner>& corners_of(const ConstraintSet& cs);
bool segment_feasible(const ConstraintSet& cs, const Vec2& p, const Vec2& q);

// True when the segment p->q passes through the face's obstacle: a proper crossing
// of a zero-thickness face, or entry behind a face with depth.
bool face_blocks(const WallSegment& w, const Vec2& p, const Vec2& q);
double distance_to_face(const WallSegment& w, const Vec2& q);

}  // namespace polyprop
