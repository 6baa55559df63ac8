#include "polyprop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace polyprop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double angle_of(const Vec2& v) { return wrap_angle(std::atan2(v.y(), v.x())); }

double slab_tol(const WallSegment& w) { return kEpsActive / w.length(); }

// Parameter range [u0, u1] of p + u (q - p) for which lo <= f0 + u df <= hi.
bool clip(double f0, double df, double lo, double hi, double& u0, double& u1) {
  if (df == 0.0) return f0 >= lo && f0 <= hi;
  double a = (lo - f0) / df;
  double b = (hi - f0) / df;
  if (a > b) std::swap(a, b);
  u0 = std::max(u0, a);
  u1 = std::min(u1, b);
  return u0 <= u1;
}

bool crosses_thin(const WallSegment& w, const Vec2& p, const Vec2& q) {
  const double sp = w.signed_distance(p);
  const double sq = w.signed_distance(q);
  const bool opposite = (sp < -kEpsActive && sq > kEpsActive) || (sq < -kEpsActive && sp > kEpsActive);
  if (!opposite) return false;
  const Vec2 x = p + (sp / (sp - sq)) * (q - p);
  const double tau = w.slab(x);
  const double tol = slab_tol(w);
  return tau > tol && tau < 1.0 - tol;
}

bool enters_band(const WallSegment& w, const Vec2& p, const Vec2& q) {
  if (w.thin()) return false;
  // Undilated slab: leaving a solid corner along its neighbouring side must
  // not graze the tolerance band of the face.
  const Vec2 d = q - p;
  double u0 = 0.0, u1 = 1.0;
  if (!clip(w.slab(p), d.dot(w.b - w.a) / (w.b - w.a).squaredNorm(), 0.0, 1.0, u0, u1)) return false;
  const double s0 = w.signed_distance(p);
  const double ds = w.outward_normal.dot(d);
  if (!clip(s0, ds, -std::numeric_limits<double>::infinity(), w.depth, u0, u1)) return false;
  const double smax = std::max(s0 + u0 * ds, s0 + u1 * ds);
  return smax > kEpsActive;
}

struct Sector {
  double lo;
  double width;
};

std::vector<AngularInterval> complement(std::vector<Sector> blocked) {
  if (blocked.empty()) return {AngularInterval{0.0, kTwoPi}};
  for (auto& s : blocked) s.lo = wrap_angle(s.lo);
  std::sort(blocked.begin(), blocked.end(), [](const Sector& a, const Sector& b) { return a.lo < b.lo; });
  const double base = blocked.front().lo;
  std::vector<AngularInterval> out;
  double end = base + blocked.front().width;
  for (std::size_t i = 1; i < blocked.size(); ++i) {
    if (blocked[i].lo > end) out.push_back({end, blocked[i].lo});
    end = std::max(end, blocked[i].lo + blocked[i].width);
  }
  if (base + kTwoPi > end) out.push_back({end, base + kTwoPi});
  for (auto& iv : out) {
    const double w = iv.hi - iv.lo;
    iv.lo = wrap_angle(iv.lo);
    iv.hi = iv.lo + w;
  }
  std::erase_if(out, [](const AngularInterval& iv) { return iv.measure() <= 1e-15; });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return out;
}

struct Endpoint {
  Vec2 at;
  Vec2 other;
  int face;
};

}  // namespace

double WallSegment::eval(const Vec2& q) const {
  const double tol = slab_tol(*this);
  const double tau = slab(q);
  if (tau < -tol || tau > 1.0 + tol) return kInactive;
  const double s = signed_distance(q);
  if (s > depth + kEpsActive) return kInactive;
  return s;
}

Constraint lower_face(int id, const WallSegment& w) {
  Constraint c;
  c.id = id;
  c.face = w;
  c.eval = [w](const Vec2& q, double) { return w.eval(q); };
  c.grad_q = [w](const Vec2& q, double) -> Vec2 {
    return std::isfinite(w.eval(q)) ? w.outward_normal : Vec2::Zero();
  };
  c.grad_t = [](const Vec2&, double) { return 0.0; };
  return c;
}

double Corner::cone_measure() const {
  double m = 0.0;
  for (const auto& iv : outgoing_cone) m += iv.measure();
  return m;
}

bool Corner::in_cone(const Vec2& direction) const {
  const double a = angle_of(direction);
  for (const auto& iv : outgoing_cone) {
    const double rel = wrap_angle(a - iv.lo);
    if (rel > 0.0 && rel < iv.measure()) return true;
    if (iv.measure() >= kTwoPi) return true;
  }
  return false;
}

Vec2 Corner::cone_direction(double fraction) const {
  double target = fraction * cone_measure();
  for (const auto& iv : outgoing_cone) {
    if (target < iv.measure()) {
      const double a = iv.lo + target;
      return {std::cos(a), std::sin(a)};
    }
    target -= iv.measure();
  }
  const auto& last = outgoing_cone.back();
  return {std::cos(last.hi), std::sin(last.hi)};
}

ConstraintSet::ConstraintSet(std::vector<WallSegment> faces, Box bounds, std::vector<Constraint> extra)
    : faces_(std::move(faces)), extra_(std::move(extra)), bounds_(bounds) {
  int id = 0;
  for (auto& f : faces_) {
    f.outward_normal.normalize();
    constraints_.push_back(lower_face(id++, f));
  }
  for (auto c : extra_) {
    c.id = id++;
    constraints_.push_back(std::move(c));
  }

  std::vector<Endpoint> ends;
  for (int i = 0; i < static_cast<int>(faces_.size()); ++i) {
    ends.push_back({faces_[i].a, faces_[i].b, i});
    ends.push_back({faces_[i].b, faces_[i].a, i});
  }
  std::vector<bool> used(ends.size(), false);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (used[i]) continue;
    std::vector<const Endpoint*> group;
    for (std::size_t j = i; j < ends.size(); ++j) {
      if (!used[j] && (ends[j].at - ends[i].at).norm() <= kEpsActive) {
        used[j] = true;
        group.push_back(&ends[j]);
      }
    }
    std::set<int> ids;
    for (auto* e : group) ids.insert(e->face);
    if (ids.size() < 2 || !bounds_.contains(ends[i].at, kEpsActive)) continue;

    Corner c;
    c.position = ends[i].at;
    c.incident_constraints.assign(ids.begin(), ids.end());
    std::vector<Sector> blocked;
    std::vector<std::pair<Vec2, Vec2>> segments;
    for (auto* e : group) {
      const WallSegment& f = faces_[e->face];
      const Vec2 w = (e->other - e->at).normalized();
      const double aw = angle_of(w);
      if (f.thin()) {
        blocked.push_back({aw, 0.0});
      } else {
        const double cross = w.x() * f.outward_normal.y() - w.y() * f.outward_normal.x();
        blocked.push_back(cross > 0.0 ? Sector{aw, std::numbers::pi / 2} : Sector{aw - std::numbers::pi / 2, std::numbers::pi / 2});
      }
      bool seen = false;
      for (const auto& s : segments) seen = seen || (s.second - e->other).norm() <= kEpsActive;
      if (!seen) segments.emplace_back(e->at, e->other);
    }
    c.outgoing_cone = complement(blocked);
    if (segments.size() >= 3) {
      std::ostringstream msg;
      msg << segments.size() << " wall segments meet at (" << c.position.x() << ", " << c.position.y() << ")";
      warnings_.push_back({c.position, msg.str()});
    }
    corners_.push_back(std::move(c));
  }
}

double ConstraintSet::max_g(const Vec2& q, double t) const {
  double g = kInactive;
  for (const auto& c : constraints_) g = std::max(g, c.eval(q, t));
  return g;
}

ConstraintSet ConstraintSet::translated(const Vec2& offset) const {
  std::vector<WallSegment> faces = faces_;
  for (auto& f : faces) {
    f.a += offset;
    f.b += offset;
  }
  std::vector<Constraint> extra;
  for (const auto& c : extra_) {
    Constraint m = c;
    m.eval = [e = c.eval, offset](const Vec2& q, double t) { return e(q - offset, t); };
    m.grad_q = [g = c.grad_q, offset](const Vec2& q, double t) { return g(q - offset, t); };
    m.grad_t = [g = c.grad_t, offset](const Vec2& q, double t) { return g(q - offset, t); };
    extra.push_back(std::move(m));
  }
  return ConstraintSet(std::move(faces), Box{bounds_.lo + offset, bounds_.hi + offset}, std::move(extra));
}

std::vector<WallSegment> thin_panel(const Vec2& a, const Vec2& b) {
  const Vec2 d = (b - a).normalized();
  const Vec2 n(-d.y(), d.x());
  return {WallSegment{a, b, n, 0.0}, WallSegment{a, b, -n, 0.0}};
}

WallSegment solid_wall(const Vec2& a, const Vec2& b, const Vec2& into) {
  const Vec2 d = (b - a).normalized();
  Vec2 n(-d.y(), d.x());
  if (n.dot(into) < 0.0) n = -n;
  return WallSegment{a, b, n, std::numeric_limits<double>::infinity()};
}

std::vector<int> active_set(const ConstraintSet& cs, const Vec2& q, double t) {
  std::vector<int> ids;
  for (const auto& c : cs.constraints()) {
    if (std::abs(c.eval(q, t)) <= kEpsActive) ids.push_back(c.id);
  }
  return ids;
}

const std::vector<Corner>& corners_of(const ConstraintSet& cs) { return cs.corners(); }

bool face_blocks(const WallSegment& w, const Vec2& p, const Vec2& q) {
  return w.thin() ? crosses_thin(w, p, q) : enters_band(w, p, q);
}

double distance_to_face(const WallSegment& w, const Vec2& q) {
  const double tau = std::clamp(w.slab(q), 0.0, 1.0);
  return (q - (w.a + tau * (w.b - w.a))).norm();
}

bool segment_feasible(const ConstraintSet& cs, const Vec2& p, const Vec2& q) {
  for (const auto& c : cs.constraints()) {
    if (c.face) {
      if (face_blocks(*c.face, p, q)) return false;
      continue;
    }
    constexpr int kSamples = 256;
    for (int k = 0; k <= kSamples; ++k) {
      const Vec2 x = p + (static_cast<double>(k) / kSamples) * (q - p);
      if (c.eval(x, 0.0) > kEpsActive) return false;
    }
  }
  return true;
}

}  // namespace polyprop
