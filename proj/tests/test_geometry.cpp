#include <doctest.h>

#include <polyprop/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"

using namespace polyprop;
using testing::IPoint;

namespace {

const Box kBounds{Vec2(-50, -50), Vec2(50, 50)};

Vec2 to_vec(IPoint p) { return Vec2(static_cast<double>(p.x), static_cast<double>(p.y)); }

// Exact test for a segment entering the material behind a solid face a-b whose
// material side is `into`: is there u in [0,1] with the point inside the closed
// slab and strictly behind the face?
bool exact_enters_solid(IPoint p, IPoint q, IPoint a, IPoint b, IPoint into) {
  using I = __int128;
  const I ex = b.x - a.x, ey = b.y - a.y;
  I nx = -ey, ny = ex;
  if (nx * into.x + ny * into.y < 0) nx = -nx, ny = -ny;
  const I dx = q.x - p.x, dy = q.y - p.y;
  const I alpha = (p.x - a.x) * ex + (p.y - a.y) * ey;
  const I beta = dx * ex + dy * ey;
  const I E = ex * ex + ey * ey;
  // u as a fraction num/den with den > 0.
  struct Frac {
    I num, den;
  };
  auto less = [](Frac l, Frac r) { return l.num * r.den < r.num * l.den; };
  Frac lo{0, 1}, hi{1, 1};
  if (beta == 0) {
    if (alpha < 0 || alpha > E) return false;
  } else {
    Frac f0{-alpha, beta}, f1{E - alpha, beta};
    if (beta < 0) {
      f0 = {alpha, -beta};
      f1 = {alpha - E, -beta};
      std::swap(f0, f1);
    }
    if (less(lo, f0)) lo = f0;
    if (less(f1, hi)) hi = f1;
    if (less(hi, lo)) return false;
  }
  const I s0 = (p.x - a.x) * nx + (p.y - a.y) * ny;
  const I ds = dx * nx + dy * ny;
  auto behind = [&](Frac u) { return s0 * u.den + ds * u.num > 0; };
  return behind(lo) || behind(hi);
}

}  // namespace

TEST_CASE("active set: interior, face and slit corner") {
  const ConstraintSet cs({solid_wall(Vec2(0, -1), Vec2(0, 1), Vec2(1, 0))}, kBounds);
  CHECK(active_set(cs, Vec2(-1, 0)).empty());
  CHECK(active_set(cs, Vec2(0, 0.5)) == std::vector<int>{0});
  CHECK(active_set(cs, Vec2(0, 2)).empty());  // outside the slab

  const Scenario ds = testing::shipped("double_slit");
  const ConstraintSet dcs = ds.constraints();
  const auto ids = active_set(dcs, Vec2(0, 0.48));
  REQUIRE(ids.size() == 2);
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  for (int id : ids) CHECK(dcs.constraints()[id].face->a.y() == doctest::Approx(-0.48));
}

TEST_CASE("constraint gradients match central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 a(U(rng) * 5, U(rng) * 5);
    const Vec2 b = a + Vec2(U(rng), U(rng)).normalized() * 4.0;
    const Vec2 into(U(rng), U(rng));
    const ConstraintSet cs({solid_wall(a, b, into)}, kBounds);
    const Constraint& c = cs.constraints()[0];
    // A point inside the slab, a little in front of the face.
    const Vec2 q = a + (0.2 + 0.3 * (U(rng) + 1)) * (b - a) - 0.5 * c.face->outward_normal;
    const double h = 1e-6;
    const Vec2 fd((c.eval(q + Vec2(h, 0), 0) - c.eval(q - Vec2(h, 0), 0)) / (2 * h),
                  (c.eval(q + Vec2(0, h), 0) - c.eval(q - Vec2(0, h), 0)) / (2 * h));
    const Vec2 g = c.grad_q(q, 0);
    CHECK((fd - g).norm() <= 1e-6 * g.norm());
    CHECK(c.grad_t(q, 0) == 0.0);
  }
}

TEST_CASE("corner counts of the shipped slit walls") {
  CHECK(testing::shipped("double_slit").constraints().corners().size() == 4);
  CHECK(testing::shipped("single_slit").constraints().corners().size() == 2);
  const ConstraintSet half({solid_wall(Vec2(-100, 0), Vec2(100, 0), Vec2(0, -1))}, kBounds);
  CHECK(corners_of(half).empty());
  CHECK(testing::shipped("double_slit").constraints().warnings().empty());
}

TEST_CASE("three segments through one point raise a warning") {
  std::vector<WallSegment> faces;
  for (const Vec2& end : {Vec2(5, 0), Vec2(-3, 4), Vec2(-3, -4)}) {
    const auto p = thin_panel(Vec2(0, 0), end);
    faces.insert(faces.end(), p.begin(), p.end());
  }
  const ConstraintSet cs(faces, kBounds);
  // The shared point plus the three free ends.
  REQUIRE(cs.corners().size() == 4);
  REQUIRE(cs.warnings().size() == 1);
  CHECK(cs.warnings()[0].where == Vec2(0, 0));
  const auto& hub = cs.corners()[0];
  REQUIRE(hub.position == Vec2(0, 0));
  CHECK(hub.incident_constraints.size() == 6);
  CHECK(hub.cone_measure() == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("every cone direction steps into the feasible set") {
  std::vector<WallSegment> faces = thin_panel(Vec2(0, 0), Vec2(0, 10));
  faces.push_back(solid_wall(Vec2(4, 0), Vec2(8, 0), Vec2(0, -1)));
  faces.push_back(solid_wall(Vec2(4, 0), Vec2(4, 5), Vec2(1, 0)));
  const ConstraintSet cs(faces, kBounds);
  std::vector<ConstraintSet> scenes{cs};
  for (const char* name : {"corner_demo", "single_slit", "double_slit"}) scenes.push_back(testing::shipped(name).constraints());
  for (const auto& s : scenes) {
    for (const Corner& c : s.corners()) {
      CHECK(c.incident_constraints.size() >= 2);
      for (int id : c.incident_constraints) CHECK(std::abs(s.constraints()[id].eval(c.position, 0)) <= kEpsActive);
      for (int k = 0; k < 97; ++k) {
        const Vec2 d = c.cone_direction((k + 0.5) / 97);
        CHECK(c.in_cone(d));
        const Vec2 step = c.position + 1e-4 * d;
        CHECK(s.max_g(step) <= kEpsActive);
        CHECK(segment_feasible(s, c.position, step));
      }
    }
  }
  // At the solid corner (4, 0) each face blocks the quarter behind it.
  const auto& corners = cs.corners();
  const auto it = std::find_if(corners.begin(), corners.end(), [](const Corner& c) { return c.position == Vec2(4, 0); });
  REQUIRE(it != corners.end());
  CHECK(it->cone_measure() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("translation: active sets and corners move with the scene") {
  const ConstraintSet cs = testing::shipped("double_slit").constraints();
  const Vec2 off(3.25, -7.5);
  const ConstraintSet moved = cs.translated(off);
  REQUIRE(moved.corners().size() == cs.corners().size());
  for (std::size_t i = 0; i < cs.corners().size(); ++i) {
    CHECK((moved.corners()[i].position - (cs.corners()[i].position + off)).norm() <= 1e-12);
    CHECK(moved.corners()[i].incident_constraints == cs.corners()[i].incident_constraints);
    CHECK(moved.corners()[i].cone_measure() == doctest::Approx(cs.corners()[i].cone_measure()));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const Corner& c : cs.corners()) {
    CHECK(active_set(moved, c.position + off) == active_set(cs, c.position));
  }
  for (int k = 0; k < 200; ++k) {
    const Vec2 q(U(rng) * 2, U(rng) * 2);
    CHECK(active_set(moved, q + off) == active_set(cs, q));
  }
}

TEST_CASE("segment feasibility agrees with exact integer intersection") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> C(-20, 20);
  int blocked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const IPoint a{C(rng), C(rng)}, b{C(rng), C(rng)};
    if (a.x == b.x && a.y == b.y) continue;
    const IPoint p{C(rng), C(rng)}, q{C(rng), C(rng)};
    const bool thin = trial % 2 == 0;
    const IPoint into{C(rng), C(rng)};
    const Vec2 dir = to_vec(b) - to_vec(a);
    const Vec2 n(-dir.y(), dir.x());
    if (!thin && n.dot(to_vec(into)) == 0.0) continue;
    std::vector<WallSegment> faces;
    if (thin) faces = thin_panel(to_vec(a), to_vec(b));
    else faces.push_back(solid_wall(to_vec(a), to_vec(b), to_vec(into)));
    const ConstraintSet cs(faces, kBounds);
    const bool expected = thin ? !testing::proper_crossing(p, q, a, b) : !exact_enters_solid(p, q, a, b, into);
    if (!thin && (cs.max_g(to_vec(p)) > 0 || cs.max_g(to_vec(q)) > 0)) CHECK(!segment_feasible(cs, to_vec(p), to_vec(q)));
    CHECK(segment_feasible(cs, to_vec(p), to_vec(q)) == expected);
    CHECK(segment_feasible(cs, to_vec(q), to_vec(p)) == segment_feasible(cs, to_vec(p), to_vec(q)));
    blocked += expected ? 0 : 1;
  }
  CHECK(blocked > 100);
}

TEST_CASE("segment feasibility examples") {
  const ConstraintSet empty({}, kBounds);
  CHECK(segment_feasible(empty, Vec2(0, 0), Vec2(3, 4)));
  const ConstraintSet wall({solid_wall(Vec2(0, -5), Vec2(0, 5), Vec2(1, 0))}, kBounds);
  CHECK_FALSE(segment_feasible(wall, Vec2(-1, 0), Vec2(1, 0)));
  CHECK(segment_feasible(wall, Vec2(-1, 0), Vec2(0, 0)));  // ends on the face
  const Scenario ds = testing::shipped("double_slit");
  const ConstraintSet dcs = ds.constraints();
  for (const Corner& c : dcs.corners()) CHECK(segment_feasible(dcs, ds.source, c.position));
  CHECK_FALSE(segment_feasible(dcs, ds.source, Vec2(10, 0)));
}
