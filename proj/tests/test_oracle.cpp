#include <doctest.h>

#include <polyprop/errors.hpp>
#include <polyprop/oracle.hpp>
#include <polyprop/propagator.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace polyprop;

namespace {

using Field = std::vector<std::complex<double>>;

// Single-slice checks use a wider momentum window than the default so the
// window itself does not dominate the comparison with the exact kernel.
LatticeField free_field(int grid, int slices, double half = 12.0) {
  PhysicalConstants pc;
  const Box box{Vec2(-half, -half), Vec2(half, half)};
  LatticeOptions o;
  o.grid = grid;
  o.slices = slices;
  o.window = 10.0;
  o.taper = 1.5;
  return lattice_propagate(make_lattice(ConstraintSet({}, box), box, Vec2(0, 0), o), pc, Vec2(0, 0));
}

// Max error against the analytic kernel on nodes within three kernel widths.
double kernel_error(const LatticeField& f) {
  PhysicalConstants pc;
  double err = 0.0, ref = 0.0;
  const Lattice& lat = f.lattice;
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Vec2 q = lat.node(i, j);
      if (q.norm() > 3.0) continue;
      const auto k = free_kernel(pc, Vec2(0, 0), q, pc.T);
      err = std::max(err, std::abs(f.at(i, j) - k));
      ref = std::max(ref, std::abs(k));
    }
  }
  return err / ref;
}

Lattice slit_lattice(int grid, int slices) {
  std::vector<WallSegment> faces = thin_panel(Vec2(0, 1), Vec2(0, 100));
  const auto lower = thin_panel(Vec2(0, -1), Vec2(0, -100));
  faces.insert(faces.end(), lower.begin(), lower.end());
  const Box box{Vec2(-8, -8), Vec2(8, 8)};
  LatticeOptions o;
  o.grid = grid;
  o.slices = slices;
  return make_lattice(ConstraintSet(faces, box), box, Vec2(-4, 0), o);
}

}  // namespace

TEST_CASE("single slice reproduces the analytic kernel and converges in h") {
  const double coarse = kernel_error(free_field(81, 1));   // h = 0.3
  const double fine = kernel_error(free_field(161, 1));    // h = 0.15
  CHECK(fine <= 1e-5);
  CHECK(coarse / fine >= 3.0);
}

TEST_CASE("two slices agree with one on interior nodes") {
  const auto one = free_field(193, 1), two = free_field(193, 2);
  double err = 0.0, ref = 0.0;
  const Lattice& lat = one.lattice;
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      if (lat.node(i, j).norm() > 3.0) continue;
      err = std::max(err, std::abs(one.at(i, j) - two.at(i, j)));
      ref = std::max(ref, std::abs(one.at(i, j)));
    }
  }
  CHECK(err / ref <= 1e-4);
}

TEST_CASE("mask marks violated and on-wall nodes") {
  const Lattice lat = slit_lattice(129, 8);
  int blocked = 0;
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Vec2 q = lat.node(i, j);
      const bool on_wall = std::abs(q.x()) <= 1e-9 && std::abs(q.y()) >= 1.0 - 1e-9;
      CHECK(static_cast<bool>(lat.mask[lat.index(i, j)]) == (!on_wall && lat.cs.max_g(q) <= kEpsActive));
      blocked += lat.mask[lat.index(i, j)] ? 0 : 1;
    }
  }
  CHECK(blocked > 0);

  Field f(lat.size(), {1.0, -2.0});
  apply_mask(lat, f);
  Field twice = f;
  apply_mask(lat, twice);
  CHECK(twice == f);
}

TEST_CASE("propagation is linear in the initial field") {
  const Lattice lat = slit_lattice(97, 8);
  PhysicalConstants pc;
  pc.T = 2.0;
  Field a(lat.size()), b(lat.size());
  a[lat.index(20, 48)] = {1.0, 0.5};
  b[lat.index(15, 40)] = {-0.3, 2.0};
  b[lat.index(25, 60)] = {0.7, 0.0};
  Field sum(lat.size());
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = 2.0 * a[k] + b[k];
  const auto fa = propagate_field(lat, pc, a), fb = propagate_field(lat, pc, b), fs = propagate_field(lat, pc, sum);
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    err = std::max(err, std::abs(fs.values[k] - (2.0 * fa.values[k] + fb.values[k])));
    ref = std::max(ref, std::abs(fs.values[k]));
  }
  CHECK(err <= 1e-12 * ref);
}

TEST_CASE("a closed wall keeps the amplitude on the source side") {
  const Box box{Vec2(-8, -8), Vec2(8, 8)};
  LatticeOptions o;
  o.grid = 129;
  o.slices = 16;
  o.sponge = 3.0;
  const Lattice lat = make_lattice(ConstraintSet(thin_panel(Vec2(0, -100), Vec2(0, 100)), box), box, Vec2(-3, 0), o);
  PhysicalConstants pc;
  pc.T = 3.0;
  const auto f = lattice_propagate(lat, pc, Vec2(-3, 0));
  double front = 0.0, back = 0.0;
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const double x = lat.node(i, j).x();
      (x < 0 ? front : back) = std::max(x < 0 ? front : back, std::abs(f.at(i, j)));
    }
  }
  CHECK(back <= 1e-3 * front);
  for (std::size_t k = 0; k < lat.size(); ++k) {
    if (!lat.mask[k]) CHECK(f.values[k] == std::complex<double>(0.0));
  }
}

TEST_CASE("instability warnings and source placement") {
  PhysicalConstants pc;
  const Box box{Vec2(-4, -4), Vec2(4, 4)};
  LatticeOptions o;
  o.grid = 65;
  o.slices = 2;
  o.wavelength = 0.2;  // 8 h would need h <= 0.025
  const Lattice lat = make_lattice(ConstraintSet({}, box), box, Vec2(0, 0), o);
  const auto f = lattice_propagate(lat, pc, Vec2(0, 0));
  CHECK(f.warnings.size() >= 2);
  CHECK_THROWS_AS(lattice_propagate(lat, pc, Vec2(0.01, 0)), ValidationError);
}

TEST_CASE("profile comparison") {
  IntensityProfile a;
  for (int i = 0; i < 200; ++i) {
    const double x = (i - 100) / 10.0;
    a.coordinate.push_back(x);
    a.intensity.push_back(std::cos(x) * std::cos(x) * std::exp(-(x - 2) * (x - 2) / 50));
  }
  const auto same = compare_profiles(a, a);
  CHECK(same.correlation == doctest::Approx(1.0));
  CHECK(same.max_maxima_offset == 0.0);

  IntensityProfile mirror = a;
  std::reverse(mirror.intensity.begin(), mirror.intensity.end());
  CHECK(compare_profiles(a, mirror).correlation < 1.0);

  // cos^2 peaks at multiples of pi, i.e. bins 100 + 10 k pi after parabolic refinement.
  IntensityProfile c;
  for (int i = 0; i < 200; ++i) c.intensity.push_back(std::pow(std::cos((i - 100) / 10.0), 2));
  const auto peaks = local_maxima(c.intensity, 0, 200);
  REQUIRE(peaks.size() == 7);
  for (double p : peaks) {
    const double k = std::round((p - 100) / (10 * std::numbers::pi));
    CHECK(std::abs(p - (100 + 10 * k * std::numbers::pi)) <= 0.01);
  }
}
