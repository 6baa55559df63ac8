#pragma once

#include "polyprop/geometry.hpp"
#include "polyprop/propagator.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace polyprop {

struct LatticeOptions {
  int grid = 512;        // nodes along the longer box side
  int slices = 32;
  double window = 6.0;   // momentum cutoff, in units of 1/sqrt(hbar dt / m)
  double taper = 1.0;    // width of the smooth cutoff, in units of 1/sqrt(hbar dt / m)
  double reach = 11.0;   // radius of the explicit wall correction, in kernel widths
  double wavelength = 0.0;  // expected de Broglie wavelength; 0 skips the resolution check
  double sponge = 0.0;      // width of the absorbing layer along the box edges
  double sponge_strength = 2.0;
};

struct Lattice {
  Vec2 origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0;
  int ny = 0;
  int slices = 1;
  std::vector<std::uint8_t> mask;  // 1 = feasible node
  std::vector<double> damping;     // per-node absorbing-layer factor, empty when unused
  ConstraintSet cs;
  LatticeOptions options;

  Vec2 node(int i, int j) const { return origin + h * Vec2(i, j); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

// Grid over `box` with one node exactly at `anchor`. Nodes where a constraint is
// violated, or that lie on a zero-thickness wall, are masked out.
Lattice make_lattice(const ConstraintSet& cs, const Box& box, const Vec2& anchor, const LatticeOptions& opts);

std::vector<std::uint8_t> lattice_mask(const ConstraintSet& cs, const Lattice& lat);
void apply_mask(const Lattice& lat, std::vector<std::complex<double>>& field);

struct LatticeField {
  Lattice lattice;
  std::vector<std::complex<double>> values;
  std::vector<std::string> warnings;  // instability warnings

  std::complex<double> at(int i, int j) const { return values[lattice.index(i, j)]; }
  // Separable Lanczos interpolation of the complex field.
  std::complex<double> sample(const Vec2& q) const;
};

LatticeField propagate_field(const Lattice& lat, const PhysicalConstants& pc, std::vector<std::complex<double>> initial);
LatticeField lattice_propagate(const Lattice& lat, const PhysicalConstants& pc, const Vec2& q_src);

// Discrete kernel of one slice, k[o] ~ h^2 K(o h), on the (2R+1)^2 offset window.
struct SliceKernel {
  int radius = 0;
  std::vector<std::complex<double>> values;
  std::complex<double> at(int dx, int dy) const {
    return values[static_cast<std::size_t>(dy + radius) * (2 * radius + 1) + (dx + radius)];
  }
};
SliceKernel slice_kernel(const Lattice& lat, const PhysicalConstants& pc);

IntensityProfile oracle_intensity(const LatticeField& field, const Screen& screen);

struct SimilarityReport {
  double correlation = 0.0;
  double max_abs_deviation = 0.0;
  std::vector<double> maxima_a, maxima_b;  // sub-bin positions
  std::vector<double> minima_a, minima_b;
  std::vector<double> maxima_offsets;  // per maximum of a, distance in bins to nearest maximum of b
  std::vector<double> minima_offsets;
  double max_maxima_offset = 0.0;
  int first_bin = 0;
  int last_bin = 0;  // exclusive
};

SimilarityReport compare_profiles(const IntensityProfile& a, const IntensityProfile& b, int first_bin = 0,
                                  int last_bin = -1);

// Bin range covering the n fringes nearest the screen centre of `p`, bounded by the
// adjacent minima.
std::pair<int, int> central_fringe_window(const IntensityProfile& p, int n_fringes);

std::vector<double> local_maxima(const std::vector<double>& y, int first, int last, double floor = 0.02);
std::vector<double> local_minima(const std::vector<double>& y, int first, int last);

// Two-step composition of 1-D free kernels over a real-space grid with a smooth
// erfc window, evaluated at the given targets. Source at the origin.
struct Composition1D {
  double h = 0.0;
  std::vector<double> targets;
  std::vector<std::complex<double>> composed;
  std::vector<std::complex<double>> exact;
  double max_error() const;
};
Composition1D compose_free_kernels_1d(const PhysicalConstants& pc, double dt, double h_over_sigma,
                                      const std::vector<double>& targets, double radius = 10.0,
                                      double cutoff = 7.0, double taper = 0.8);

}  // namespace polyprop
