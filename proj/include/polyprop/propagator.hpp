#pragma once

#include "polyprop/geometry.hpp"
#include "polyprop/paths.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace polyprop {

using Amplitude = std::complex<double>;

struct PhysicalConstants {
  double mass = 1.0;
  double hbar = 1.0;
  double T = 1.0;

  void validate() const;
  // de Broglie wavelength of a particle covering `length` in time T.
  double wavelength(double length) const;
};

Amplitude free_kernel(const PhysicalConstants& pc, std::span<const double> q_o, std::span<const double> q, double dt);
Amplitude free_kernel(const PhysicalConstants& pc, const Vec2& q_o, const Vec2& q, double dt);

// Optional scalar weight per corner traversed; default 1.
using CornerWeight = std::function<double(const Corner&)>;

Amplitude polygon_amplitude(const PhysicalConstants& pc, const PolygonalPath& path);

struct Screen {
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
  int n_bins = 2;

  Vec2 bin_center(int i) const { return a + ((i + 0.5) / n_bins) * (b - a); }
  // Signed distance along the screen from its midpoint.
  double coordinate(int i) const { return ((i + 0.5) / n_bins - 0.5) * (b - a).norm(); }
  double bin_width() const { return (b - a).norm() / n_bins; }
};

struct IntensityProfile {
  std::vector<double> coordinate;
  std::vector<double> intensity;
  std::vector<int> n_paths;
  std::vector<bool> shadow;

  std::size_t size() const { return intensity.size(); }
};

// Scales intensities so the maximum is 1; leaves an all-zero profile untouched.
void normalize_peak(IntensityProfile& p);

std::vector<Amplitude> screen_amplitudes(const PhysicalConstants& pc, const ConstraintSet& cs, const Vec2& q_src,
                                         const Screen& screen, int max_corners, std::vector<int>* n_paths = nullptr,
                                         const CornerWeight& weight = {});

IntensityProfile screen_intensity(const PhysicalConstants& pc, const ConstraintSet& cs, const Vec2& q_src,
                                  const Screen& screen, int max_corners, const CornerWeight& weight = {});

}  // namespace polyprop
