#include "polyprop/propagator.hpp"

#include "polyprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polyprop {

void PhysicalConstants::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ValidationError("mass must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("hbar must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("time must be positive");
}

double PhysicalConstants::wavelength(double length) const { return 2.0 * std::numbers::pi * hbar * T / (mass * length); }

Amplitude free_kernel(const PhysicalConstants& pc, std::span<const double> q_o, std::span<const double> q, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("free_kernel: dt must be positive");
  if (q_o.size() != q.size()) throw std::invalid_argument("free_kernel: dimension mismatch");
  const double n = static_cast<double>(q.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) d2 += (q[i] - q_o[i]) * (q[i] - q_o[i]);
  const double modulus = std::pow(pc.mass / (2.0 * std::numbers::pi * pc.hbar * dt), 0.5 * n);
  const double phase = pc.mass * d2 / (2.0 * pc.hbar * dt) - n * std::numbers::pi / 4.0;
  return std::polar(modulus, phase);
}

Amplitude free_kernel(const PhysicalConstants& pc, const Vec2& q_o, const Vec2& q, double dt) {
  return free_kernel(pc, std::span<const double>(q_o.data(), 2), std::span<const double>(q.data(), 2), dt);
}

Amplitude polygon_amplitude(const PhysicalConstants& pc, const PolygonalPath& path) {
  if (path.segment_times.size() != static_cast<std::size_t>(path.n_segments()))
    throw std::invalid_argument("polygon_amplitude: segment times not assigned");
  Amplitude a = 1.0;
  for (int i = 0; i < path.n_segments(); ++i) a *= free_kernel(pc, path.vertices[i], path.vertices[i + 1], path.segment_times[i]);
  return a;
}

void normalize_peak(IntensityProfile& p) {
  const double peak = p.intensity.empty() ? 0.0 : *std::max_element(p.intensity.begin(), p.intensity.end());
  if (peak <= 0.0) return;
  for (double& v : p.intensity) v /= peak;
}

std::vector<Amplitude> screen_amplitudes(const PhysicalConstants& pc, const ConstraintSet& cs, const Vec2& q_src,
                                         const Screen& screen, int max_corners, std::vector<int>* n_paths,
                                         const CornerWeight& weight) {
  pc.validate();
  std::vector<Amplitude> psi(screen.n_bins, 0.0);
  if (n_paths) n_paths->assign(screen.n_bins, 0);
  for (int i = 0; i < screen.n_bins; ++i) {
    std::vector<PolygonalPath> paths;
    try {
      paths = enumerate_paths(cs, q_src, screen.bin_center(i), max_corners);
    } catch (const NoPath&) {
      continue;
    }
    for (auto& p : paths) {
      p = allocate_times(std::move(p), pc.T, pc.mass);
      Amplitude a = polygon_amplitude(pc, p);
      if (weight) {
        for (int c : p.corner_ids) a *= weight(cs.corners()[c]);
      }
      psi[i] += a;
    }
    if (n_paths) (*n_paths)[i] = static_cast<int>(paths.size());
  }
  return psi;
}

IntensityProfile screen_intensity(const PhysicalConstants& pc, const ConstraintSet& cs, const Vec2& q_src,
                                  const Screen& screen, int max_corners, const CornerWeight& weight) {
  IntensityProfile prof;
  const auto psi = screen_amplitudes(pc, cs, q_src, screen, max_corners, &prof.n_paths, weight);
  for (int i = 0; i < screen.n_bins; ++i) {
    prof.coordinate.push_back(screen.coordinate(i));
    prof.intensity.push_back(std::norm(psi[i]));
    prof.shadow.push_back(prof.n_paths[i] == 0);
  }
  normalize_peak(prof);
  return prof;
}

}  // namespace polyprop
