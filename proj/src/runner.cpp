#include "polyprop/runner.hpp"

#include "polyprop/errors.hpp"
#include "polyprop/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace polyprop {

namespace {

std::string write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << body;
  return path;
}

template <typename F>
std::string capture(F&& f) {
  std::ostringstream o;
  f(o);
  return o.str();
}

}  // namespace

Scenario apply_flags(Scenario s, const RunFlags& f) {
  if (f.out) s.run.output = *f.out;
  if (f.bins) s.screen.n_bins = *f.bins;
  if (f.max_corners) s.run.max_corners = *f.max_corners;
  if (f.fan) s.run.fan_size = *f.fan;
  if (f.grid) s.run.oracle_grid = *f.grid;
  if (f.slices) s.run.oracle_slices = *f.slices;
  s.validate();
  return s;
}

Lattice scenario_lattice(const Scenario& s) {
  LatticeOptions opts;
  opts.grid = s.run.oracle_grid;
  opts.slices = s.run.oracle_slices;
  opts.wavelength = s.nominal_wavelength();
  opts.sponge = s.run.oracle_sponge;
  return make_lattice(s.constraints(), s.box, s.source, opts);
}

IntensityProfile oracle_profile(const Scenario& s, std::vector<std::string>* warnings) {
  const Lattice lat = scenario_lattice(s);
  const LatticeField field = lattice_propagate(lat, s.constants, s.source);
  if (warnings) *warnings = field.warnings;
  return oracle_intensity(field, s.screen);
}

IntensityProfile polygon_profile(const Scenario& s) {
  return screen_intensity(s.constants, s.constraints(), s.source, s.screen, s.run.max_corners);
}

SimilarityReport compare_central_fringes(const IntensityProfile& reference, const IntensityProfile& other,
                                         int n_fringes) {
  const auto [lo, hi] = central_fringe_window(reference, n_fringes);
  auto rescale = [lo = lo, hi = hi](IntensityProfile p) {
    double peak = 0.0;
    for (int i = lo; i < hi; ++i) peak = std::max(peak, p.intensity[i]);
    if (peak > 0.0) {
      for (double& v : p.intensity) v /= peak;
    }
    return p;
  };
  return compare_profiles(rescale(reference), rescale(other), lo, hi);
}

RunSummary run(const std::string& sub, const Scenario& s, const std::string& name, std::ostream& log) {
  static const std::vector<std::string> known{"simulate", "paths", "intensity", "oracle", "compare", "all"};
  if (std::find(known.begin(), known.end(), sub) == known.end())
    throw ValidationError("unknown subcommand '" + sub + "'");
  RunSummary summary;
  const std::string& dir = s.run.output;
  const bool all = sub == "all";
  const ConstraintSet cs = s.constraints();
  for (const auto& w : cs.warnings()) log << "warning: " << w.message << "\n";

  if (sub == "simulate" || all) {
    ParticleState s0;
    s0.q = s.source;
    s0.v = s.velocity;
    const auto r = simulate(cs, s0, s.constants.T, s.run.restitution, s.run.fan_size, s.run.max_branches,
                            s.constants.mass);
    summary.artifacts.push_back(write_file(dir, "trajectories.csv", capture([&](auto& o) { write_trajectories_csv(o, r); })));
    summary.artifacts.push_back(write_file(dir, "trajectories.svg", capture([&](auto& o) { write_scene_svg(o, s, &r); })));
    log << "simulate: " << r.trajectories.size() << " trajectories" << (r.truncated ? " (truncated)" : "") << "\n";
  }
  if (sub == "paths" || all) {
    std::vector<std::vector<PolygonalPath>> per_bin;
    for (int i = 0; i < s.screen.n_bins; ++i) {
      std::vector<PolygonalPath> paths;
      try {
        paths = enumerate_paths(cs, s.source, s.screen.bin_center(i), s.run.max_corners);
      } catch (const NoPath&) {
      }
      for (auto& p : paths) p = allocate_times(std::move(p), s.constants.T, s.constants.mass);
      per_bin.push_back(std::move(paths));
    }
    summary.artifacts.push_back(write_file(dir, "paths.csv", capture([&](auto& o) { write_paths_csv(o, per_bin); })));
    log << "paths: " << per_bin.size() << " screen bins\n";
  }

  std::optional<IntensityProfile> poly, orac;
  if (sub == "intensity" || sub == "compare" || all) {
    poly = polygon_profile(s);
    summary.artifacts.push_back(write_file(dir, "intensity.csv", capture([&](auto& o) { write_intensity_csv(o, *poly); })));
    summary.artifacts.push_back(write_file(dir, "intensity.svg", capture([&](auto& o) {
      write_profile_svg(o, name + ": polygon superposition", {{"polygon", &*poly, "steelblue"}});
    })));
    log << "intensity: " << poly->size() << " bins\n";
  }
  if (sub == "oracle" || sub == "compare" || all) {
    std::vector<std::string> warnings;
    orac = oracle_profile(s, &warnings);
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    summary.artifacts.push_back(write_file(dir, "oracle_intensity.csv", capture([&](auto& o) { write_intensity_csv(o, *orac); })));
    summary.artifacts.push_back(write_file(dir, "oracle.svg", capture([&](auto& o) {
      write_profile_svg(o, name + ": lattice path integral", {{"lattice", &*orac, "darkorange"}});
    })));
    log << "oracle: " << orac->size() << " bins\n";
  }
  if (sub == "compare" || all) {
    const auto rep = compare_central_fringes(*poly, *orac);
    summary.report = rep;
    summary.artifacts.push_back(write_file(dir, "compare_report.json", report_json(rep, name)));
    summary.artifacts.push_back(write_file(dir, "compare.svg", capture([&](auto& o) {
      write_profile_svg(o, name + ": polygon vs lattice",
                        {{"polygon", &*poly, "steelblue"}, {"lattice", &*orac, "darkorange"}});
    })));
    log << "compare: correlation " << format_number(rep.correlation) << ", max maxima offset "
        << format_number(rep.max_maxima_offset) << " bins\n";
  }
  return summary;
}

}  // namespace polyprop
