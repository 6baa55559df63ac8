#pragma once

#include "polyprop/oracle.hpp"
#include "polyprop/scenario.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace polyprop {

struct RunFlags {
  std::optional<std::string> out;
  std::optional<int> bins;
  std::optional<int> max_corners;
  std::optional<int> fan;
  std::optional<int> grid;
  std::optional<int> slices;
};

Scenario apply_flags(Scenario s, const RunFlags& f);

// Lattice for the scenario's box, anchored on its source.
Lattice scenario_lattice(const Scenario& s);
IntensityProfile oracle_profile(const Scenario& s, std::vector<std::string>* warnings = nullptr);
IntensityProfile polygon_profile(const Scenario& s);

// Correlation and extrema offsets over the central fringes of `reference`, after
// rescaling both profiles to unit peak within that window.
SimilarityReport compare_central_fringes(const IntensityProfile& reference, const IntensityProfile& other,
                                         int n_fringes = 5);

struct RunSummary {
  std::vector<std::string> artifacts;
  std::optional<SimilarityReport> report;
};

// Runs one of simulate, paths, intensity, oracle, compare, all and writes the
// artifacts into s.run.output.
RunSummary run(const std::string& subcommand, const Scenario& s, const std::string& name, std::ostream& log);

}  // namespace polyprop
