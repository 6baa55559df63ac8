#pragma once

#include "polyprop/collision.hpp"
#include "polyprop/oracle.hpp"
#include "polyprop/paths.hpp"
#include "polyprop/propagator.hpp"
#include "polyprop/scenario.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace polyprop {

std::string format_number(double v);

void write_trajectories_csv(std::ostream& out, const SimulationResult& r);
void write_paths_csv(std::ostream& out, const std::vector<std::vector<PolygonalPath>>& per_bin);
void write_intensity_csv(std::ostream& out, const IntensityProfile& p);

struct Series {
  std::string label;
  const IntensityProfile* profile;
  std::string color;
};
void write_profile_svg(std::ostream& out, const std::string& title, const std::vector<Series>& series);
void write_scene_svg(std::ostream& out, const Scenario& s, const SimulationResult* r);

std::string report_json(const SimilarityReport& r, const std::string& scenario);

}  // namespace polyprop
