#pragma once

#include "polyprop/geometry.hpp"
#include "polyprop/propagator.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace polyprop {

struct WallSpec {
  enum class Kind { thin, solid };
  Kind kind = Kind::thin;
  std::string name;
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
  Vec2 into{0.0, 0.0};  // solid walls only: a vector pointing into the material

  bool operator==(const WallSpec&) const = default;
};

struct RunOptions {
  int max_corners = 2;
  int fan_size = 64;
  double restitution = 0.0;
  int max_branches = 4096;
  int oracle_grid = 512;
  int oracle_slices = 32;
  double oracle_sponge = 0.0;
  std::string output = "out";

  bool operator==(const RunOptions&) const = default;
};

struct Scenario {
  PhysicalConstants constants;
  std::vector<WallSpec> walls;
  Box box;
  Vec2 source{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
  Screen screen;
  RunOptions run;

  ConstraintSet constraints() const;
  // Wavelength for the straight source-to-screen-centre flight.
  double nominal_wavelength() const;
  void validate() const;
  bool operator==(const Scenario& o) const;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string emit_scenario(const Scenario& s);

}  // namespace polyprop
