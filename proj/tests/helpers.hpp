#pragma once

#include <polyprop/scenario.hpp>

#include <cstdint>
#include <string>

#ifndef POLYPROP_SCENARIO_DIR
#define POLYPROP_SCENARIO_DIR "scenarios"
#endif

namespace testing {

inline polyprop::Scenario shipped(const std::string& name) {
  return polyprop::load_scenario(std::string(POLYPROP_SCENARIO_DIR) + "/" + name + ".scn");
}

inline const char* const kShipped[] = {"free", "wall_bounce", "corner_demo", "single_slit", "double_slit",
                                       "double_slit_oracle"};

struct IPoint {
  std::int64_t x, y;
};

inline std::int64_t orient(IPoint a, IPoint b, IPoint c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline int sign(std::int64_t v) { return (v > 0) - (v < 0); }

// Exact proper crossing of segment p-q with the open segment a-b.
inline bool proper_crossing(IPoint p, IPoint q, IPoint a, IPoint b) {
  const int o1 = sign(orient(a, b, p)), o2 = sign(orient(a, b, q));
  const int o3 = sign(orient(p, q, a)), o4 = sign(orient(p, q, b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace testing
