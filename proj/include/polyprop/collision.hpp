#pragma once

#include "polyprop/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polyprop {

struct ParticleState {
  Vec2 q{0.0, 0.0};
  Vec2 v{0.0, 0.0};
  double t = 0.0;
  std::string branch_id = "0";
};

enum class ContactKind { face, corner };

struct CollisionEvent {
  double t_hit = 0.0;
  Vec2 q_hit{0.0, 0.0};
  std::vector<int> active_ids;
  ContactKind kind = ContactKind::face;
  int corner = -1;  // index into corners_of(cs) for corner hits
};

struct MultiplierSolution {
  std::vector<int> ids;         // the event's active ids
  std::vector<double> lambdas;  // one per id; 0 for constraints dropped as separating
  double restitution = 0.0;
  Vec2 v_out{0.0, 0.0};
  int iterations = 0;
};

ParticleState integrate_free(const ParticleState& s, double dt);

std::optional<CollisionEvent> detect_collision(const ConstraintSet& cs, const ParticleState& s, double dt);

MultiplierSolution solve_multipliers(const ConstraintSet& cs, const CollisionEvent& e, const Vec2& v_in,
                                     double restitution, double mass = 1.0);

std::vector<ParticleState> branch_continuations(const Corner& c, const ParticleState& s_hit, int fan_size);

enum class EventFlag { start, face, corner, end, error };
const char* to_string(EventFlag f);

struct TrajectoryPoint {
  ParticleState state;
  EventFlag flag = EventFlag::start;
};

struct Trajectory {
  std::string branch_id;
  std::vector<TrajectoryPoint> points;
  std::string error;  // set when the branch stopped on a numerical failure
};

struct SimulationResult {
  std::vector<Trajectory> trajectories;
  bool truncated = false;
};

SimulationResult simulate(const ConstraintSet& cs, const ParticleState& s0, double T, double restitution,
                          int fan_size, int max_branches, double mass = 1.0);

}  // namespace polyprop
