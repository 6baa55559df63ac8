#include "polyprop/collision.hpp"

#include "polyprop/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace polyprop {

namespace {

constexpr int kConstraintSamples = 256;
constexpr int kMaxEventsPerBranch = 100000;

// Earliest parameter in (0, 1] at which a general constraint turns positive.
std::optional<double> first_positive(const Constraint& c, const ParticleState& s, double dt) {
  auto g = [&](double u) { return c.eval(s.q + u * dt * s.v, s.t + u * dt); };
  double prev = 0.0;
  for (int k = 1; k <= kConstraintSamples; ++k) {
    const double u = static_cast<double>(k) / kConstraintSamples;
    if (g(u) > 0.0) {
      double lo = prev, hi = u;
      for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
      }
      return hi;
    }
    prev = u;
  }
  return std::nullopt;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = sv.size() ? 1e-12 * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

const char* to_string(EventFlag f) {
  switch (f) {
    case EventFlag::start: return "start";
    case EventFlag::face: return "face";
    case EventFlag::corner: return "corner";
    case EventFlag::end: return "end";
    case EventFlag::error: return "error";
  }
  return "?";
}

ParticleState integrate_free(const ParticleState& s, double dt) {
  if (dt < 0.0) throw std::invalid_argument("integrate_free: negative time step");
  ParticleState out = s;
  out.q = s.q + s.v * dt;
  out.t = s.t + dt;
  return out;
}

std::optional<CollisionEvent> detect_collision(const ConstraintSet& cs, const ParticleState& s, double dt) {
  const Vec2 d = s.v * dt;
  if (dt <= 0.0 || d.squaredNorm() == 0.0) return std::nullopt;

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cs.constraints()) {
    if (!c.face) {
      if (auto u = first_positive(c, s, dt)) best = std::min(best, *u);
      continue;
    }
    const WallSegment& w = *c.face;
    const double s0 = w.signed_distance(s.q);
    const double ds = w.outward_normal.dot(d);
    // Contacts at the start point were resolved by the event that produced it.
    if (ds <= 0.0 || std::abs(s0) <= kEpsActive || s0 > 0.0) continue;
    const double u = -s0 / ds;
    if (u > 1.0) continue;
    const double tau = w.slab(s.q + u * d);
    const double tol = kEpsActive / w.length();
    if (tau < -tol || tau > 1.0 + tol) continue;
    best = std::min(best, u);
  }
  if (!std::isfinite(best)) return std::nullopt;

  CollisionEvent e;
  e.t_hit = s.t + best * dt;
  e.q_hit = s.q + best * d;

  const auto& corners = cs.corners();
  double nearest = kEpsCorner;
  for (int i = 0; i < static_cast<int>(corners.size()); ++i) {
    const double dist = (corners[i].position - e.q_hit).norm();
    if (dist <= nearest) {
      nearest = dist;
      e.corner = i;
    }
  }
  if (e.corner >= 0) {
    e.q_hit = corners[e.corner].position;
    e.active_ids = corners[e.corner].incident_constraints;
  } else {
    int fallback = -1;
    double fallback_g = std::numeric_limits<double>::infinity();
    for (const auto& c : cs.constraints()) {
      const double g = c.eval(e.q_hit, e.t_hit);
      if (!(std::abs(g) <= kEpsActive)) continue;
      const double gdot = c.grad_q(e.q_hit, e.t_hit).dot(s.v) + c.grad_t(e.q_hit, e.t_hit);
      if (gdot > 0.0) e.active_ids.push_back(c.id);
      if (std::abs(g) < fallback_g) {
        fallback_g = std::abs(g);
        fallback = c.id;
      }
    }
    if (e.active_ids.empty() && fallback >= 0) e.active_ids.push_back(fallback);
  }
  e.kind = e.active_ids.size() >= 2 ? ContactKind::corner : ContactKind::face;
  return e;
}

MultiplierSolution solve_multipliers(const ConstraintSet& cs, const CollisionEvent& e, const Vec2& v_in,
                                     double restitution, double mass) {
  if (e.active_ids.empty()) throw std::invalid_argument("solve_multipliers: empty active set");
  if (restitution < 0.0 || restitution > 1.0) throw std::invalid_argument("solve_multipliers: restitution outside [0,1]");

  const int n = static_cast<int>(e.active_ids.size());
  std::vector<Vec2> grad(n);
  std::vector<double> gt(n);
  for (int k = 0; k < n; ++k) {
    const auto& c = cs.constraints().at(e.active_ids[k]);
    grad[k] = c.grad_q(e.q_hit, e.t_hit);
    gt[k] = c.grad_t(e.q_hit, e.t_hit);
  }
  auto gdot = [&](int k, const Vec2& v) { return grad[k].dot(v) + gt[k]; };
  const double scale = std::max(1.0, v_in.norm());

  MultiplierSolution sol;
  sol.ids = e.active_ids;
  sol.restitution = restitution;
  std::vector<bool> keep(n);
  for (int k = 0; k < n; ++k) keep[k] = true;

  for (int iter = 1; iter <= 2 * n; ++iter) {
    sol.iterations = iter;
    std::vector<int> idx;
    for (int k = 0; k < n; ++k) {
      if (keep[k]) idx.push_back(k);
    }
    const int r = static_cast<int>(idx.size());
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(r);
    if (r > 0) {
      Eigen::MatrixXd G(r, r);
      Eigen::VectorXd rhs(r);
      for (int i = 0; i < r; ++i) {
        rhs(i) = gdot(idx[i], v_in);
        for (int j = 0; j < r; ++j) G(i, j) = grad[idx[i]].dot(grad[idx[j]]) / mass;
      }
      lam = -(1.0 + restitution) * pseudo_inverse(G) * rhs;
    }

    bool changed = false;
    for (int i = 0; i < r; ++i) {
      if (lam(i) > 1e-12 * scale * mass) {
        keep[idx[i]] = false;
        changed = true;
      }
    }
    if (changed) continue;

    Vec2 v = v_in;
    sol.lambdas.assign(n, 0.0);
    for (int i = 0; i < r; ++i) {
      sol.lambdas[idx[i]] = lam(i);
      v += grad[idx[i]] * (lam(i) / mass);
    }
    // Constraints dropped as separating must not end up approaching.
    for (int k = 0; k < n; ++k) {
      if (!keep[k] && gdot(k, v) > 1e-12 * scale) {
        keep[k] = true;
        changed = true;
      }
    }
    if (changed) continue;
    sol.v_out = v;
    return sol;
  }
  throw NonConvergence("active-set loop did not converge; reduce the corner tolerance");
}

std::vector<ParticleState> branch_continuations(const Corner& c, const ParticleState& s_hit, int fan_size) {
  if (fan_size < 1) throw std::invalid_argument("branch_continuations: fan_size must be >= 1");
  if (c.outgoing_cone.empty() || c.cone_measure() <= 1e-12) throw EmptyCone("corner has no feasible outgoing direction");
  const double speed = s_hit.v.norm();
  std::vector<ParticleState> out;
  out.reserve(fan_size);
  for (int k = 0; k < fan_size; ++k) {
    ParticleState b;
    b.q = c.position;
    b.v = speed * c.cone_direction((k + 0.5) / fan_size);
    b.t = s_hit.t;
    b.branch_id = s_hit.branch_id + "." + std::to_string(k);
    out.push_back(std::move(b));
  }
  return out;
}

SimulationResult simulate(const ConstraintSet& cs, const ParticleState& s0, double T, double restitution,
                          int fan_size, int max_branches, double mass) {
  if (!(T > 0.0)) throw std::invalid_argument("simulate: T must be positive");
  if (max_branches < 1) throw std::invalid_argument("simulate: max_branches must be >= 1");

  SimulationResult result;
  struct Pending {
    Trajectory traj;
    ParticleState state;
  };
  std::deque<Pending> queue;
  Trajectory first;
  first.branch_id = s0.branch_id;
  first.points.push_back({s0, EventFlag::start});
  queue.push_back({std::move(first), s0});
  int live = 1;

  while (!queue.empty()) {
    Pending cur = std::move(queue.front());
    queue.pop_front();
    ParticleState s = cur.state;
    Trajectory& tr = cur.traj;
    bool open = true;
    bool split = false;
    for (int events = 0; open && events < kMaxEventsPerBranch; ++events) {
      const double remaining = T - s.t;
      auto e = remaining > 0.0 ? detect_collision(cs, s, remaining) : std::nullopt;
      if (!e) {
        s = integrate_free(s, std::max(0.0, remaining));
        tr.points.push_back({s, EventFlag::end});
        open = false;
        break;
      }
      ParticleState hit = s;
      hit.q = e->q_hit;
      hit.t = e->t_hit;
      try {
        if (e->corner >= 0) {
          auto fan = branch_continuations(cs.corners()[e->corner], hit, fan_size);
          int allowed = max_branches - live + 1;
          if (allowed < static_cast<int>(fan.size())) {
            result.truncated = true;
            fan.resize(std::max(allowed, 1));
          }
          live += static_cast<int>(fan.size()) - 1;
          for (auto& b : fan) {
            Trajectory child;
            child.branch_id = b.branch_id;
            child.points = tr.points;
            child.points.push_back({b, EventFlag::corner});
            queue.push_back({std::move(child), b});
          }
          split = true;
          open = false;
          break;
        }
        auto sol = solve_multipliers(cs, *e, s.v, restitution, mass);
        hit.v = sol.v_out;
        tr.points.push_back({hit, EventFlag::face});
        s = hit;
      } catch (const NumericalError& err) {
        tr.points.push_back({hit, EventFlag::error});
        tr.error = err.what();
        open = false;
      }
    }
    if (open) {
      tr.error = "event limit reached";
      result.truncated = true;
    }
    if (!split) {
      result.trajectories.push_back(std::move(tr));
    }
  }
  return result;
}

}  // namespace polyprop
