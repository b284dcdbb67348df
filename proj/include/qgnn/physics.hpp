#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qgnn/core.hpp"

namespace qgnn::physics {

using Vec2 = std::array<double, 2>;
using Particles = std::array<Vec2, 3>;

struct SimConfig {
  double gravity_x = 0.0;
  double gravity_y = -9.8;
  double dt = 1e-4;
  double box_min_x = 0.0;
  double box_min_y = 0.0;
  double box_max_x = 1.0;
  double box_max_y = 1.0;
  double particle_radius = 0.05;
  double restitution = 0.8;

  void validate() const;
};

/// Positions and velocities for every stored step; velocities[t] equals
/// (positions[t] - positions[t-1]) / dt for t >= 1.
struct Trajectory {
  SimConfig config;
  std::vector<Particles> positions;
  std::vector<Particles> velocities;

  int steps() const { return static_cast<int>(positions.size()); }
};

/// One semi-implicit Euler step: gravity, then contact impulses (pairs in
/// index order, then walls), then the position update. Wall contact reflects
/// the inbound normal velocity scaled by restitution; a particle crossing a
/// wall inside the step is clamped onto it.
std::pair<Particles, Particles> step(const Particles& positions, const Particles& velocities,
                                     const SimConfig& config);

Trajectory generate_trajectory(const SimConfig& config, const Particles& initial_positions,
                               const Particles& initial_velocities, int steps);

/// Seeded initial conditions (separated interior positions, moderate random
/// velocities) rolled out for `steps` steps.
Trajectory generate_random_trajectory(const SimConfig& config, int steps, uint64_t seed);

/// Forward-difference acceleration at step t, one column per particle.
Mat ground_truth_acceleration(const Trajectory& traj, int t);

/// v' = v + a dt, p' = p + v' dt. Inverts ground_truth_acceleration: feeding
/// the step-t acceleration reproduces the stored step t+1.
std::pair<Vec2, Vec2> euler_step(const Vec2& p, const Vec2& v, const Vec2& a, double dt);

}  // namespace qgnn::physics
