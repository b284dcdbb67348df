#include "qgnn/physics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qgnn::physics {

void SimConfig::validate() const {
  for (double v : {gravity_x, gravity_y, dt, box_min_x, box_min_y, box_max_x, box_max_y,
                   particle_radius, restitution})
    if (!std::isfinite(v)) throw NumericError("sim config has a non-finite field");
  if (dt <= 0) throw ArgumentError("dt must be positive");
  if (box_max_x <= box_min_x || box_max_y <= box_min_y)
    throw ArgumentError("box must have positive extent");
  if (particle_radius <= 0 ||
      2 * particle_radius >= std::min(box_max_x - box_min_x, box_max_y - box_min_y))
    throw ArgumentError("particle radius must fit inside the box");
  if (restitution < 0 || restitution > 1) throw ArgumentError("restitution must lie in [0,1]");
}

namespace {

void check_finite(const Particles& p, const Particles& v) {
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k)
      if (!std::isfinite(p[i][k]) || !std::isfinite(v[i][k]))
        throw NumericError("non-finite particle state");
}

}  // namespace

std::pair<Particles, Particles> step(const Particles& positions, const Particles& velocities,
                                     const SimConfig& cfg) {
  check_finite(positions, velocities);
  const double e = cfg.restitution;
  Particles v = velocities;
  for (int i = 0; i < 3; ++i) {
    v[i][0] += cfg.gravity_x * cfg.dt;
    v[i][1] += cfg.gravity_y * cfg.dt;
  }

  // Pairwise equal-mass impulses, lower pair indices first.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double dx = positions[j][0] - positions[i][0];
      const double dy = positions[j][1] - positions[i][1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist >= 2 * cfg.particle_radius || dist < 1e-12) continue;
      const double nx = dx / dist, ny = dy / dist;
      const double vn = (v[j][0] - v[i][0]) * nx + (v[j][1] - v[i][1]) * ny;
      if (vn >= 0) continue;  // separating
      const double half = 0.5 * (1.0 + e) * vn;
      v[i][0] += half * nx;
      v[i][1] += half * ny;
      v[j][0] -= half * nx;
      v[j][1] -= half * ny;
    }

  const double lo[2] = {cfg.box_min_x + cfg.particle_radius, cfg.box_min_y + cfg.particle_radius};
  const double hi[2] = {cfg.box_max_x - cfg.particle_radius, cfg.box_max_y - cfg.particle_radius};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) {
      if (positions[i][k] <= lo[k] && v[i][k] < 0) v[i][k] = -e * v[i][k];
      if (positions[i][k] >= hi[k] && v[i][k] > 0) v[i][k] = -e * v[i][k];
    }

  Particles p = positions;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) {
      double next = p[i][k] + v[i][k] * cfg.dt;
      if (next < lo[k] || next > hi[k]) {
        // first wall crossing inside a step: land on the wall and keep the
        // stored velocity consistent with the actual displacement
        next = std::clamp(next, lo[k], hi[k]);
        v[i][k] = (next - p[i][k]) / cfg.dt;
      }
      p[i][k] = next;
    }
  return {p, v};
}

Trajectory generate_trajectory(const SimConfig& config, const Particles& initial_positions,
                               const Particles& initial_velocities, int steps) {
  config.validate();
  if (steps < 3) throw ArgumentError("a trajectory needs at least 3 steps");
  check_finite(initial_positions, initial_velocities);
  const double lo[2] = {config.box_min_x + config.particle_radius,
                        config.box_min_y + config.particle_radius};
  const double hi[2] = {config.box_max_x - config.particle_radius,
                        config.box_max_y - config.particle_radius};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k)
      if (initial_positions[i][k] < lo[k] || initial_positions[i][k] > hi[k])
        throw ArgumentError("initial position outside the box interior");

  Trajectory traj;
  traj.config = config;
  traj.positions.reserve(steps);
  traj.velocities.reserve(steps);
  traj.positions.push_back(initial_positions);
  traj.velocities.push_back(initial_velocities);
  for (int t = 1; t < steps; ++t) {
    auto [p, v] = step(traj.positions.back(), traj.velocities.back(), config);
    traj.positions.push_back(p);
    traj.velocities.push_back(v);
  }
  return traj;
}

Trajectory generate_random_trajectory(const SimConfig& config, int steps, uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  const double margin = 2.5 * config.particle_radius;
  std::uniform_real_distribution<double> px(config.box_min_x + margin, config.box_max_x - margin);
  std::uniform_real_distribution<double> py(config.box_min_y + margin, config.box_max_y - margin);
  std::uniform_real_distribution<double> vel(-0.5, 0.5);

  Particles p{};
  for (int i = 0; i < 3; ++i) {
    for (int attempt = 0;; ++attempt) {
      p[i] = {px(rng), py(rng)};
      bool clear = true;
      for (int j = 0; j < i; ++j) {
        const double dx = p[i][0] - p[j][0], dy = p[i][1] - p[j][1];
        if (dx * dx + dy * dy < margin * margin) clear = false;
      }
      if (clear) break;
      if (attempt > 10000) throw NumericError("could not place separated particles");
    }
  }
  Particles v{};
  for (int i = 0; i < 3; ++i) v[i] = {vel(rng), vel(rng)};
  return generate_trajectory(config, p, v, steps);
}

Mat ground_truth_acceleration(const Trajectory& traj, int t) {
  if (t < 1 || t > traj.steps() - 2) throw IndexError("acceleration index out of range");
  Mat a(2, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 2; ++k)
      a(k, j) = (traj.velocities[t + 1][j][k] - traj.velocities[t][j][k]) / traj.config.dt;
  return a;
}

std::pair<Vec2, Vec2> euler_step(const Vec2& p, const Vec2& v, const Vec2& a, double dt) {
  Vec2 vn{v[0] + a[0] * dt, v[1] + a[1] * dt};
  Vec2 pn{p[0] + vn[0] * dt, p[1] + vn[1] * dt};
  return {pn, vn};
}

}  // namespace qgnn::physics
