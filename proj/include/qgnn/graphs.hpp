#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qgnn/physics.hpp"

namespace qgnn::graphs {

/// Per-axis affine map fitted so training targets land in [-1, 1]:
/// normalized = (a - mean) / scale with scale the max absolute deviation.
/// An axis with no deviation beyond rounding noise keeps scale 1 and is flagged.
struct TargetScaler {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> scale{1.0, 1.0};
  std::array<bool, 2> degenerate{false, false};

  static TargetScaler fit(const std::vector<Mat>& raw_targets);
  Mat normalize(const Mat& a) const;
  Mat denormalize(const Mat& a) const;
};

/// Positions, velocity and true next positions backing one sample, kept so
/// training can roll predicted accelerations forward into positions.
struct RolloutAnchor {
  physics::Particles positions{};
  physics::Particles velocities{};
  physics::Particles next_positions{};
};

struct EdgeSet {
  Mat Er;      // 3 x n_edges receiver one-hots
  Mat Es;      // 3 x n_edges sender one-hots
  Mat Ea_raw;  // 3 x n_edges (d_x, d_y, |d|)
  int n_edges = 0;
};

struct GraphSample {
  Mat N;         // 8 x 3 node features
  Mat Er;        // 3 x n_edges
  Mat Es;        // 3 x n_edges
  Mat Ea_raw;    // 3 x n_edges
  Mat Ea_padded; // 4 x n_edges, zero fourth row
  int n_edges = 0;
  Mat target;    // 2 x 3 normalized accelerations
  int t = 0;
  RolloutAnchor anchor;

  void validate() const;
};

struct Dataset {
  std::vector<GraphSample> samples;
  TargetScaler scaler;
  double dt = 0.0;
  double radius = 0.0;
};

/// Node features at step t: the two most recent stored velocities and the
/// four wall proximities (left, right, bottom, top), each the gap between
/// the particle surface and the wall clipped to [0, radius] and divided by
/// radius. Needs t >= 2 so both past velocities are derived ones.
Mat build_node_features(const physics::Trajectory& traj, int t, double radius);

/// Three self-edges (one per particle, zero displacement) followed by one
/// directed edge per particle pair within `radius`, lower index sending to
/// higher, pairs in lexicographic order. Displacements are scaled by the
/// radius so |d| <= 1.
EdgeSet build_edges(const physics::Particles& positions, double radius);

/// Samples for t in [2, steps-2]. When no scaler is passed one is fitted on
/// the leading training block implied by validation_fraction, then applied
/// to every sample.
Dataset make_dataset(const physics::Trajectory& traj, double radius,
                     const TargetScaler* scaler = nullptr, double validation_fraction = 0.3);

/// Final-block holdout sized so validation ~= fraction * training size.
int validation_count(int n_samples, double fraction);
std::pair<std::vector<GraphSample>, std::vector<GraphSample>> split_dataset(
    const std::vector<GraphSample>& samples, double fraction, uint64_t seed);

}  // namespace qgnn::graphs
