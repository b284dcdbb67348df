#include "qgnn/graphs.hpp"

#include <algorithm>
#include <cmath>

namespace qgnn::graphs {

TargetScaler TargetScaler::fit(const std::vector<Mat>& raw_targets) {
  if (raw_targets.empty()) throw ArgumentError("scaler fit needs at least one target");
  TargetScaler s;
  for (int axis = 0; axis < 2; ++axis) {
    double sum = 0.0;
    long n = 0;
    for (const Mat& m : raw_targets)
      for (int j = 0; j < m.cols; ++j, ++n) sum += m(axis, j);
    const double mean = sum / static_cast<double>(n);
    double dev = 0.0;
    double max_abs = 0.0;
    for (const Mat& m : raw_targets)
      for (int j = 0; j < m.cols; ++j) {
        dev = std::max(dev, std::abs(m(axis, j) - mean));
        max_abs = std::max(max_abs, std::abs(m(axis, j)));
      }
    s.mean[axis] = mean;
    // constant accelerations recovered from accumulated velocity sums jitter in
    // the last ulps; deviation at rounding scale counts as zero
    if (dev > 1e-12 * std::max(1.0, max_abs)) {
      s.scale[axis] = dev;
    } else {
      s.scale[axis] = 1.0;
      s.degenerate[axis] = true;
    }
  }
  return s;
}

Mat TargetScaler::normalize(const Mat& a) const {
  if (a.rows != 2) throw ShapeError("scaler expects a 2-row target");
  Mat out(a.rows, a.cols);
  for (int axis = 0; axis < 2; ++axis)
    for (int j = 0; j < a.cols; ++j) out(axis, j) = (a(axis, j) - mean[axis]) / scale[axis];
  return out;
}

Mat TargetScaler::denormalize(const Mat& a) const {
  if (a.rows != 2) throw ShapeError("scaler expects a 2-row target");
  Mat out(a.rows, a.cols);
  for (int axis = 0; axis < 2; ++axis)
    for (int j = 0; j < a.cols; ++j) out(axis, j) = a(axis, j) * scale[axis] + mean[axis];
  return out;
}

Mat build_node_features(const physics::Trajectory& traj, int t, double radius) {
  if (radius <= 0) throw ArgumentError("radius must be positive");
  if (t < 2 || t >= traj.steps()) throw IndexError("feature step needs two stored past velocities");
  const physics::SimConfig& cfg = traj.config;
  Mat n(8, 3);
  for (int j = 0; j < 3; ++j) {
    const auto& p = traj.positions[t][j];
    n(0, j) = traj.velocities[t][j][0];
    n(1, j) = traj.velocities[t][j][1];
    n(2, j) = traj.velocities[t - 1][j][0];
    n(3, j) = traj.velocities[t - 1][j][1];
    const double gaps[4] = {p[0] - cfg.box_min_x - cfg.particle_radius,
                            cfg.box_max_x - p[0] - cfg.particle_radius,
                            p[1] - cfg.box_min_y - cfg.particle_radius,
                            cfg.box_max_y - p[1] - cfg.particle_radius};
    for (int w = 0; w < 4; ++w) n(4 + w, j) = std::clamp(gaps[w], 0.0, radius) / radius;
  }
  return n;
}

EdgeSet build_edges(const physics::Particles& positions, double radius) {
  if (radius <= 0) throw ArgumentError("radius must be positive");
  struct Edge {
    int sender, receiver;
  };
  std::vector<Edge> edges;
  for (int j = 0; j < 3; ++j) edges.push_back({j, j});
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double dx = positions[j][0] - positions[i][0];
      const double dy = positions[j][1] - positions[i][1];
      if (std::sqrt(dx * dx + dy * dy) <= radius) edges.push_back({i, j});
    }

  EdgeSet set;
  set.n_edges = static_cast<int>(edges.size());
  set.Er = Mat(3, set.n_edges);
  set.Es = Mat(3, set.n_edges);
  set.Ea_raw = Mat(3, set.n_edges);
  for (int k = 0; k < set.n_edges; ++k) {
    set.Er(edges[k].receiver, k) = 1.0;
    set.Es(edges[k].sender, k) = 1.0;
    if (edges[k].sender != edges[k].receiver) {
      const double dx = (positions[edges[k].receiver][0] - positions[edges[k].sender][0]) / radius;
      const double dy = (positions[edges[k].receiver][1] - positions[edges[k].sender][1]) / radius;
      set.Ea_raw(0, k) = dx;
      set.Ea_raw(1, k) = dy;
      set.Ea_raw(2, k) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return set;
}

void GraphSample::validate() const {
  if (n_edges < 3 || n_edges > 6) throw ShapeError("edge count out of range");
  if (N.rows != 8 || N.cols != 3) throw ShapeError("node feature shape");
  if (Er.rows != 3 || Er.cols != n_edges || Es.rows != 3 || Es.cols != n_edges)
    throw ShapeError("connection matrix shape");
  if (Ea_raw.rows != 3 || Ea_raw.cols != n_edges || Ea_padded.rows != 4 ||
      Ea_padded.cols != n_edges)
    throw ShapeError("edge feature shape");
  if (target.rows != 2 || target.cols != 3) throw ShapeError("target shape");
  int self_edges = 0;
  for (int k = 0; k < n_edges; ++k) {
    int r_hits = 0, s_hits = 0, r = -1, s = -1;
    for (int j = 0; j < 3; ++j) {
      if (Er(j, k) == 1.0) {
        ++r_hits;
        r = j;
      } else if (Er(j, k) != 0.0) {
        throw ShapeError("receiver column is not one-hot");
      }
      if (Es(j, k) == 1.0) {
        ++s_hits;
        s = j;
      } else if (Es(j, k) != 0.0) {
        throw ShapeError("sender column is not one-hot");
      }
    }
    if (r_hits != 1 || s_hits != 1) throw ShapeError("connection column is not one-hot");
    if (r == s) {
      ++self_edges;
      for (int f = 0; f < 3; ++f)
        if (Ea_raw(f, k) != 0.0) throw ShapeError("self-edge features must be zero");
    }
    if (Ea_padded(3, k) != 0.0) throw ShapeError("padding row must be zero");
  }
  if (self_edges != 3) throw ShapeError("expected exactly three self-edges");
}

int validation_count(int n_samples, double fraction) {
  if (n_samples <= 0) throw ArgumentError("empty sample list");
  if (fraction < 0 || fraction >= 1) throw ArgumentError("fraction must lie in [0,1)");
  if (fraction == 0) return 0;
  // validation sized relative to the remaining training block
  int v = static_cast<int>(std::llround(fraction * n_samples / (1.0 + fraction)));
  return std::clamp(v, 1, n_samples - 1);
}

Dataset make_dataset(const physics::Trajectory& traj, double radius, const TargetScaler* scaler,
                     double validation_fraction) {
  if (traj.steps() < 4) throw ArgumentError("trajectory too short for any sample");
  Dataset ds;
  ds.dt = traj.config.dt;
  ds.radius = radius;

  std::vector<Mat> raw;
  for (int t = 2; t <= traj.steps() - 2; ++t) {
    GraphSample s;
    s.t = t;
    s.N = build_node_features(traj, t, radius);
    EdgeSet e = build_edges(traj.positions[t], radius);
    s.Er = std::move(e.Er);
    s.Es = std::move(e.Es);
    s.Ea_raw = std::move(e.Ea_raw);
    s.n_edges = e.n_edges;
    s.Ea_padded = vstack(s.Ea_raw, Mat(1, s.n_edges));
    s.anchor.positions = traj.positions[t];
    s.anchor.velocities = traj.velocities[t];
    s.anchor.next_positions = traj.positions[t + 1];
    raw.push_back(physics::ground_truth_acceleration(traj, t));
    ds.samples.push_back(std::move(s));
  }

  if (scaler) {
    ds.scaler = *scaler;
  } else {
    const int n = static_cast<int>(ds.samples.size());
    const int train_n = n - validation_count(n, validation_fraction);
    ds.scaler = TargetScaler::fit({raw.begin(), raw.begin() + train_n});
  }
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    ds.samples[i].target = ds.scaler.normalize(raw[i]);
    ds.samples[i].validate();
  }
  return ds;
}

std::pair<std::vector<GraphSample>, std::vector<GraphSample>> split_dataset(
    const std::vector<GraphSample>& samples, double fraction, uint64_t) {
  // the holdout is the contiguous tail, so the seed has nothing to vary
  const int n = static_cast<int>(samples.size());
  const int v = validation_count(n, fraction);
  std::vector<GraphSample> train(samples.begin(), samples.end() - v);
  std::vector<GraphSample> valid(samples.end() - v, samples.end());
  return {std::move(train), std::move(valid)};
}

}  // namespace qgnn::graphs
