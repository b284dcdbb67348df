// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// binary exits nonzero if any check fails. Runs standalone, no test
// framework. The dense oracles live in oracle_utils.hpp and share no gate
// application code with the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "oracle_utils.hpp"
#include "qgnn/cgnn.hpp"
#include "qgnn/graphs.hpp"
#include "qgnn/iqgnn.hpp"
#include "qgnn/physics.hpp"
#include "qgnn/pqc_blocks.hpp"
#include "qgnn/qsim.hpp"
#include "qgnn/sqgnn.hpp"
#include "qgnn/trainkit.hpp"

using namespace qgnn;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::vector<double> random_angles(std::mt19937_64& rng, size_t n, double lo = -3.141592653589793,
                                  double hi = 3.141592653589793) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

qsim::Statevector random_state(std::mt19937_64& rng, int n_qubits) {
  std::normal_distribution<double> g(0.0, 1.0);
  qsim::Statevector sv;
  sv.n_qubits = n_qubits;
  sv.amps.resize(size_t{1} << n_qubits);
  double n2 = 0.0;
  for (cd& a : sv.amps) {
    a = cd{g(rng), g(rng)};
    n2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (cd& a : sv.amps) a *= inv;
  return sv;
}

graphs::Dataset bouncy_dataset(int steps, uint64_t seed, double radius = 0.35) {
  physics::SimConfig cfg;
  physics::Trajectory traj = physics::generate_random_trajectory(cfg, steps, seed);
  return graphs::make_dataset(traj, radius);
}

// ---------------------------------------------------------------------------
// 1. Parameter-block sizes.

Check check_block_sizes() {
  Check c;
  const std::vector<double> v15(15, 0.1), v8(8, 0.1), v6(6, 0.1);
  c.require(pqc::EncoderConvParams::from_vector(v15).to_vector().size() == 15, "encoder accepts 15");
  c.require(pqc::ProcessorParams::from_vector(v8).to_vector().size() == 8, "processor accepts 8");
  c.require(pqc::PoolingParams::from_vector(v6).to_vector().size() == 6, "pooling accepts 6");

  auto rejects = [&](auto make, size_t good) {
    for (size_t n = 0; n <= 24; ++n) {
      if (n == good) continue;
      bool threw = false;
      try {
        make(std::vector<double>(n, 0.0));
      } catch (const ShapeError&) {
        threw = true;
      }
      if (!threw) return false;
    }
    return true;
  };
  c.require(rejects([](const std::vector<double>& v) { pqc::EncoderConvParams::from_vector(v); }, 15),
            "encoder must reject sizes != 15");
  c.require(rejects([](const std::vector<double>& v) { pqc::ProcessorParams::from_vector(v); }, 8),
            "processor must reject sizes != 8");
  c.require(rejects([](const std::vector<double>& v) { pqc::PoolingParams::from_vector(v); }, 6),
            "pooling must reject sizes != 6");
  return c;
}

// ---------------------------------------------------------------------------
// 2. Unitarity and norm preservation over random parameter draws.

Check check_unitarity() {
  Check c;
  std::mt19937_64 rng(2026);
  struct Block {
    const char* name;
    qsim::CircuitProgram program;
  };
  const std::vector<Block> blocks = {
      {"encoder pair", pqc::encoder_conv_program(2, 0, 1)},
      {"encoder section", pqc::encoder_section_program(4, 0)},
      {"processor", pqc::processor_program(4, 0)},
      {"pooling", pqc::pooling_program(2, 0, 1)},
  };
  for (const Block& b : blocks) {
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
      const std::vector<double> angles = random_angles(rng, b.program.n_params);
      const CMat u = qsim::unitary_of(b.program, angles);
      const double defect = oracle::unitarity_defect(u);
      c.require(defect <= 1e-10,
                std::string(b.name) + " unitarity defect " + std::to_string(defect));

      qsim::Statevector sv = random_state(rng, b.program.n_qubits);
      sv = qsim::run_program(b.program, angles, std::move(sv));
      c.require(std::abs(sv.norm() - 1.0) <= 1e-9,
                std::string(b.name) + " norm drift " + std::to_string(sv.norm() - 1.0));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 3. <Z> after an X rotation on |0>.

Check check_rx_expectation() {
  Check c;
  qsim::CircuitProgram prog(1, 1);
  prog.rx(0, 0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-6.5, 6.5);
  for (int i = 0; i < 50; ++i) {
    const double theta = i < 10 ? -3.0 + 0.7 * i : u(rng);
    qsim::Statevector sv = qsim::run_program(prog, {theta}, qsim::Statevector::zero(1));
    const double z = qsim::expectation_z(sv, 0);
    c.require(std::abs(z - std::cos(theta)) <= 1e-12,
              "theta " + std::to_string(theta) + " gave " + std::to_string(z));
  }
  return c;
}

// ---------------------------------------------------------------------------
// 4. Matrix-form message passing vs per-edge loops.

Check check_message_passing() {
  Check c;
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  auto random_layer = [&](int out, int in) {
    cgnn::DenseLayer l;
    l.W = Mat(out, in);
    for (double& w : l.W.data) w = u(rng);
    l.b.resize(out);
    for (double& b : l.b) b = u(rng);
    l.layer_norm = true;
    l.gain.assign(out, 1.0);
    l.shift.assign(out, 0.0);
    for (double& g : l.gain) g += 0.3 * u(rng);
    l.relu = true;
    return l;
  };

  for (int ne = 3; ne <= 6 && c.ok; ++ne) {
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
      Mat O(9, 3), Ra(5, ne);
      for (double& v : O.data) v = u(rng);
      for (double& v : Ra.data) v = u(rng);
      Mat Er(3, ne), Es(3, ne);
      std::vector<int> recv(ne), send(ne);
      for (int e = 0; e < ne; ++e) {
        if (e < 3) {
          recv[e] = send[e] = e;
        } else {
          recv[e] = static_cast<int>(rng() % 3);
          send[e] = (recv[e] + 1 + static_cast<int>(rng() % 2)) % 3;
        }
        Er(recv[e], e) = 1.0;
        Es(send[e], e) = 1.0;
      }
      const cgnn::DenseLayer phi_R = random_layer(5, 23);
      const cgnn::DenseLayer phi_O = random_layer(9, 14);

      const Mat B = cgnn::marshall(O, Er, Es, Ra);
      c.require(B.rows == 23 && B.cols == ne, "marshall shape");
      for (int e = 0; e < ne && c.ok; ++e) {
        for (int r = 0; r < 9; ++r) {
          c.require(std::abs(B(r, e) - O(r, recv[e])) <= 1e-9, "marshall receiver rows");
          c.require(std::abs(B(9 + r, e) - O(r, send[e])) <= 1e-9, "marshall sender rows");
        }
        for (int r = 0; r < 5; ++r)
          c.require(std::abs(B(18 + r, e) - Ra(r, e)) <= 1e-9, "marshall edge rows");
      }

      const Mat E = cgnn::edge_update(B, phi_R);
      for (int e = 0; e < ne && c.ok; ++e) {
        const std::vector<double> y = cgnn::layer_forward(phi_R, B.col(e));
        for (int r = 0; r < 5; ++r)
          c.require(std::abs(E(r, e) - y[r]) <= 1e-9, "edge update column");
      }

      const Mat Ebar = cgnn::aggregate(E, Er);
      Mat Ebar_bf(5, 3);
      for (int e = 0; e < ne; ++e)
        for (int r = 0; r < 5; ++r) Ebar_bf(r, recv[e]) += E(r, e);
      for (size_t i = 0; i < Ebar.data.size(); ++i)
        c.require(std::abs(Ebar.data[i] - Ebar_bf.data[i]) <= 1e-9, "aggregate sums");

      const Mat P = cgnn::node_update(O, Ebar, phi_O);
      for (int j = 0; j < 3 && c.ok; ++j) {
        std::vector<double> x = O.col(j);
        const std::vector<double> tail = Ebar.col(j);
        x.insert(x.end(), tail.begin(), tail.end());
        const std::vector<double> y = cgnn::layer_forward(phi_O, x);
        for (int r = 0; r < 9; ++r)
          c.require(std::abs(P(r, j) - y[r]) <= 1e-9, "node update column");
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 5. Gradients: backprop vs central differences, shift rule vs differences.

Check check_gradients() {
  Check c;
  const graphs::Dataset ds = bouncy_dataset(9, 5);
  const graphs::GraphSample& s = ds.samples[2];

  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<double> flat = train::init_params(train::ModelKind::Cgnn, 1, 55);
  for (double& v : flat) v += u(rng);  // keep relu inputs off their kinks

  const cgnn::CgnnParams p = cgnn::CgnnParams::from_flat(flat, 1);
  const Mat pred = cgnn::cgnn_forward(s, p);
  Mat dPred(2, 3);
  for (size_t i = 0; i < pred.data.size(); ++i)
    dPred.data[i] = 2.0 * (pred.data[i] - s.target.data[i]) / 6.0;
  const std::vector<double> analytic = cgnn::cgnn_gradient(s, p, dPred).to_flat();

  auto loss_at = [&](const std::vector<double>& q) {
    return train::mse_loss(cgnn::cgnn_forward(s, cgnn::CgnnParams::from_flat(q, 1)), s.target);
  };
  const std::vector<double> fd = train::grad_central_fd(loss_at, flat, 1e-4);
  double worst = 0.0;
  for (size_t i = 0; i < fd.size(); ++i)
    worst = std::max(worst, std::abs(analytic[i] - fd[i]) /
                                std::max({std::abs(fd[i]), std::abs(analytic[i]), 1e-3}));
  c.require(worst <= 1e-4, "backprop vs differences rel " + std::to_string(worst));

  auto shift_matches_fd = [&](const qsim::CircuitProgram& prog, std::vector<double> angles,
                              const qsim::Statevector& init, int qubit) {
    for (int k = 0; k < prog.n_params; ++k) {
      const double shift = train::parameter_shift(prog, angles, init, qubit, k);
      const double h = 1e-5;
      auto z_at = [&](double v) {
        std::vector<double> a = angles;
        a[k] = v;
        qsim::Statevector sv = qsim::run_program(prog, a, init);
        return qsim::expectation_z(sv, qubit);
      };
      const double fd_k = (z_at(angles[k] + h) - z_at(angles[k] - h)) / (2.0 * h);
      if (std::abs(shift - fd_k) > 1e-6) {
        c.require(false, "shift rule param " + std::to_string(k) + " off by " +
                             std::to_string(shift - fd_k));
        return;
      }
    }
  };

  std::mt19937_64 qrng(56);
  // the encoder pair reuses angles 6..8 on both qubits; the shift rule must
  // sum both occurrences
  shift_matches_fd(pqc::encoder_conv_program(2, 0, 1), random_angles(qrng, 15),
                   random_state(qrng, 2), 1);
  shift_matches_fd(pqc::processor_program(4, 0), random_angles(qrng, 8), random_state(qrng, 4), 2);
  return c;
}

// ---------------------------------------------------------------------------
// 6. Long-trajectory dataset integrity.

Check check_dataset_integrity() {
  Check c;
  physics::SimConfig cfg;
  const physics::Trajectory traj = physics::generate_random_trajectory(cfg, 10000, 6);
  const graphs::Dataset ds = graphs::make_dataset(traj, 0.35);
  c.require(ds.samples.size() == 9997, "sample count " + std::to_string(ds.samples.size()));

  const double lo_x = cfg.box_min_x + cfg.particle_radius - 1e-9;
  const double hi_x = cfg.box_max_x - cfg.particle_radius + 1e-9;
  const double lo_y = cfg.box_min_y + cfg.particle_radius - 1e-9;
  const double hi_y = cfg.box_max_y - cfg.particle_radius + 1e-9;

  for (const graphs::GraphSample& s : ds.samples) {
    if (!c.ok) break;
    c.require(s.n_edges >= 3 && s.n_edges <= 6,
              "edge count " + std::to_string(s.n_edges) + " at t " + std::to_string(s.t));
    int self_edges = 0;
    for (int e = 0; e < s.n_edges; ++e) {
      int recv = -1, send = -1;
      for (int r = 0; r < 3; ++r) {
        if (s.Er(r, e) == 1.0) recv = r;
        if (s.Es(r, e) == 1.0) send = r;
      }
      c.require(recv >= 0 && send >= 0, "one-hot columns at t " + std::to_string(s.t));
      if (recv == send) ++self_edges;
    }
    c.require(self_edges == 3,
              std::to_string(self_edges) + " self edges at t " + std::to_string(s.t));
    for (const physics::Vec2& p : s.anchor.positions) {
      c.require(p[0] >= lo_x && p[0] <= hi_x && p[1] >= lo_y && p[1] <= hi_y,
                "position outside the box at t " + std::to_string(s.t));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 7. Ground-truth accelerations invert the integrator.

Check check_acceleration_inverts() {
  Check c;
  physics::SimConfig cfg;
  const physics::Trajectory traj = physics::generate_random_trajectory(cfg, 1002, 7);
  for (int t = 1; t <= 1000 && c.ok; ++t) {
    const Mat a = physics::ground_truth_acceleration(traj, t);
    for (int j = 0; j < 3; ++j) {
      const auto [p_next, v_next] = physics::euler_step(
          traj.positions[t][j], traj.velocities[t][j], {a(0, j), a(1, j)}, cfg.dt);
      const double dp = std::max(std::abs(p_next[0] - traj.positions[t + 1][j][0]),
                                 std::abs(p_next[1] - traj.positions[t + 1][j][1]));
      const double dv = std::max(std::abs(v_next[0] - traj.velocities[t + 1][j][0]),
                                 std::abs(v_next[1] - traj.velocities[t + 1][j][1]));
      c.require(dp <= 1e-9 && dv <= 1e-9,
                "step " + std::to_string(t) + " drift " + std::to_string(std::max(dp, dv)));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 8. Output shapes and quantum output range.

Check check_output_shapes() {
  Check c;
  const graphs::Dataset ds = bouncy_dataset(10, 8);
  for (int procs = 1; procs <= 2; ++procs) {
    const cgnn::CgnnParams cp = cgnn::CgnnParams::init(procs, 80 + procs);
    const sqgnn::SqgnnParams sp = sqgnn::SqgnnParams::init(procs, 81 + procs);
    const iqgnn::IqgnnParams ip = iqgnn::IqgnnParams::init(procs, 82 + procs);
    for (const graphs::GraphSample& s : ds.samples) {
      if (!c.ok) break;
      const Mat yc = cgnn::cgnn_forward(s, cp);
      const Mat ys = sqgnn::sqgnn_forward(s, sp);
      const Mat yi = iqgnn::iqgnn_forward(s, ip);
      for (const Mat* m : {&yc, &ys, &yi}) {
        c.require(m->rows == 2 && m->cols == 3, "prediction must be 2x3");
        for (double v : m->data) c.require(std::isfinite(v), "prediction must be finite");
      }
      for (const Mat* m : {&ys, &yi})
        for (double v : m->data)
          c.require(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12,
                    "quantum output " + std::to_string(v) + " outside [-1, 1]");
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 9. Training collapses the batch loss within ten batches.

Check check_training_collapse() {
  Check c;
  physics::SimConfig cfg;
  const physics::Particles p0 = {{{0.2, 0.7}, {0.5, 0.7}, {0.8, 0.7}}};
  const physics::Particles v0{};
  const physics::Trajectory traj = physics::generate_trajectory(cfg, p0, v0, 203);
  const graphs::Dataset ds = graphs::make_dataset(traj, 0.2);
  c.require(ds.samples.size() == 200, "training corpus size " + std::to_string(ds.samples.size()));

  struct Setup {
    const char* name;
    train::ModelKind kind;
    train::GradMode mode;
    double lr;
    double budget_seconds;
  };
  const std::vector<Setup> setups = {
      {"cgnn", train::ModelKind::Cgnn, train::GradMode::Analytic, 0.01, 60.0},
      {"sqgnn", train::ModelKind::Sqgnn, train::GradMode::CentralFd, 0.1, 900.0},
      {"iqgnn", train::ModelKind::Iqgnn, train::GradMode::CentralFd, 0.1, 900.0},
  };

  for (const Setup& setup : setups) {
    if (!c.ok) break;
    train::TrainConfig tc;
    tc.kind = setup.kind;
    tc.grad_mode = setup.mode;
    tc.processors = 1;
    tc.batch_size = 4;
    tc.epochs = 1;
    tc.seed = 0;
    tc.lr = setup.lr;

    const auto start = std::chrono::steady_clock::now();
    const train::TrainResult result = train::train_model(ds, tc);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    c.require(!result.aborted, std::string(setup.name) + " aborted: " + result.diagnostic);
    c.require(result.metrics.size() == 50,
              std::string(setup.name) + " rows " + std::to_string(result.metrics.size()));
    c.require(elapsed < setup.budget_seconds,
              std::string(setup.name) + " took " + std::to_string(elapsed) + "s");
    if (!c.ok) break;

    double early_max = 0.0;
    for (int i = 0; i < 3; ++i) early_max = std::max(early_max, result.metrics[i].batch_loss);
    for (size_t i = 10; i < result.metrics.size(); ++i) {
      c.require(result.metrics[i].batch_loss < 0.1 * early_max,
                std::string(setup.name) + " batch " + std::to_string(i) + " loss " +
                    std::to_string(result.metrics[i].batch_loss) + " vs early max " +
                    std::to_string(early_max));
    }

    double prev_sum = 0.0;
    for (size_t i = 0; i < result.metrics.size(); ++i) {
      const double r = result.metrics[i].running_avg_percent_error;
      c.require(std::isfinite(r) && r >= 0.0,
                std::string(setup.name) + " percent error row " + std::to_string(i));
      const double sum = r * static_cast<double>((i + 1) * 4);
      c.require(sum >= prev_sum - 1e-9 * std::max(1.0, prev_sum),
                std::string(setup.name) + " running average is not a cumulative mean at row " +
                    std::to_string(i));
      prev_sum = sum;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 10. Implicit vs explicit edge padding.

Check check_edge_padding() {
  Check c;
  const graphs::Dataset ds = bouncy_dataset(4000, 10);
  const graphs::GraphSample* four = nullptr;
  for (const graphs::GraphSample& s : ds.samples)
    if (s.n_edges == 4) {
      four = &s;
      break;
    }
  c.require(four != nullptr, "no 4-edge sample in the probe trajectory");
  if (!four) return c;

  graphs::GraphSample padded = *four;
  padded.n_edges = 6;
  auto widen = [](const Mat& m, int cols) {
    Mat out(m.rows, cols);
    for (int r = 0; r < m.rows; ++r)
      for (int ccol = 0; ccol < m.cols; ++ccol) out(r, ccol) = m(r, ccol);
    return out;
  };
  padded.Er = widen(four->Er, 6);
  padded.Es = widen(four->Es, 6);
  padded.Ea_raw = widen(four->Ea_raw, 6);
  padded.Ea_padded = widen(four->Ea_padded, 6);

  for (int procs = 1; procs <= 2; ++procs) {
    const iqgnn::IqgnnParams params = iqgnn::IqgnnParams::init(procs, 100 + procs);
    for (int j = 0; j < 3; ++j) {
      const auto a = iqgnn::run_circuit(iqgnn::build_column_inputs(*four, j), params);
      const auto b = iqgnn::run_circuit(iqgnn::build_column_inputs(padded, j), params);
      c.require(a[0] == b[0] && a[1] == b[1],
                "padded outputs differ at node " + std::to_string(j));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 11. Zero-angle model forwards against dense linear algebra.

using Amp = std::vector<cd>;

double amp_norm(const Amp& v) {
  double n2 = 0.0;
  for (const cd& z : v) n2 += std::norm(z);
  return std::sqrt(n2);
}

Amp hadamard_amp(const Amp& a, const Amp& b) {
  Amp out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

// Zero-angle processor: both RY layers vanish, leaving the forward CNOT ring
// and the reversed one.
CMat zero_processor_unitary(int n, int s) {
  CMat u = oracle::identity(1 << n);
  auto push = [&](int ctrl, int tgt) { u = oracle::mul(oracle::cnot(n, s + ctrl, s + tgt), u); };
  push(0, 1);
  push(1, 2);
  push(2, 3);
  push(3, 0);
  push(3, 2);
  push(2, 1);
  push(1, 0);
  push(0, 3);
  return u;
}

Mat sqgnn_zero_oracle(const graphs::GraphSample& s) {
  const CMat u_proc = zero_processor_unitary(4, 0);
  auto phi = [&](const Amp& col) {
    return amp_norm(col) < 1e-12 ? col : oracle::apply(u_proc, col);
  };

  std::vector<Amp> nexp(3);
  for (int j = 0; j < 3; ++j) {
    const std::vector<double> col = s.N.col(j);
    Amp data(col.begin(), col.end());
    nexp[j] = oracle::embed(data, 4, 0);
  }
  std::vector<Amp> eexp(s.n_edges);
  std::vector<int> recv(s.n_edges), send(s.n_edges);
  for (int e = 0; e < s.n_edges; ++e) {
    std::vector<double> col = s.Ea_padded.col(e);
    double n2 = 0.0;
    for (double v : col) n2 += v * v;
    if (n2 == 0.0) col = {0.0, 0.0, 0.0, 1.0};
    Amp data(col.begin(), col.end());
    eexp[e] = oracle::embed(data, 4, 0);
    for (int r = 0; r < 3; ++r) {
      if (s.Er(r, e) == 1.0) recv[e] = r;
      if (s.Es(r, e) == 1.0) send[e] = r;
    }
  }

  std::vector<Amp> edge_state(s.n_edges);
  for (int e = 0; e < s.n_edges; ++e) {
    const Amp a1 = phi(nexp[recv[e]]);
    const Amp a2 = phi(hadamard_amp(a1, nexp[send[e]]));
    edge_state[e] = phi(hadamard_amp(a2, eexp[e]));
  }

  Mat pred(2, 3);
  for (int j = 0; j < 3; ++j) {
    Amp abar(16, cd{0.0, 0.0});
    for (int e = 0; e < s.n_edges; ++e)
      if (recv[e] == j)
        for (int i = 0; i < 16; ++i) abar[i] += edge_state[e][i];
    const Amp p1 = phi(nexp[j]);
    const Amp node = phi(hadamard_amp(hadamard_amp(p1, abar), nexp[j]));

    const double nrm = amp_norm(node);
    if (nrm == 0.0) {
      pred(0, j) = 1.0;
      pred(1, j) = 1.0;
      continue;
    }
    Amp v(16);
    for (int i = 0; i < 16; ++i) v[i] = node[i] / nrm;
    v = oracle::apply(oracle::cnot(4, 0, 2), v);
    v = oracle::apply(oracle::cnot(4, 1, 3), v);
    pred(0, j) = oracle::z_expect(v, 4, 2);
    pred(1, j) = oracle::z_expect(v, 4, 3);
  }
  return pred;
}

Mat iqgnn_zero_oracle(const graphs::GraphSample& s) {
  Mat pred(2, 3);
  for (int j = 0; j < 3; ++j) {
    const std::vector<double> n_col = s.N.col(j);
    std::vector<double> er_col(6, 0.0), es_col(6, 0.0), ea_col(6, 0.0);
    for (int e = 0; e < s.n_edges; ++e) {
      er_col[e] = s.Er(j, e);
      es_col[e] = s.Es(j, e);
      ea_col[e] = s.Ea_raw(j, e);
    }
    std::vector<double> edge_embed = ea_col;
    edge_embed.resize(8, 0.0);

    const Amp node16 = oracle::embed(Amp(n_col.begin(), n_col.end()), 4, 0);
    double e2 = 0.0;
    for (double v : edge_embed) e2 += v * v;
    Amp edge16(16, cd{0.0, 0.0});
    if (e2 == 0.0) {
      edge16[0] = cd{1.0, 0.0};
    } else {
      edge16 = oracle::embed(Amp(edge_embed.begin(), edge_embed.end()), 4, 0);
    }
    Amp v(256);
    for (int hi = 0; hi < 16; ++hi)
      for (int lo = 0; lo < 16; ++lo) v[hi * 16 + lo] = node16[hi] * edge16[lo];

    auto rx_cascade = [&](const std::vector<double>& vals, int offset) {
      for (size_t i = 0; i < vals.size(); ++i)
        v = oracle::apply(oracle::single(8, offset + static_cast<int>(i % 4), oracle::rx(vals[i])), v);
    };
    auto transition = [&]() {
      for (int q = 0; q < 4; ++q) v = oracle::apply(oracle::cnot(8, 4 + q, q), v);
    };
    const CMat edge_proc = zero_processor_unitary(8, 4);
    const CMat node_proc = zero_processor_unitary(8, 0);

    rx_cascade(n_col, 4);
    rx_cascade(er_col, 4);
    rx_cascade(es_col, 4);
    rx_cascade(ea_col, 4);
    v = oracle::apply(edge_proc, v);
    transition();
    rx_cascade(er_col, 0);
    v = oracle::apply(node_proc, v);

    v = oracle::apply(oracle::cnot(8, 0, 2), v);
    v = oracle::apply(oracle::cnot(8, 1, 3), v);
    pred(0, j) = oracle::z_expect(v, 8, 2);
    pred(1, j) = oracle::z_expect(v, 8, 3);
  }
  return pred;
}

Check check_zero_angle_oracles() {
  Check c;
  const graphs::Dataset ds = bouncy_dataset(2000, 11);
  std::mt19937_64 rng(111);

  sqgnn::SqgnnParams sp;
  sp.passes.resize(1);
  iqgnn::IqgnnParams ip;
  ip.copies.resize(1);

  for (int trial = 0; trial < 20 && c.ok; ++trial) {
    const graphs::GraphSample& s = ds.samples[rng() % ds.samples.size()];

    const Mat ys = sqgnn::sqgnn_forward(s, sp);
    const Mat ys_oracle = sqgnn_zero_oracle(s);
    for (size_t i = 0; i < ys.data.size(); ++i)
      c.require(std::abs(ys.data[i] - ys_oracle.data[i]) <= 1e-9,
                "sqgnn deviates by " + std::to_string(ys.data[i] - ys_oracle.data[i]) + " at t " +
                    std::to_string(s.t));

    const Mat yi = iqgnn::iqgnn_forward(s, ip);
    const Mat yi_oracle = iqgnn_zero_oracle(s);
    for (size_t i = 0; i < yi.data.size(); ++i)
      c.require(std::abs(yi.data[i] - yi_oracle.data[i]) <= 1e-9,
                "iqgnn deviates by " + std::to_string(yi.data[i] - yi_oracle.data[i]) + " at t " +
                    std::to_string(s.t));
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Check (*fn)();
  };
  const std::vector<Entry> entries = {
      {"rotation block parameter counts (15/8/6) and size rejection", check_block_sizes},
      {"block unitarity and statevector norm preservation", check_unitarity},
      {"z expectation after an x rotation matches cos(theta)", check_rx_expectation},
      {"matrix message passing equals per-edge loops", check_message_passing},
      {"backprop and shift-rule gradients match finite differences", check_gradients},
      {"generated samples keep 3..6 edges, 3 self-edges, positions in the box",
       check_dataset_integrity},
      {"ground-truth accelerations roll the trajectory forward exactly",
       check_acceleration_inverts},
      {"all models emit 2x3 outputs; quantum outputs stay in [-1,1]", check_output_shapes},
      {"each model's training loss collapses within ten batches", check_training_collapse},
      {"implicit and explicit edge padding give identical circuits", check_edge_padding},
      {"zero-angle model forwards match dense linear algebra", check_zero_angle_oracles},
  };

  int failures = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    Check c;
    try {
      c = entries[i].fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("unexpected exception: ") + e.what();
    }
    if (c.ok) {
      std::printf("PASS %2zu %s\n", i + 1, entries[i].name);
    } else {
      std::printf("FAIL %2zu %s (%s)\n", i + 1, entries[i].name, c.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
