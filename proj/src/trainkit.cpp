#include "qgnn/trainkit.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace qgnn::train {

AdamState AdamState::make(size_t n_params, double lr, double beta1, double beta2, double eps) {
  AdamState s;
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  s.m.assign(n_params, 0.0);
  s.v.assign(n_params, 0.0);
  return s;
}

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grad) {
  if (params.size() != state.m.size() || grad.size() != state.m.size())
    throw ShapeError("optimizer state and parameter sizes disagree");
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, state.t);
  const double bc2 = 1.0 - std::pow(state.beta2, state.t);
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

void TrainConfig::validate_fields() const {
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (epochs < 1) throw ConfigError("epoch count must be at least 1");
  if (processors < 1 || processors > 2) throw ConfigError("processor count must be 1 or 2");
  if (!(fd_step > 0.0)) throw ConfigError("finite-difference step must be positive");
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0)
    throw ConfigError("momentum decay rates must lie in [0, 1)");
  if (!(eps > 0.0)) throw ConfigError("optimizer epsilon must be positive");
  if (grad_mode == GradMode::Analytic && kind != ModelKind::Cgnn)
    throw ConfigError("analytic gradients exist only for the classical model");
  if (grad_mode == GradMode::ParameterShiftCheck && kind == ModelKind::Cgnn)
    throw ConfigError("the shift-rule check applies to angle parameters only");
}

double mse_loss(const Mat& pred, const Mat& target) {
  if (pred.rows != target.rows || pred.cols != target.cols)
    throw ShapeError("loss shapes disagree");
  double s = 0.0;
  for (size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    s += d * d;
  }
  const double loss = s / static_cast<double>(pred.data.size());
  if (!std::isfinite(loss)) throw NumericError("non-finite loss");
  return loss;
}

Mat model_forward(ModelKind kind, const std::vector<double>& flat, int processors,
                  const graphs::GraphSample& sample) {
  switch (kind) {
    case ModelKind::Cgnn:
      return cgnn::cgnn_forward(sample, cgnn::CgnnParams::from_flat(flat, processors));
    case ModelKind::Sqgnn:
      return sqgnn::sqgnn_forward(sample, sqgnn::SqgnnParams::from_flat(flat, processors));
    default:
      return iqgnn::iqgnn_forward(sample, iqgnn::IqgnnParams::from_flat(flat, processors));
  }
}

std::vector<double> init_params(ModelKind kind, int processors, uint64_t seed) {
  switch (kind) {
    case ModelKind::Cgnn:
      return cgnn::CgnnParams::init(processors, seed).to_flat();
    case ModelKind::Sqgnn:
      return sqgnn::SqgnnParams::init(processors, seed).to_flat();
    default:
      return iqgnn::IqgnnParams::init(processors, seed).to_flat();
  }
}

double batch_loss(ModelKind kind, const std::vector<double>& flat, int processors,
                  const std::vector<const graphs::GraphSample*>& batch) {
  if (batch.empty()) throw ArgumentError("batch is empty");
  double s = 0.0;
  for (const graphs::GraphSample* sample : batch)
    s += mse_loss(model_forward(kind, flat, processors, *sample), sample->target);
  return s / static_cast<double>(batch.size());
}

std::vector<double> grad_central_fd(const std::function<double(const std::vector<double>&)>& loss,
                                    const std::vector<double>& params, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
  std::vector<double> g(params.size());
  std::vector<double> probe = params;
  for (size_t i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + h;
    const double up = loss(probe);
    probe[i] = params[i] - h;
    const double dn = loss(probe);
    probe[i] = params[i];
    if (!std::isfinite(up) || !std::isfinite(dn))
      throw NumericError("non-finite loss during finite differences");
    g[i] = (up - dn) / (2.0 * h);
  }
  return g;
}

double parameter_shift(const qsim::CircuitProgram& program, const std::vector<double>& params,
                       const qsim::Statevector& initial, int qubit, int param_index) {
  if (param_index < 0 || param_index >= program.n_params)
    throw IndexError("parameter index out of range");
  if (static_cast<int>(params.size()) != program.n_params)
    throw ShapeError("parameter vector size disagrees with program");

  constexpr double half_pi = std::numbers::pi / 2.0;
  double total = 0.0;
  qsim::CircuitProgram mod = program;
  for (size_t g = 0; g < program.instructions.size(); ++g) {
    const qsim::GateInstruction& gate = program.instructions[g];
    if (gate.param != param_index) continue;
    if (gate.kind == qsim::GateKind::CNOT)
      throw ArgumentError("parameter feeds a non-rotation gate");
    mod.instructions[g].param = -1;
    mod.instructions[g].angle = params[param_index] + half_pi;
    const double up = qsim::expectation_z(qsim::run_program(mod, params, initial), qubit);
    mod.instructions[g].angle = params[param_index] - half_pi;
    const double dn = qsim::expectation_z(qsim::run_program(mod, params, initial), qubit);
    mod.instructions[g] = gate;
    total += 0.5 * (up - dn);
  }
  return total;
}

double percent_error(const physics::Particles& pred, const physics::Particles& truth,
                     double floor_delta) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k)
      s += 100.0 * std::abs(pred[i][k] - truth[i][k]) /
           std::max(std::abs(truth[i][k]), floor_delta);
  return s / 6.0;
}

double position_mse(const physics::Particles& a, const physics::Particles& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) {
      const double d = a[i][k] - b[i][k];
      s += d * d;
    }
  return s / 6.0;
}

physics::Particles predict_positions(const graphs::GraphSample& sample, const Mat& normalized_pred,
                                     const graphs::TargetScaler& scaler, double dt) {
  const Mat acc = scaler.denormalize(normalized_pred);
  physics::Particles next{};
  for (int i = 0; i < 3; ++i) {
    const physics::Vec2 a = {acc(0, i), acc(1, i)};
    next[i] = physics::euler_step(sample.anchor.positions[i], sample.anchor.velocities[i], a, dt)
                  .first;
  }
  return next;
}

std::vector<size_t> epoch_permutation(size_t n, uint64_t seed, int epoch) {
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  // Fisher-Yates on a fixed generator so the order is identical across
  // standard libraries, which std::shuffle does not promise.
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<uint64_t>(epoch) + 1)));
  for (size_t i = n; i > 1; --i) {
    const size_t j = rng() % i;
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

namespace {

// Shift-rule spot check on an isolated processor circuit before training
// starts; catches a simulator or differencing regression early.
void run_shift_check(const std::vector<double>& flat, double fd_step) {
  qsim::CircuitProgram prog = pqc::processor_program(4, 0);
  std::vector<double> angles(flat.begin(), flat.begin() + 8);
  std::vector<double> ramp(16);
  std::iota(ramp.begin(), ramp.end(), 1.0);
  const qsim::Statevector init = qsim::embed_amplitudes(ramp, 4, 0);

  for (int k = 0; k < 8; ++k) {
    const double shifted = parameter_shift(prog, angles, init, 2, k);
    std::vector<double> probe = angles;
    probe[k] = angles[k] + fd_step;
    const double up = qsim::expectation_z(qsim::run_program(prog, probe, init), 2);
    probe[k] = angles[k] - fd_step;
    const double dn = qsim::expectation_z(qsim::run_program(prog, probe, init), 2);
    const double fd = (up - dn) / (2.0 * fd_step);
    if (std::abs(shifted - fd) > 1e-6)
      throw NumericError("shift-rule check disagrees with finite differences");
  }
}

std::vector<double> batch_gradient_analytic(const std::vector<double>& flat,
                                            const TrainConfig& config,
                                            const std::vector<const graphs::GraphSample*>& batch) {
  const cgnn::CgnnParams params = cgnn::CgnnParams::from_flat(flat, config.processors);
  std::vector<double> grad(flat.size(), 0.0);
  for (const graphs::GraphSample* sample : batch) {
    const Mat pred = cgnn::cgnn_forward(*sample, params);
    Mat dPred(2, 3);
    for (size_t i = 0; i < pred.data.size(); ++i)
      dPred.data[i] =
          2.0 * (pred.data[i] - sample->target.data[i]) / (6.0 * batch.size());
    const std::vector<double> g = cgnn::cgnn_gradient(*sample, params, dPred).to_flat();
    for (size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
  }
  return grad;
}

}  // namespace

TrainResult train_model(const graphs::Dataset& data, const TrainConfig& config) {
  config.validate_fields();
  if (data.samples.empty()) throw ArgumentError("dataset is empty");
  const size_t n = data.samples.size();
  const size_t n_batches = n / static_cast<size_t>(config.batch_size);
  if (n_batches == 0) throw ConfigError("dataset smaller than one batch");

  TrainResult result;
  result.params = init_params(config.kind, config.processors, config.seed);
  if (config.grad_mode == GradMode::ParameterShiftCheck)
    run_shift_check(result.params, config.fd_step);

  AdamState opt =
      AdamState::make(result.params.size(), config.lr, config.beta1, config.beta2, config.eps);

  long batch_index = 0;
  double pe_sum = 0.0;
  long pe_count = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<size_t> order = epoch_permutation(n, config.seed, epoch);
    for (size_t b = 0; b < n_batches; ++b) {
      std::vector<const graphs::GraphSample*> batch;
      batch.reserve(config.batch_size);
      for (int i = 0; i < config.batch_size; ++i)
        batch.push_back(&data.samples[order[b * config.batch_size + i]]);

      MetricsRecord rec;
      rec.batch_index = batch_index;
      std::vector<double> grad;
      try {
        double loss_sum = 0.0, pos_sum = 0.0;
        for (const graphs::GraphSample* sample : batch) {
          const Mat pred = model_forward(config.kind, result.params, config.processors, *sample);
          loss_sum += mse_loss(pred, sample->target);
          const physics::Particles next =
              predict_positions(*sample, pred, data.scaler, data.dt);
          pos_sum += position_mse(next, sample->anchor.next_positions);
          pe_sum += percent_error(next, sample->anchor.next_positions);
          ++pe_count;
        }
        rec.batch_loss = loss_sum / batch.size();
        rec.position_mse = pos_sum / batch.size();
        rec.running_avg_percent_error = pe_sum / pe_count;
        if (!std::isfinite(rec.batch_loss)) throw NumericError("non-finite loss");

        if (config.grad_mode == GradMode::Analytic) {
          grad = batch_gradient_analytic(result.params, config, batch);
        } else {
          auto loss_at = [&](const std::vector<double>& p) {
            return batch_loss(config.kind, p, config.processors, batch);
          };
          grad = grad_central_fd(loss_at, result.params, config.fd_step);
        }
      } catch (const NumericError& e) {
        result.aborted = true;
        result.diagnostic =
            "aborted at batch " + std::to_string(batch_index) + ": " + e.what();
        return result;
      }

      result.metrics.push_back(rec);
      adam_step(opt, result.params, grad);
      ++batch_index;
    }
  }
  return result;
}

std::vector<MetricsRecord> validate_model(const graphs::Dataset& data, const TrainConfig& config,
                                          const std::vector<double>& params) {
  config.validate_fields();
  std::vector<MetricsRecord> out;
  out.reserve(data.samples.size());
  double pe_sum = 0.0;
  long count = 0;
  for (const graphs::GraphSample& sample : data.samples) {
    const Mat pred = model_forward(config.kind, params, config.processors, sample);
    MetricsRecord rec;
    rec.batch_index = count;
    rec.batch_loss = mse_loss(pred, sample.target);
    const physics::Particles next = predict_positions(sample, pred, data.scaler, data.dt);
    rec.position_mse = position_mse(next, sample.anchor.next_positions);
    pe_sum += percent_error(next, sample.anchor.next_positions);
    ++count;
    rec.running_avg_percent_error = pe_sum / count;
    out.push_back(rec);
  }
  return out;
}

}  // namespace qgnn::train
