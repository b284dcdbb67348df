#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qgnn/cgnn.hpp"
#include "qgnn/graphs.hpp"
#include "qgnn/iqgnn.hpp"
#include "qgnn/sqgnn.hpp"

namespace qgnn::train {

enum class ModelKind { Cgnn, Sqgnn, Iqgnn };

/// Analytic backprop exists only for the classical model; quantum models
/// train on central finite differences. The shift-check mode validates the
/// rotation-gate shift rule on an isolated circuit first, then trains on
/// central differences like everyone else.
enum class GradMode { Analytic, CentralFd, ParameterShiftCheck };

struct AdamState {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> m, v;
  long t = 0;

  static AdamState make(size_t n_params, double lr = 0.01, double beta1 = 0.9,
                        double beta2 = 0.999, double eps = 1e-8);
};

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grad);

struct TrainConfig {
  ModelKind kind = ModelKind::Cgnn;
  GradMode grad_mode = GradMode::Analytic;
  int processors = 1;
  int batch_size = 4;
  int epochs = 1;
  uint64_t seed = 0;
  double fd_step = 1e-4;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate_fields() const;
};

struct MetricsRecord {
  long batch_index = 0;
  double batch_loss = 0.0;
  double position_mse = 0.0;
  double running_avg_percent_error = 0.0;
};

struct TrainResult {
  std::vector<double> params;
  std::vector<MetricsRecord> metrics;
  bool aborted = false;
  std::string diagnostic;
};

double mse_loss(const Mat& pred, const Mat& target);

Mat model_forward(ModelKind kind, const std::vector<double>& flat, int processors,
                  const graphs::GraphSample& sample);
std::vector<double> init_params(ModelKind kind, int processors, uint64_t seed);

double batch_loss(ModelKind kind, const std::vector<double>& flat, int processors,
                  const std::vector<const graphs::GraphSample*>& batch);

std::vector<double> grad_central_fd(const std::function<double(const std::vector<double>&)>& loss,
                                    const std::vector<double>& params, double h);

/// d<Z_qubit>/d theta_k by the rotation shift rule, one +-pi/2 evaluation
/// pair per occurrence of the parameter, occurrences summed. Exact for
/// rotation-generated circuits, so it cross-checks finite differences.
double parameter_shift(const qsim::CircuitProgram& program, const std::vector<double>& params,
                       const qsim::Statevector& initial, int qubit, int param_index);

double percent_error(const physics::Particles& pred, const physics::Particles& truth,
                     double floor_delta = 1e-6);
double position_mse(const physics::Particles& a, const physics::Particles& b);

/// Denormalizes the predicted accelerations and rolls the sample's anchor
/// state one step forward to get predicted next positions.
physics::Particles predict_positions(const graphs::GraphSample& sample, const Mat& normalized_pred,
                                     const graphs::TargetScaler& scaler, double dt);

/// Shuffle order for one epoch; depends on (seed, epoch) only.
std::vector<size_t> epoch_permutation(size_t n, uint64_t seed, int epoch);

TrainResult train_model(const graphs::Dataset& data, const TrainConfig& config);

/// Read-only evaluation: one record per sample, no parameter updates.
std::vector<MetricsRecord> validate_model(const graphs::Dataset& data, const TrainConfig& config,
                                          const std::vector<double>& params);

}  // namespace qgnn::train
