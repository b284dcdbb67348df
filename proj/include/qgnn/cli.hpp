#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qgnn/graphs.hpp"
#include "qgnn/physics.hpp"
#include "qgnn/trainkit.hpp"

namespace qgnn::cli {

/// Flat dotted-key settings loaded from a json object. Unknown keys and
/// wrongly typed values are rejected on load.
struct RunConfig {
  uint64_t seed = 0;

  physics::SimConfig sim;
  int sim_steps = 1000;

  double graph_radius = 0.35;
  double validation_fraction = 0.3;

  std::string model_kind;  // "cgnn" | "sqgnn" | "iqgnn"
  int model_processors = 1;

  int batch_size = 4;
  int epochs = 1;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double fd_step = 1e-4;
  std::string grad_mode = "auto";  // "analytic" | "central_fd" | "parameter_shift_check"

  std::string io_dataset;
  std::string io_checkpoint;
  std::string io_out;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::string& path);

  train::ModelKind kind() const;
  /// Resolved training settings; "auto" picks backprop for the classical
  /// model and central differences for the quantum ones.
  train::TrainConfig train_config() const;
};

struct Checkpoint {
  train::ModelKind kind = train::ModelKind::Cgnn;
  int processors = 1;
  std::vector<double> params;
  graphs::TargetScaler scaler;
};

/// Named slices of the flat parameter vector, in flat order.
struct GroupSpec {
  std::string name;
  std::vector<int> shape;
};
std::vector<GroupSpec> parameter_groups(train::ModelKind kind, int processors);

std::string kind_name(train::ModelKind kind);

/// Textual checkpoint: named parameter groups with explicit shapes, 17
/// significant digits so reloads are bit-exact.
void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

/// Line-delimited dataset: a header record carrying dt, radius, count and
/// the scaler, then one record per sample.
void save_dataset(const std::string& path, const graphs::Dataset& data, const std::string& split);
graphs::Dataset load_dataset(const std::string& path);

void save_scaler(const std::string& path, const graphs::TargetScaler& scaler);

void write_metrics_csv(const std::string& path, const std::vector<train::MetricsRecord>& rows);

struct RolloutRow {
  int t = 0;
  int particle = 0;
  double pred_x = 0, pred_y = 0;
  double true_x = 0, true_y = 0;
};
void write_rollout_csv(const std::string& path, const std::vector<RolloutRow>& rows);

int cmd_gen_data(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_train(const RunConfig& cfg, const std::string& dataset_path, const std::string& out_dir,
              std::ostream& log);
int cmd_eval(const std::string& checkpoint_path, const std::string& dataset_path,
             const std::string& out_dir, std::ostream& log);

/// Parses argv (gen-data | train | eval) and maps failures to exit codes:
/// 0 ok, 2 settings, 3 compatibility, 4 numeric.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgnn::cli
