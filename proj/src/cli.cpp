#include "qgnn/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace qgnn::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir + ": " + ec.message());
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(what + " is not valid json");
  return j;
}

double need_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + " must be a number");
  return v.get<double>();
}

int need_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
  const int64_t raw = v.get<int64_t>();
  if (raw < INT32_MIN || raw > INT32_MAX) throw ConfigError(key + " is out of range");
  return static_cast<int>(raw);
}

uint64_t need_uint(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0) return v.get<uint64_t>();
  throw ConfigError(key + " must be a non-negative integer");
}

std::string need_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + " must be a string");
  return v.get<std::string>();
}

std::string scaler_json(const graphs::TargetScaler& s) {
  std::ostringstream o;
  o << "{\"mean\":[" << fmt(s.mean[0]) << ',' << fmt(s.mean[1]) << "],\"scale\":["
    << fmt(s.scale[0]) << ',' << fmt(s.scale[1]) << "],\"degenerate\":["
    << (s.degenerate[0] ? "true" : "false") << ',' << (s.degenerate[1] ? "true" : "false")
    << "]}";
  return o.str();
}

graphs::TargetScaler scaler_from_json(const json& j) {
  graphs::TargetScaler s;
  if (!j.is_object() || !j.contains("mean") || !j.contains("scale") || !j.contains("degenerate"))
    throw CompatError("scaler record is missing fields");
  for (int a = 0; a < 2; ++a) {
    s.mean[a] = j.at("mean").at(a).get<double>();
    s.scale[a] = j.at("scale").at(a).get<double>();
    s.degenerate[a] = j.at("degenerate").at(a).get<bool>();
  }
  return s;
}

void append_values(std::ostream& o, const double* v, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (i) o << ',';
    o << fmt(v[i]);
  }
}

void append_particles(std::ostream& o, const physics::Particles& p) {
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) o << (i + k ? "," : "") << fmt(p[i][k]);
}

std::vector<double> numbers_at(const json& j, const std::string& key, size_t n) {
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != n)
    throw CompatError(key + " must hold " + std::to_string(n) + " values");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = a.at(i).get<double>();
  return out;
}

physics::Particles particles_at(const json& j, const std::string& key) {
  std::vector<double> v = numbers_at(j, key, 6);
  physics::Particles p;
  for (int i = 0; i < 3; ++i) {
    p[i][0] = v[2 * i];
    p[i][1] = v[2 * i + 1];
  }
  return p;
}

int onehot_row(const Mat& m, int col) {
  for (int r = 0; r < m.rows; ++r)
    if (m(r, col) == 1.0) return r;
  throw CompatError("edge column is not one-hot");
}

train::ModelKind kind_from_name(const std::string& name) {
  if (name == "cgnn") return train::ModelKind::Cgnn;
  if (name == "sqgnn") return train::ModelKind::Sqgnn;
  if (name == "iqgnn") return train::ModelKind::Iqgnn;
  throw ConfigError("unknown model kind: " + name);
}

constexpr const char* kDatasetFormat = "qgnn-dataset-1";
constexpr const char* kCheckpointFormat = "qgnn-checkpoint-1";
constexpr const char* kScalerFormat = "qgnn-scaler-1";

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j = parse_json(text, "settings");
  if (!j.is_object()) throw ConfigError("settings must be a json object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") c.seed = need_uint(v, key);
    else if (key == "sim.gravity_x") c.sim.gravity_x = need_number(v, key);
    else if (key == "sim.gravity_y") c.sim.gravity_y = need_number(v, key);
    else if (key == "sim.dt") c.sim.dt = need_number(v, key);
    else if (key == "sim.box_min_x") c.sim.box_min_x = need_number(v, key);
    else if (key == "sim.box_min_y") c.sim.box_min_y = need_number(v, key);
    else if (key == "sim.box_max_x") c.sim.box_max_x = need_number(v, key);
    else if (key == "sim.box_max_y") c.sim.box_max_y = need_number(v, key);
    else if (key == "sim.particle_radius") c.sim.particle_radius = need_number(v, key);
    else if (key == "sim.restitution") c.sim.restitution = need_number(v, key);
    else if (key == "sim.steps") c.sim_steps = need_int(v, key);
    else if (key == "graph.radius") c.graph_radius = need_number(v, key);
    else if (key == "graph.validation_fraction") c.validation_fraction = need_number(v, key);
    else if (key == "model.kind") kind_from_name(c.model_kind = need_string(v, key));
    else if (key == "model.processors") c.model_processors = need_int(v, key);
    else if (key == "train.batch_size") c.batch_size = need_int(v, key);
    else if (key == "train.epochs") c.epochs = need_int(v, key);
    else if (key == "train.lr") c.lr = need_number(v, key);
    else if (key == "train.beta1") c.beta1 = need_number(v, key);
    else if (key == "train.beta2") c.beta2 = need_number(v, key);
    else if (key == "train.eps") c.eps = need_number(v, key);
    else if (key == "train.fd_step") c.fd_step = need_number(v, key);
    else if (key == "train.grad_mode") {
      c.grad_mode = need_string(v, key);
      if (c.grad_mode != "auto" && c.grad_mode != "analytic" && c.grad_mode != "central_fd" &&
          c.grad_mode != "parameter_shift_check")
        throw ConfigError("unknown train.grad_mode: " + c.grad_mode);
    } else if (key == "io.dataset") c.io_dataset = need_string(v, key);
    else if (key == "io.checkpoint") c.io_checkpoint = need_string(v, key);
    else if (key == "io.out") c.io_out = need_string(v, key);
    else throw ConfigError("unknown settings key: " + key);
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) { return from_json_text(read_file(path)); }

train::ModelKind RunConfig::kind() const {
  if (model_kind.empty()) throw ConfigError("model.kind is not set");
  return kind_from_name(model_kind);
}

train::TrainConfig RunConfig::train_config() const {
  train::TrainConfig tc;
  tc.kind = kind();
  tc.processors = model_processors;
  tc.batch_size = batch_size;
  tc.epochs = epochs;
  tc.seed = seed;
  tc.fd_step = fd_step;
  tc.lr = lr;
  tc.beta1 = beta1;
  tc.beta2 = beta2;
  tc.eps = eps;
  if (grad_mode == "auto")
    tc.grad_mode = tc.kind == train::ModelKind::Cgnn ? train::GradMode::Analytic
                                                     : train::GradMode::CentralFd;
  else if (grad_mode == "analytic")
    tc.grad_mode = train::GradMode::Analytic;
  else if (grad_mode == "central_fd")
    tc.grad_mode = train::GradMode::CentralFd;
  else if (grad_mode == "parameter_shift_check")
    tc.grad_mode = train::GradMode::ParameterShiftCheck;
  else
    throw ConfigError("unknown train.grad_mode: " + grad_mode);
  tc.validate_fields();
  return tc;
}

std::string kind_name(train::ModelKind kind) {
  switch (kind) {
    case train::ModelKind::Cgnn: return "cgnn";
    case train::ModelKind::Sqgnn: return "sqgnn";
    case train::ModelKind::Iqgnn: return "iqgnn";
  }
  throw ArgumentError("unknown model kind");
}

std::vector<GroupSpec> parameter_groups(train::ModelKind kind, int processors) {
  std::vector<GroupSpec> g;
  if (kind == train::ModelKind::Cgnn) {
    auto layer = [&](const std::string& name, int out, int in, bool norm) {
      g.push_back({name + ".weight", {out, in}});
      g.push_back({name + ".bias", {out}});
      if (norm) {
        g.push_back({name + ".gain", {out}});
        g.push_back({name + ".shift", {out}});
      }
    };
    layer("node_encoder.0", 8, 8, true);
    layer("node_encoder.1", 9, 8, true);
    layer("edge_encoder.0", 4, 4, true);
    layer("edge_encoder.1", 5, 4, true);
    for (int p = 0; p < processors; ++p) {
      const std::string pass = "pass" + std::to_string(p);
      layer(pass + ".phi_R", 5, 23, true);
      layer(pass + ".phi_O", 9, 14, true);
    }
    layer("decoder", 2, 9, false);
  } else if (kind == train::ModelKind::Sqgnn) {
    g.push_back({"node_encoder", {15}});
    g.push_back({"edge_encoder", {15}});
    for (int p = 0; p < processors; ++p) {
      const std::string pass = "pass" + std::to_string(p);
      for (const char* phi : {"phi_e1", "phi_e2", "phi_e3", "phi_n1", "phi_n2"})
        g.push_back({pass + "." + phi, {8}});
    }
    g.push_back({"decoder", {6}});
  } else {
    g.push_back({"node_encoder", {15}});
    g.push_back({"edge_encoder", {15}});
    for (int c = 0; c < processors; ++c) {
      const std::string copy = "copy" + std::to_string(c);
      g.push_back({copy + ".edge_processor", {8}});
      g.push_back({copy + ".node_processor", {8}});
      g.push_back({copy + ".transition_decoder", {6}});
    }
    g.push_back({"final_decoder", {6}});
  }
  return g;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  const std::vector<GroupSpec> groups = parameter_groups(ck.kind, ck.processors);
  size_t total = 0;
  for (const GroupSpec& gs : groups) {
    size_t n = 1;
    for (int d : gs.shape) n *= static_cast<size_t>(d);
    total += n;
  }
  if (ck.params.size() != total)
    throw ShapeError("checkpoint parameter count disagrees with its layout");

  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "{\n  \"format\": \"" << kCheckpointFormat << "\",\n  \"kind\": \"" << kind_name(ck.kind)
    << "\",\n  \"processors\": " << ck.processors << ",\n  \"scaler\": " << scaler_json(ck.scaler)
    << ",\n  \"groups\": [\n";
  size_t pos = 0;
  for (size_t i = 0; i < groups.size(); ++i) {
    size_t n = 1;
    for (int d : groups[i].shape) n *= static_cast<size_t>(d);
    f << "    {\"name\": \"" << groups[i].name << "\", \"shape\": [";
    for (size_t d = 0; d < groups[i].shape.size(); ++d)
      f << (d ? "," : "") << groups[i].shape[d];
    f << "], \"values\": [";
    append_values(f, ck.params.data() + pos, n);
    pos += n;
    f << "]}" << (i + 1 < groups.size() ? "," : "") << "\n";
  }
  f << "  ]\n}\n";
  f.flush();
  if (!f) throw ConfigError("cannot write " + path);
}

namespace {

Checkpoint checkpoint_from_json(const json& j) {
  Checkpoint ck;
  const std::string name = j.at("kind").get<std::string>();
  try {
    ck.kind = kind_from_name(name);
  } catch (const ConfigError&) {
    throw CompatError("unknown model kind in checkpoint: " + name);
  }
  ck.processors = j.at("processors").get<int>();
  ck.scaler = scaler_from_json(j.at("scaler"));

  const std::vector<GroupSpec> want = parameter_groups(ck.kind, ck.processors);
  const json& groups = j.at("groups");
  if (!groups.is_array() || groups.size() != want.size())
    throw CompatError("checkpoint holds " + std::to_string(groups.size()) + " groups, expected " +
                      std::to_string(want.size()));
  for (size_t i = 0; i < want.size(); ++i) {
    const json& g = groups.at(i);
    if (g.value("name", "") != want[i].name)
      throw CompatError("group " + std::to_string(i) + " is named '" + g.value("name", "") +
                        "', expected '" + want[i].name + "'");
    std::vector<int> shape = g.at("shape").get<std::vector<int>>();
    if (shape != want[i].shape) throw CompatError("group " + want[i].name + " has the wrong shape");
    size_t n = 1;
    for (int d : shape) n *= static_cast<size_t>(d);
    const json& values = g.at("values");
    if (!values.is_array() || values.size() != n)
      throw CompatError("group " + want[i].name + " holds the wrong number of values");
    for (const json& v : values) ck.params.push_back(v.get<double>());
  }
  return ck;
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) {
  json j = parse_json(read_file(path), "checkpoint");
  if (!j.is_object() || j.value("format", "") != kCheckpointFormat)
    throw CompatError("unrecognised checkpoint format");
  try {
    return checkpoint_from_json(j);
  } catch (const json::exception& e) {
    throw CompatError(std::string("checkpoint is malformed: ") + e.what());
  }
}

void save_dataset(const std::string& path, const graphs::Dataset& data, const std::string& split) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "{\"format\":\"" << kDatasetFormat << "\",\"split\":\"" << split
    << "\",\"dt\":" << fmt(data.dt) << ",\"radius\":" << fmt(data.radius)
    << ",\"count\":" << data.samples.size() << ",\"scaler\":" << scaler_json(data.scaler)
    << "}\n";
  for (const graphs::GraphSample& s : data.samples) {
    f << "{\"t\":" << s.t << ",\"ne\":" << s.n_edges << ",\"n\":[";
    append_values(f, s.N.data.data(), s.N.data.size());
    f << "],\"recv\":[";
    for (int e = 0; e < s.n_edges; ++e) f << (e ? "," : "") << onehot_row(s.Er, e);
    f << "],\"send\":[";
    for (int e = 0; e < s.n_edges; ++e) f << (e ? "," : "") << onehot_row(s.Es, e);
    f << "],\"ea\":[";
    append_values(f, s.Ea_raw.data.data(), s.Ea_raw.data.size());
    f << "],\"target\":[";
    append_values(f, s.target.data.data(), s.target.data.size());
    f << "],\"pos\":[";
    append_particles(f, s.anchor.positions);
    f << "],\"vel\":[";
    append_particles(f, s.anchor.velocities);
    f << "],\"next_pos\":[";
    append_particles(f, s.anchor.next_positions);
    f << "]}\n";
  }
  f.flush();
  if (!f) throw ConfigError("cannot write " + path);
}

namespace {

graphs::GraphSample sample_from_json(const json& r) {
  graphs::GraphSample s;
  s.t = r.at("t").get<int>();
  s.n_edges = r.at("ne").get<int>();
  if (s.n_edges < 3 || s.n_edges > 6) throw CompatError("edge count out of range");

  s.N = Mat(8, 3);
  s.N.data = numbers_at(r, "n", 24);
  s.Er = Mat(3, s.n_edges);
  s.Es = Mat(3, s.n_edges);
  const json& recv = r.at("recv");
  const json& send = r.at("send");
  if (recv.size() != static_cast<size_t>(s.n_edges) ||
      send.size() != static_cast<size_t>(s.n_edges))
    throw CompatError("edge index arrays disagree with the edge count");
  for (int e = 0; e < s.n_edges; ++e) {
    const int rr = recv.at(e).get<int>();
    const int ss = send.at(e).get<int>();
    if (rr < 0 || rr > 2 || ss < 0 || ss > 2) throw CompatError("edge index out of range");
    s.Er(rr, e) = 1.0;
    s.Es(ss, e) = 1.0;
  }
  s.Ea_raw = Mat(3, s.n_edges);
  s.Ea_raw.data = numbers_at(r, "ea", 3 * static_cast<size_t>(s.n_edges));
  s.Ea_padded = Mat(4, s.n_edges);
  for (int row = 0; row < 3; ++row)
    for (int e = 0; e < s.n_edges; ++e) s.Ea_padded(row, e) = s.Ea_raw(row, e);
  s.target = Mat(2, 3);
  s.target.data = numbers_at(r, "target", 6);
  s.anchor.positions = particles_at(r, "pos");
  s.anchor.velocities = particles_at(r, "vel");
  s.anchor.next_positions = particles_at(r, "next_pos");
  s.validate();
  return s;
}

}  // namespace

graphs::Dataset load_dataset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  std::string line;
  if (!std::getline(f, line)) throw CompatError("dataset file is empty");
  json h = parse_json(line, "dataset header");
  if (!h.is_object() || h.value("format", "") != kDatasetFormat)
    throw CompatError("unrecognised dataset format");

  try {
    graphs::Dataset ds;
    ds.dt = h.at("dt").get<double>();
    ds.radius = h.at("radius").get<double>();
    ds.scaler = scaler_from_json(h.at("scaler"));
    const size_t count = h.at("count").get<size_t>();

    while (std::getline(f, line)) {
      if (line.empty()) continue;
      ds.samples.push_back(sample_from_json(parse_json(line, "dataset record")));
    }
    if (ds.samples.size() != count)
      throw CompatError("dataset holds " + std::to_string(ds.samples.size()) +
                        " samples, header says " + std::to_string(count));
    return ds;
  } catch (const json::exception& e) {
    throw CompatError(std::string("dataset is malformed: ") + e.what());
  }
}

void save_scaler(const std::string& path, const graphs::TargetScaler& scaler) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "{\"format\":\"" << kScalerFormat << "\",\"scaler\":" << scaler_json(scaler) << "}\n";
  f.flush();
  if (!f) throw ConfigError("cannot write " + path);
}

void write_metrics_csv(const std::string& path, const std::vector<train::MetricsRecord>& rows) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "batch,loss,position_mse,avg_percent_error\n";
  for (const train::MetricsRecord& r : rows)
    f << r.batch_index << ',' << fmt(r.batch_loss) << ',' << fmt(r.position_mse) << ','
      << fmt(r.running_avg_percent_error) << '\n';
  f.flush();
  if (!f) throw ConfigError("cannot write " + path);
}

void write_rollout_csv(const std::string& path, const std::vector<RolloutRow>& rows) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "t,particle,pred_x,pred_y,true_x,true_y\n";
  for (const RolloutRow& r : rows)
    f << r.t << ',' << r.particle << ',' << fmt(r.pred_x) << ',' << fmt(r.pred_y) << ','
      << fmt(r.true_x) << ',' << fmt(r.true_y) << '\n';
  f.flush();
  if (!f) throw ConfigError("cannot write " + path);
}

int cmd_gen_data(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  cfg.sim.validate();
  if (cfg.sim_steps < 4) throw ConfigError("sim.steps must be at least 4");
  if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0))
    throw ConfigError("graph.validation_fraction must lie in (0,1)");

  physics::Trajectory traj = physics::generate_random_trajectory(cfg.sim, cfg.sim_steps, cfg.seed);
  graphs::Dataset ds = graphs::make_dataset(traj, cfg.graph_radius, nullptr,
                                            cfg.validation_fraction);
  auto [train_s, valid_s] = graphs::split_dataset(ds.samples, cfg.validation_fraction, cfg.seed);

  ensure_dir(out_dir);
  graphs::Dataset part;
  part.scaler = ds.scaler;
  part.dt = ds.dt;
  part.radius = ds.radius;
  part.samples = std::move(train_s);
  save_dataset(out_dir + "/train.jsonl", part, "train");
  const size_t train_n = part.samples.size();
  part.samples = std::move(valid_s);
  save_dataset(out_dir + "/valid.jsonl", part, "validation");
  save_scaler(out_dir + "/scaler.json", ds.scaler);

  int hist[7] = {0, 0, 0, 0, 0, 0, 0};
  for (const graphs::GraphSample& s : ds.samples) ++hist[s.n_edges];
  log << "steps " << traj.steps() << ", samples " << ds.samples.size() << " (train " << train_n
      << ", validation " << part.samples.size() << ")\n";
  log << "edge counts:";
  for (int k = 3; k <= 6; ++k) log << ' ' << k << "->" << hist[k];
  log << "\nwrote " << out_dir << "/{train.jsonl,valid.jsonl,scaler.json}\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& dataset_path, const std::string& out_dir,
              std::ostream& log) {
  graphs::Dataset ds = load_dataset(dataset_path);
  train::TrainConfig tc = cfg.train_config();
  const size_t n_params = train::init_params(tc.kind, tc.processors, tc.seed).size();
  log << "model " << kind_name(tc.kind) << ", processors " << tc.processors << ", parameters "
      << n_params << "\n";
  log << "training on " << ds.samples.size() << " samples\n";

  train::TrainResult res = train::train_model(ds, tc);
  ensure_dir(out_dir);
  write_metrics_csv(out_dir + "/metrics.csv", res.metrics);
  if (res.aborted) throw NumericError(res.diagnostic);

  Checkpoint ck;
  ck.kind = tc.kind;
  ck.processors = tc.processors;
  ck.params = res.params;
  ck.scaler = ds.scaler;
  save_checkpoint(out_dir + "/checkpoint.json", ck);
  if (!res.metrics.empty()) log << "final batch loss " << fmt(res.metrics.back().batch_loss) << "\n";
  log << "wrote " << out_dir << "/{checkpoint.json,metrics.csv}\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& dataset_path,
             const std::string& out_dir, std::ostream& log) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  graphs::Dataset ds = load_dataset(dataset_path);
  if (ck.scaler.mean != ds.scaler.mean || ck.scaler.scale != ds.scaler.scale ||
      ck.scaler.degenerate != ds.scaler.degenerate)
    throw CompatError("checkpoint scaler disagrees with the dataset scaler");

  train::TrainConfig tc;
  tc.kind = ck.kind;
  tc.processors = ck.processors;
  tc.grad_mode = ck.kind == train::ModelKind::Cgnn ? train::GradMode::Analytic
                                                   : train::GradMode::CentralFd;
  std::vector<train::MetricsRecord> records = train::validate_model(ds, tc, ck.params);

  ensure_dir(out_dir);
  write_metrics_csv(out_dir + "/metrics.csv", records);

  std::vector<RolloutRow> rows;
  rows.reserve(ds.samples.size() * 3);
  for (const graphs::GraphSample& s : ds.samples) {
    Mat pred = train::model_forward(ck.kind, ck.params, ck.processors, s);
    physics::Particles next = train::predict_positions(s, pred, ds.scaler, ds.dt);
    for (int j = 0; j < 3; ++j)
      rows.push_back({s.t, j, next[j][0], next[j][1], s.anchor.next_positions[j][0],
                      s.anchor.next_positions[j][1]});
  }
  write_rollout_csv(out_dir + "/rollout.csv", rows);

  log << "validated " << ds.samples.size() << " samples";
  if (!records.empty())
    log << ", avg percent error " << fmt(records.back().running_avg_percent_error);
  log << "\nwrote " << out_dir << "/{metrics.csv,rollout.csv}\n";
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"three-particle graph network simulator and trainer"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dataset_path, checkpoint_path;
  uint64_t seed = 0;

  CLI::App* gen = app.add_subcommand("gen-data", "simulate a trajectory and write dataset files");
  gen->add_option("--config", config_path, "json settings file");
  gen->add_option("--out", out_dir, "output directory");
  CLI::Option* gen_seed = gen->add_option("--seed", seed, "override the settings seed");

  CLI::App* tr = app.add_subcommand("train", "fit a model and write a checkpoint");
  tr->add_option("--config", config_path, "json settings file")->required();
  tr->add_option("--dataset", dataset_path, "dataset file to train on");
  tr->add_option("--out", out_dir, "output directory");
  CLI::Option* tr_seed = tr->add_option("--seed", seed, "override the settings seed");

  CLI::App* ev = app.add_subcommand("eval", "validate a checkpoint and export rollouts");
  ev->add_option("--config", config_path, "json settings file");
  ev->add_option("--checkpoint", checkpoint_path, "checkpoint file");
  ev->add_option("--dataset", dataset_path, "dataset file to evaluate on");
  ev->add_option("--out", out_dir, "output directory");
  CLI::Option* ev_seed = ev->add_option("--seed", seed, "ignored; kept for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    if (gen_seed->count() || tr_seed->count() || ev_seed->count()) cfg.seed = seed;
    if (out_dir.empty()) out_dir = cfg.io_out;
    if (dataset_path.empty()) dataset_path = cfg.io_dataset;
    if (checkpoint_path.empty()) checkpoint_path = cfg.io_checkpoint;
    if (out_dir.empty()) throw ConfigError("no output directory given (--out or io.out)");

    if (gen->parsed()) return cmd_gen_data(cfg, out_dir, out);
    if (tr->parsed()) {
      if (dataset_path.empty()) throw ConfigError("no dataset given (--dataset or io.dataset)");
      return cmd_train(cfg, dataset_path, out_dir, out);
    }
    if (dataset_path.empty()) throw ConfigError("no dataset given (--dataset or io.dataset)");
    if (checkpoint_path.empty())
      throw ConfigError("no checkpoint given (--checkpoint or io.checkpoint)");
    return cmd_eval(checkpoint_path, dataset_path, out_dir, out);
  } catch (const ConfigError& e) {
    err << "settings error: " << e.what() << "\n";
    return 2;
  } catch (const CompatError& e) {
    err << "compatibility error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const ShapeError& e) {
    err << "compatibility error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "settings error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "settings error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qgnn::cli
