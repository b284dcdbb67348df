#include "qgnn/iqgnn.hpp"

#include <random>

namespace qgnn::iqgnn {

IqgnnParams IqgnnParams::init(int processors, uint64_t seed) {
  if (processors < 1 || processors > 2) throw ArgumentError("processor count must be 1 or 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  IqgnnParams p;
  for (double& v : p.node_encoder.angles) v = u(rng);
  for (double& v : p.edge_encoder.angles) v = u(rng);
  for (int i = 0; i < processors; ++i) {
    IqgnnCopy copy;
    for (double& v : copy.edge_processor.angles) v = u(rng);
    for (double& v : copy.node_processor.angles) v = u(rng);
    for (double& v : copy.transition_decoder.angles) v = u(rng);
    p.copies.push_back(copy);
  }
  for (double& v : p.final_decoder.angles) v = u(rng);
  return p;
}

std::vector<double> IqgnnParams::to_flat() const {
  std::vector<double> out;
  out.reserve(flat_size());
  auto put = [&](const auto& group) {
    out.insert(out.end(), group.angles.begin(), group.angles.end());
  };
  put(node_encoder);
  put(edge_encoder);
  for (const IqgnnCopy& copy : copies) {
    put(copy.edge_processor);
    put(copy.node_processor);
    put(copy.transition_decoder);
  }
  put(final_decoder);
  return out;
}

IqgnnParams IqgnnParams::from_flat(const std::vector<double>& flat, int processors) {
  if (processors < 1 || processors > 2) throw ArgumentError("processor count must be 1 or 2");
  IqgnnParams p;
  p.copies.resize(processors);
  if (flat.size() != p.flat_size()) throw ShapeError("flat parameter size disagrees");
  size_t pos = 0;
  auto take = [&](auto& group) {
    for (double& v : group.angles) v = flat[pos++];
  };
  take(p.node_encoder);
  take(p.edge_encoder);
  for (IqgnnCopy& copy : p.copies) {
    take(copy.edge_processor);
    take(copy.node_processor);
    take(copy.transition_decoder);
  }
  take(p.final_decoder);
  return p;
}

ColumnInputs build_column_inputs(const graphs::GraphSample& sample, int j) {
  if (j < 0 || j > 2) throw IndexError("node index out of range");
  ColumnInputs ci;
  ci.n_col = sample.N.col(j);
  ci.er_col.assign(6, 0.0);
  ci.es_col.assign(6, 0.0);
  ci.ea_col.assign(6, 0.0);
  for (int k = 0; k < sample.n_edges; ++k) {
    ci.er_col[k] = sample.Er(j, k);
    ci.es_col[k] = sample.Es(j, k);
    ci.ea_col[k] = sample.Ea_raw(j, k);
  }
  ci.edge_embed = ci.ea_col;
  ci.edge_embed.resize(8, 0.0);
  return ci;
}

std::array<double, 2> run_circuit(const ColumnInputs& inputs, const IqgnnParams& params,
                                  qsim::Statevector* final_state) {
  if (inputs.n_col.size() != 8 || inputs.er_col.size() != 6 || inputs.es_col.size() != 6 ||
      inputs.ea_col.size() != 6 || inputs.edge_embed.size() != 8)
    throw ShapeError("column input sizes");
  if (params.processors() < 1 || params.processors() > 2)
    throw ArgumentError("processor count must be 1 or 2");

  qsim::Statevector node_sv = qsim::embed_amplitudes(inputs.n_col, 4, 0);
  double e2 = 0.0;
  for (double v : inputs.edge_embed) e2 += v * v;
  qsim::Statevector edge_sv =
      e2 == 0.0 ? qsim::Statevector::zero(4) : qsim::embed_amplitudes(inputs.edge_embed, 4, 0);
  qsim::Statevector sv = qsim::tensor_product(node_sv, edge_sv);

  sv = pqc::apply_encoder(std::move(sv), params.node_encoder, 0);
  sv = pqc::apply_encoder(std::move(sv), params.edge_encoder, 4);

  for (const IqgnnCopy& copy : params.copies) {
    sv = pqc::apply_cascade(std::move(sv), pqc::rx_cascade_node(inputs.n_col), 4);
    sv = pqc::apply_cascade(std::move(sv), pqc::rx_cascade_edge(inputs.er_col), 4);
    sv = pqc::apply_cascade(std::move(sv), pqc::rx_cascade_edge(inputs.es_col), 4);
    sv = pqc::apply_cascade(std::move(sv), pqc::rx_cascade_edge(inputs.ea_col), 4);
    sv = pqc::apply_processor(std::move(sv), copy.edge_processor, 4);
    sv = pqc::apply_decoder(std::move(sv), copy.transition_decoder,
                            {{4, 0}, {5, 1}, {6, 2}, {7, 3}});
    sv = pqc::apply_cascade(std::move(sv), pqc::rx_cascade_edge(inputs.er_col), 0);
    sv = pqc::apply_processor(std::move(sv), copy.node_processor, 0);
  }

  sv = pqc::apply_decoder(std::move(sv), params.final_decoder, {{0, 2}, {1, 3}});
  std::array<double, 2> out = {qsim::expectation_z(sv, 2), qsim::expectation_z(sv, 3)};
  if (final_state) *final_state = std::move(sv);
  return out;
}

Mat iqgnn_forward(const graphs::GraphSample& sample, const IqgnnParams& params) {
  sample.validate();
  Mat pred(2, 3);
  for (int j = 0; j < 3; ++j) {
    const std::array<double, 2> xy = run_circuit(build_column_inputs(sample, j), params);
    pred(0, j) = xy[0];
    pred(1, j) = xy[1];
  }
  return pred;
}

}  // namespace qgnn::iqgnn
