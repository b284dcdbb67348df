#include "qgnn/sqgnn.hpp"

#include <cmath>
#include <random>

namespace qgnn::sqgnn {

namespace {

constexpr double kZeroNorm = 1e-12;

double column_norm(const std::vector<cd>& v) {
  double n2 = 0.0;
  for (const cd& a : v) n2 += std::norm(a);
  return std::sqrt(n2);
}

std::array<double, 8> draw8(std::mt19937_64& rng, std::uniform_real_distribution<double>& u) {
  std::array<double, 8> a;
  for (double& v : a) v = u(rng);
  return a;
}

}  // namespace

SqgnnParams SqgnnParams::init(int processors, uint64_t seed) {
  if (processors < 1 || processors > 2) throw ArgumentError("processor count must be 1 or 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  SqgnnParams p;
  for (double& v : p.node_encoder.angles) v = u(rng);
  for (double& v : p.edge_encoder.angles) v = u(rng);
  for (int i = 0; i < processors; ++i) {
    SqgnnPass pass;
    pass.phi_e1.angles = draw8(rng, u);
    pass.phi_e2.angles = draw8(rng, u);
    pass.phi_e3.angles = draw8(rng, u);
    pass.phi_n1.angles = draw8(rng, u);
    pass.phi_n2.angles = draw8(rng, u);
    p.passes.push_back(pass);
  }
  for (double& v : p.decoder.angles) v = u(rng);
  return p;
}

std::vector<double> SqgnnParams::to_flat() const {
  std::vector<double> out;
  out.reserve(flat_size());
  auto put = [&](const auto& group) {
    out.insert(out.end(), group.angles.begin(), group.angles.end());
  };
  put(node_encoder);
  put(edge_encoder);
  for (const SqgnnPass& pass : passes) {
    put(pass.phi_e1);
    put(pass.phi_e2);
    put(pass.phi_e3);
    put(pass.phi_n1);
    put(pass.phi_n2);
  }
  put(decoder);
  return out;
}

SqgnnParams SqgnnParams::from_flat(const std::vector<double>& flat, int processors) {
  if (processors < 1 || processors > 2) throw ArgumentError("processor count must be 1 or 2");
  SqgnnParams p;
  p.passes.resize(processors);
  if (flat.size() != p.flat_size()) throw ShapeError("flat parameter size disagrees");
  size_t pos = 0;
  auto take = [&](auto& group) {
    for (double& v : group.angles) v = flat[pos++];
  };
  take(p.node_encoder);
  take(p.edge_encoder);
  for (SqgnnPass& pass : p.passes) {
    take(pass.phi_e1);
    take(pass.phi_e2);
    take(pass.phi_e3);
    take(pass.phi_n1);
    take(pass.phi_n2);
  }
  take(p.decoder);
  return p;
}

CMat expand_nodes(const Mat& N, const pqc::EncoderConvParams& enc) {
  if (N.rows != 8) throw ShapeError("node features must have 8 rows");
  CMat out(16, N.cols);
  for (int c = 0; c < N.cols; ++c) {
    qsim::Statevector sv = qsim::embed_amplitudes(N.col(c), 4, 0);
    sv = pqc::apply_encoder(std::move(sv), enc, 0);
    out.set_col(c, qsim::read_amplitudes(sv));
  }
  return out;
}

CMat expand_edges(const Mat& Ea_padded, const pqc::EncoderConvParams& enc) {
  if (Ea_padded.rows != 4) throw ShapeError("padded edge features must have 4 rows");
  CMat out(16, Ea_padded.cols);
  for (int c = 0; c < Ea_padded.cols; ++c) {
    std::vector<double> col = Ea_padded.col(c);
    double n2 = 0.0;
    for (double v : col) n2 += v * v;
    if (n2 == 0.0) col = {0.0, 0.0, 0.0, 1.0};  // self edge: unit mass in the pad slot
    qsim::Statevector sv = qsim::embed_amplitudes(col, 4, 0);
    sv = pqc::apply_encoder(std::move(sv), enc, 0);
    out.set_col(c, qsim::read_amplitudes(sv));
  }
  return out;
}

CMat apply_phi(const CMat& M, const pqc::ProcessorParams& proc) {
  if (M.rows != 16) throw ShapeError("processor expects 16-amplitude columns");
  CMat out(16, M.cols);
  for (int c = 0; c < M.cols; ++c) {
    std::vector<cd> col = M.col(c);
    for (const cd& a : col)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw NumericError("non-finite amplitude entering processor");
    const double nrm = column_norm(col);
    if (nrm < kZeroNorm) {
      out.set_col(c, col);
      continue;
    }
    qsim::Statevector sv = qsim::embed_amplitudes(col, 4, 0);
    sv = pqc::apply_processor(std::move(sv), proc, 0);
    std::vector<cd> amps = qsim::read_amplitudes(sv);
    for (cd& a : amps) a *= nrm;
    out.set_col(c, amps);
  }
  return out;
}

void edge_phase(SqgnnWorkspace& ws, const graphs::GraphSample& sample, const SqgnnPass& pass) {
  ws.A1 = matmul(ws.N_exp, sample.Er);
  ws.A1p = apply_phi(ws.A1, pass.phi_e1);
  ws.A2 = hadamard(ws.A1p, matmul(ws.N_exp, sample.Es));
  ws.A2p = apply_phi(ws.A2, pass.phi_e2);
  ws.A3 = hadamard(ws.A2p, ws.Ea_exp);
  ws.A = apply_phi(ws.A3, pass.phi_e3);
}

void node_phase(SqgnnWorkspace& ws, const graphs::GraphSample& sample, const SqgnnPass& pass) {
  ws.Abar = matmul_bt(ws.A, sample.Er);
  ws.P1p = apply_phi(ws.N_exp, pass.phi_n1);
  ws.P2 = hadamard(hadamard(ws.P1p, ws.Abar), ws.N_exp);
  ws.P = apply_phi(ws.P2, pass.phi_n2);
}

std::array<double, 2> decode_column(const std::vector<cd>& column,
                                    const pqc::PoolingParams& decoder, bool* zero_flag) {
  if (column.size() != 16) throw ShapeError("decoder expects 16 amplitudes");
  if (column_norm(column) == 0.0) {
    if (zero_flag) *zero_flag = true;
    return {1.0, 1.0};
  }
  qsim::Statevector sv = qsim::embed_amplitudes(column, 4, 0);
  sv = pqc::apply_decoder(std::move(sv), decoder, {{0, 2}, {1, 3}});
  return {qsim::expectation_z(sv, 2), qsim::expectation_z(sv, 3)};
}

Mat sqgnn_forward_traced(const graphs::GraphSample& sample, const SqgnnParams& params,
                         SqgnnWorkspace& ws, bool* zero_column_warning) {
  sample.validate();
  if (params.processors() < 1 || params.processors() > 2)
    throw ArgumentError("processor count must be 1 or 2");

  ws.N_exp = expand_nodes(sample.N, params.node_encoder);
  ws.Ea_exp = expand_edges(sample.Ea_padded, params.edge_encoder);
  for (size_t p = 0; p < params.passes.size(); ++p) {
    if (p > 0) {
      ws.N_exp = ws.P;
      ws.Ea_exp = ws.A;
    }
    edge_phase(ws, sample, params.passes[p]);
    node_phase(ws, sample, params.passes[p]);
  }

  bool warn = false;
  Mat pred(2, 3);
  for (int c = 0; c < 3; ++c) {
    const std::array<double, 2> xy = decode_column(ws.P.col(c), params.decoder, &warn);
    pred(0, c) = xy[0];
    pred(1, c) = xy[1];
  }
  if (zero_column_warning) *zero_column_warning = warn;
  return pred;
}

Mat sqgnn_forward(const graphs::GraphSample& sample, const SqgnnParams& params,
                  bool* zero_column_warning) {
  SqgnnWorkspace ws;
  return sqgnn_forward_traced(sample, params, ws, zero_column_warning);
}

}  // namespace qgnn::sqgnn
