#pragma once

#include <array>
#include <vector>

#include "qgnn/graphs.hpp"
#include "qgnn/pqc_blocks.hpp"

namespace qgnn::sqgnn {

/// One message round: three edge sub-processors applied in series, then two
/// node sub-processors. Each owns its own 8 angles.
struct SqgnnPass {
  pqc::ProcessorParams phi_e1, phi_e2, phi_e3, phi_n1, phi_n2;
};

struct SqgnnParams {
  pqc::EncoderConvParams node_encoder;
  pqc::EncoderConvParams edge_encoder;
  std::vector<SqgnnPass> passes;
  pqc::PoolingParams decoder;

  static SqgnnParams init(int processors, uint64_t seed);
  int processors() const { return static_cast<int>(passes.size()); }
  size_t flat_size() const { return 36 + passes.size() * 40; }
  std::vector<double> to_flat() const;
  static SqgnnParams from_flat(const std::vector<double>& flat, int processors);
};

/// Intermediates of one forward pass, kept around for inspection. After the
/// last round P holds the node states the decoder reads.
struct SqgnnWorkspace {
  CMat N_exp, Ea_exp;
  CMat A1, A1p, A2, A2p, A3, A;
  CMat Abar, P1p, P2, P;
};

/// Lifts the 8 node features per column into a 16-amplitude state: embed on
/// qubits 0-2 of a 4-qubit register and run the encoder over the section.
CMat expand_nodes(const Mat& N, const pqc::EncoderConvParams& enc);

/// Same lift for padded edge features (4 values on qubits 0-1). All-zero
/// columns (self edges) embed the canonical stand-in (0,0,0,1) instead.
CMat expand_edges(const Mat& Ea_padded, const pqc::EncoderConvParams& enc);

/// Runs the processor over each column: normalize, evolve, restore the
/// original norm. Columns with norm below 1e-12 pass through untouched.
CMat apply_phi(const CMat& M, const pqc::ProcessorParams& proc);

void edge_phase(SqgnnWorkspace& ws, const graphs::GraphSample& sample, const SqgnnPass& pass);
void node_phase(SqgnnWorkspace& ws, const graphs::GraphSample& sample, const SqgnnPass& pass);

/// Pools one final node column down to (⟨Z⟩ qubit 2, ⟨Z⟩ qubit 3). An
/// exactly-zero column cannot be embedded; it reads as the idle register,
/// (1, 1), and raises the flag. Tiny norms embed normally: the embedding
/// renormalizes, so only true zero is special.
std::array<double, 2> decode_column(const std::vector<cd>& column,
                                    const pqc::PoolingParams& decoder,
                                    bool* zero_flag = nullptr);

Mat sqgnn_forward(const graphs::GraphSample& sample, const SqgnnParams& params,
                  bool* zero_column_warning = nullptr);
Mat sqgnn_forward_traced(const graphs::GraphSample& sample, const SqgnnParams& params,
                         SqgnnWorkspace& ws, bool* zero_column_warning = nullptr);

}  // namespace qgnn::sqgnn
