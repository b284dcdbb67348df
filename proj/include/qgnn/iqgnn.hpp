#pragma once

#include <array>
#include <vector>

#include "qgnn/graphs.hpp"
#include "qgnn/pqc_blocks.hpp"

namespace qgnn::iqgnn {

/// One repeatable processor span: data injection and edge processing on the
/// edge section, pooling across to the node section, node processing there.
struct IqgnnCopy {
  pqc::ProcessorParams edge_processor;
  pqc::ProcessorParams node_processor;
  pqc::PoolingParams transition_decoder;
};

struct IqgnnParams {
  pqc::EncoderConvParams node_encoder;
  pqc::EncoderConvParams edge_encoder;
  std::vector<IqgnnCopy> copies;
  pqc::PoolingParams final_decoder;

  static IqgnnParams init(int processors, uint64_t seed);
  int processors() const { return static_cast<int>(copies.size()); }
  size_t flat_size() const { return 36 + copies.size() * 22; }
  std::vector<double> to_flat() const;
  static IqgnnParams from_flat(const std::vector<double>& flat, int processors);
};

/// Everything one circuit run reads for node j: its feature column plus its
/// rows of the connection and edge-feature matrices, zero-padded to the
/// fixed six-edge capacity.
struct ColumnInputs {
  std::vector<double> n_col;       // 8
  std::vector<double> er_col;      // 6
  std::vector<double> es_col;      // 6
  std::vector<double> ea_col;      // 6
  std::vector<double> edge_embed;  // ea_col padded to 8 for amplitude loading
};

ColumnInputs build_column_inputs(const graphs::GraphSample& sample, int j);

/// One 8-qubit run. Qubits 0-3 hold the node section, 4-7 the edge section.
/// An all-zero edge vector loads nothing: the edge section starts idle.
/// Returns (⟨Z⟩ qubit 2, ⟨Z⟩ qubit 3).
std::array<double, 2> run_circuit(const ColumnInputs& inputs, const IqgnnParams& params,
                                  qsim::Statevector* final_state = nullptr);

Mat iqgnn_forward(const graphs::GraphSample& sample, const IqgnnParams& params);

}  // namespace qgnn::iqgnn
