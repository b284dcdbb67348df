#pragma once

#include <array>
#include <utility>
#include <vector>

#include "qgnn/qsim.hpp"

namespace qgnn::pqc {

/// Two-qubit encoder block: three rotation triplets per qubit with the
/// middle triplet shared between both qubits, 18 gates over 15 angles.
struct EncoderConvParams {
  std::array<double, 15> angles{};
  static EncoderConvParams from_vector(const std::vector<double>& v);
  std::vector<double> to_vector() const { return {angles.begin(), angles.end()}; }
};

/// Four-qubit message-passing block: two RY layers separated by opposing
/// CNOT cascades, 16 gates over 8 angles.
struct ProcessorParams {
  std::array<double, 8> angles{};
  static ProcessorParams from_vector(const std::vector<double>& v);
  std::vector<double> to_vector() const { return {angles.begin(), angles.end()}; }
};

/// Pooling block on an ordered qubit pair, 7 gates over 6 angles.
struct PoolingParams {
  std::array<double, 6> angles{};
  static PoolingParams from_vector(const std::vector<double>& v);
  std::vector<double> to_vector() const { return {angles.begin(), angles.end()}; }
};

struct RxPlacement {
  int qubit;        // section-relative
  int value_index;  // into the cascade's value list
};

/// Data-injection cascade: RX gates whose angles are feature values, not
/// trainable parameters. Placements wrap around the 4-qubit section.
struct RxCascade {
  int arity = 0;
  std::vector<RxPlacement> placements;
  std::vector<double> values;
};

qsim::CircuitProgram encoder_conv_program(int n_qubits, int a, int b, bool entangle = false);
/// The encoder applied around a 4-qubit section: pairs (0,1), (1,2), (2,3),
/// (3,0) relative to section_offset, same 15 angles for every pair.
qsim::CircuitProgram encoder_section_program(int n_qubits, int section_offset,
                                             bool entangle = false);
qsim::Statevector apply_encoder(qsim::Statevector state, const EncoderConvParams& params,
                                int section_offset, bool entangle = false);

qsim::CircuitProgram processor_program(int n_qubits, int section_offset);
qsim::Statevector apply_processor(qsim::Statevector state, const ProcessorParams& params,
                                  int section_offset);

qsim::CircuitProgram pooling_program(int n_qubits, int top, int bottom);
/// Pooling applied to each pair in order with the same six angles. The
/// pairs must not share qubits within one call.
qsim::Statevector apply_decoder(qsim::Statevector state, const PoolingParams& params,
                                const std::vector<std::pair<int, int>>& pairs);

RxCascade rx_cascade_edge(const std::vector<double>& values);  // 6 values, wraps to qubits 0,1
RxCascade rx_cascade_node(const std::vector<double>& values);  // 8 values, two full sweeps

qsim::CircuitProgram cascade_program(const RxCascade& cascade, int n_qubits, int section_offset);
qsim::Statevector apply_cascade(qsim::Statevector state, const RxCascade& cascade,
                                int section_offset);

}  // namespace qgnn::pqc
