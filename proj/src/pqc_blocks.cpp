#include "qgnn/pqc_blocks.hpp"

#include <string>

namespace qgnn::pqc {

namespace {

template <class P, size_t N>
P params_from(const std::vector<double>& v, const char* what) {
  P p;
  if (v.size() != N) throw ShapeError(std::string(what) + ": wrong parameter count");
  for (size_t i = 0; i < N; ++i) p.angles[i] = v[i];
  return p;
}

void check_section(int n_qubits, int section_offset) {
  if (section_offset < 0 || section_offset + 4 > n_qubits)
    throw IndexError("section does not fit the register");
}

}  // namespace

EncoderConvParams EncoderConvParams::from_vector(const std::vector<double>& v) {
  return params_from<EncoderConvParams, 15>(v, "encoder");
}

ProcessorParams ProcessorParams::from_vector(const std::vector<double>& v) {
  return params_from<ProcessorParams, 8>(v, "processor");
}

PoolingParams PoolingParams::from_vector(const std::vector<double>& v) {
  return params_from<PoolingParams, 6>(v, "pooling");
}

qsim::CircuitProgram encoder_conv_program(int n_qubits, int a, int b, bool entangle) {
  if (a == b) throw ArgumentError("encoder pair must use two distinct qubits");
  qsim::CircuitProgram p(n_qubits, 15);
  auto triplet = [&](int q, int base) {
    p.rz(q, base);
    p.ry(q, base + 1);
    p.rx(q, base + 2);
  };
  triplet(a, 0);
  triplet(b, 3);
  triplet(a, 6);  // shared angles, applied to both qubits
  triplet(b, 6);
  if (entangle) p.cnot(a, b);
  triplet(a, 9);
  triplet(b, 12);
  return p;
}

qsim::CircuitProgram encoder_section_program(int n_qubits, int section_offset, bool entangle) {
  check_section(n_qubits, section_offset);
  qsim::CircuitProgram p(n_qubits, 15);
  const int s = section_offset;
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 3}, {3, 0}})
    p.append(encoder_conv_program(n_qubits, s + a, s + b, entangle));
  return p;
}

qsim::Statevector apply_encoder(qsim::Statevector state, const EncoderConvParams& params,
                                int section_offset, bool entangle) {
  const auto prog = encoder_section_program(state.n_qubits, section_offset, entangle);
  return qsim::run_program(prog, params.to_vector(), std::move(state));
}

qsim::CircuitProgram processor_program(int n_qubits, int section_offset) {
  check_section(n_qubits, section_offset);
  qsim::CircuitProgram p(n_qubits, 8);
  const int s = section_offset;
  for (int q = 0; q < 4; ++q) p.ry(s + q, q);
  for (int q = 0; q < 4; ++q) p.cnot(s + q, s + (q + 1) % 4);
  for (int q = 0; q < 4; ++q) p.ry(s + q, 4 + q);
  for (int q = 3; q >= 1; --q) p.cnot(s + q, s + q - 1);
  p.cnot(s + 0, s + 3);
  return p;
}

qsim::Statevector apply_processor(qsim::Statevector state, const ProcessorParams& params,
                                  int section_offset) {
  const auto prog = processor_program(state.n_qubits, section_offset);
  return qsim::run_program(prog, params.to_vector(), std::move(state));
}

qsim::CircuitProgram pooling_program(int n_qubits, int top, int bottom) {
  if (top == bottom) throw ArgumentError("pooling pair must use two distinct qubits");
  qsim::CircuitProgram p(n_qubits, 6);
  p.rz(top, 0);
  p.ry(top, 1);
  p.rx(top, 2);
  p.rz(bottom, 3);
  p.ry(bottom, 4);
  p.rx(bottom, 5);
  p.cnot(top, bottom);
  return p;
}

qsim::Statevector apply_decoder(qsim::Statevector state, const PoolingParams& params,
                                const std::vector<std::pair<int, int>>& pairs) {
  std::vector<bool> used(state.n_qubits, false);
  for (const auto& [top, bottom] : pairs) {
    if (top < 0 || top >= state.n_qubits || bottom < 0 || bottom >= state.n_qubits)
      throw IndexError("pooling qubit out of range");
    if (used[top] || used[bottom] || top == bottom)
      throw ArgumentError("pooling pairs overlap");
    used[top] = used[bottom] = true;
  }
  const std::vector<double> angles = params.to_vector();
  for (const auto& [top, bottom] : pairs) {
    const auto prog = pooling_program(state.n_qubits, top, bottom);
    state = qsim::run_program(prog, angles, std::move(state));
  }
  return state;
}

RxCascade rx_cascade_edge(const std::vector<double>& values) {
  if (values.size() != 6) throw ShapeError("edge cascade needs 6 values");
  RxCascade c;
  c.arity = 6;
  c.values = values;
  for (int i = 0; i < 6; ++i) c.placements.push_back({i % 4, i});
  return c;
}

RxCascade rx_cascade_node(const std::vector<double>& values) {
  if (values.size() != 8) throw ShapeError("node cascade needs 8 values");
  RxCascade c;
  c.arity = 8;
  c.values = values;
  for (int i = 0; i < 8; ++i) c.placements.push_back({i % 4, i});
  return c;
}

qsim::CircuitProgram cascade_program(const RxCascade& cascade, int n_qubits, int section_offset) {
  check_section(n_qubits, section_offset);
  qsim::CircuitProgram p(n_qubits, 0);
  for (const RxPlacement& pl : cascade.placements)
    p.rx_fixed(section_offset + pl.qubit, cascade.values[pl.value_index]);
  return p;
}

qsim::Statevector apply_cascade(qsim::Statevector state, const RxCascade& cascade,
                                int section_offset) {
  const auto prog = cascade_program(cascade, state.n_qubits, section_offset);
  return qsim::run_program(prog, {}, std::move(state));
}

}  // namespace qgnn::pqc
