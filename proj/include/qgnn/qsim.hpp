#pragma once

#include <vector>

#include "qgnn/core.hpp"

namespace qgnn::qsim {

enum class GateKind { RX, RY, RZ, CNOT };

/// One gate. Rotations act on q0; CNOT uses q0 as control and q1 as target.
/// A rotation angle comes from a parameter slot (param >= 0) or from the
/// literal `angle` field.
struct GateInstruction {
  GateKind kind = GateKind::RX;
  int q0 = -1;
  int q1 = -1;
  int param = -1;
  double angle = 0.0;
};

/// Gate list over a fixed register, referencing an external parameter
/// vector of size n_params. Append helpers validate as they go.
struct CircuitProgram {
  int n_qubits = 0;
  int n_params = 0;
  std::vector<GateInstruction> instructions;

  CircuitProgram() = default;
  CircuitProgram(int nq, int np);

  void rx(int q, int param_index) { rotation(GateKind::RX, q, param_index); }
  void ry(int q, int param_index) { rotation(GateKind::RY, q, param_index); }
  void rz(int q, int param_index) { rotation(GateKind::RZ, q, param_index); }
  void rx_fixed(int q, double angle) { rotation_fixed(GateKind::RX, q, angle); }
  void ry_fixed(int q, double angle) { rotation_fixed(GateKind::RY, q, angle); }
  void rz_fixed(int q, double angle) { rotation_fixed(GateKind::RZ, q, angle); }
  void cnot(int control, int target);
  void append(const CircuitProgram& other);

 private:
  void rotation(GateKind kind, int q, int param_index);
  void rotation_fixed(GateKind kind, int q, double angle);
  void check_qubit(int q) const;
};

/// Dense amplitude vector over n qubits. Qubit 0 is the most significant
/// bit of the basis index, so amplitudes read top-to-bottom like a circuit
/// diagram: index b0 b1 ... b_{n-1} in binary.
struct Statevector {
  int n_qubits = 0;
  std::vector<cd> amps;

  static Statevector zero(int n_qubits);
  int dim() const { return 1 << n_qubits; }
  double norm() const;
};

/// Loads data / ||data|| onto qubits [offset, offset + k) where 2^k is the
/// data length; every other qubit stays in |0>. Rejects zero-norm data.
Statevector embed_amplitudes(const std::vector<cd>& data, int n_qubits, int offset_qubits = 0);
Statevector embed_amplitudes(const std::vector<double>& data, int n_qubits, int offset_qubits = 0);

Statevector apply_gate(Statevector state, const GateInstruction& gate, double angle = 0.0);
Statevector run_program(const CircuitProgram& program, const std::vector<double>& params,
                        Statevector initial);
double expectation_z(const Statevector& state, int qubit);
std::vector<cd> read_amplitudes(const Statevector& state);

/// Full matrix of the program: column j is the program applied to basis
/// state j. Brute force, meant for tests and small registers.
CMat unitary_of(const CircuitProgram& program, const std::vector<double>& params);

/// Combined register with `upper` on the most significant qubits.
Statevector tensor_product(const Statevector& upper, const Statevector& lower);

namespace detail {
void apply_gate_inplace(Statevector& state, const GateInstruction& gate, double angle);
}

}  // namespace qgnn::qsim
