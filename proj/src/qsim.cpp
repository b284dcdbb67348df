#include "qgnn/qsim.hpp"

#include <cmath>
#include <utility>

namespace qgnn::qsim {

namespace {
constexpr int kMaxQubits = 16;
}

CircuitProgram::CircuitProgram(int nq, int np) : n_qubits(nq), n_params(np) {
  if (nq < 0 || nq > kMaxQubits) throw ArgumentError("qubit count out of range");
  if (np < 0) throw ArgumentError("negative parameter count");
}

void CircuitProgram::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits) throw IndexError("qubit index out of range");
}

void CircuitProgram::rotation(GateKind kind, int q, int param_index) {
  check_qubit(q);
  if (param_index < 0 || param_index >= n_params)
    throw ArgumentError("parameter index out of range");
  instructions.push_back({kind, q, -1, param_index, 0.0});
}

void CircuitProgram::rotation_fixed(GateKind kind, int q, double angle) {
  check_qubit(q);
  instructions.push_back({kind, q, -1, -1, angle});
}

void CircuitProgram::cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw ArgumentError("CNOT control equals target");
  instructions.push_back({GateKind::CNOT, control, target, -1, 0.0});
}

void CircuitProgram::append(const CircuitProgram& other) {
  if (other.n_qubits != n_qubits || other.n_params != n_params)
    throw ShapeError("append: program shapes disagree");
  instructions.insert(instructions.end(), other.instructions.begin(), other.instructions.end());
}

Statevector Statevector::zero(int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw ArgumentError("qubit count out of range");
  Statevector sv;
  sv.n_qubits = n_qubits;
  sv.amps.assign(size_t{1} << n_qubits, cd{0.0, 0.0});
  sv.amps[0] = cd{1.0, 0.0};
  return sv;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const cd& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

namespace detail {

void apply_gate_inplace(Statevector& sv, const GateInstruction& g, double angle) {
  const int n = sv.n_qubits;
  auto check = [&](int q) {
    if (q < 0 || q >= n) throw IndexError("qubit index out of range");
  };
  if (g.kind == GateKind::CNOT) {
    check(g.q0);
    check(g.q1);
    if (g.q0 == g.q1) throw ArgumentError("CNOT control equals target");
    const size_t cmask = size_t{1} << (n - 1 - g.q0);
    const size_t tmask = size_t{1} << (n - 1 - g.q1);
    for (size_t i = 0; i < sv.amps.size(); ++i)
      if ((i & cmask) && !(i & tmask)) std::swap(sv.amps[i], sv.amps[i | tmask]);
    return;
  }
  check(g.q0);
  const size_t mask = size_t{1} << (n - 1 - g.q0);
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  cd m00, m01, m10, m11;
  switch (g.kind) {
    case GateKind::RX:
      m00 = cd{c, 0};
      m01 = cd{0, -s};
      m10 = cd{0, -s};
      m11 = cd{c, 0};
      break;
    case GateKind::RY:
      m00 = cd{c, 0};
      m01 = cd{-s, 0};
      m10 = cd{s, 0};
      m11 = cd{c, 0};
      break;
    default:  // RZ = diag(e^{-i a/2}, e^{+i a/2})
      m00 = cd{c, -s};
      m01 = cd{0, 0};
      m10 = cd{0, 0};
      m11 = cd{c, s};
      break;
  }
  for (size_t i = 0; i < sv.amps.size(); ++i) {
    if (i & mask) continue;
    const size_t j = i | mask;
    const cd a = sv.amps[i];
    const cd b = sv.amps[j];
    sv.amps[i] = m00 * a + m01 * b;
    sv.amps[j] = m10 * a + m11 * b;
  }
}

}  // namespace detail

Statevector embed_amplitudes(const std::vector<cd>& data, int n_qubits, int offset_qubits) {
  const size_t len = data.size();
  if (len == 0 || (len & (len - 1)) != 0)
    throw ShapeError("embed: data length must be a power of two");
  int k = 0;
  while ((size_t{1} << k) < len) ++k;
  if (offset_qubits < 0 || k + offset_qubits > n_qubits)
    throw ShapeError("embed: data does not fit the register");
  double sq = 0.0;
  for (const cd& z : data) sq += std::norm(z);
  if (!std::isfinite(sq)) throw NumericError("embed: non-finite data");
  if (sq <= 0.0) throw EmbeddingError("embed: zero-norm data");
  const double inv = 1.0 / std::sqrt(sq);

  Statevector sv = Statevector::zero(n_qubits);
  sv.amps[0] = cd{0.0, 0.0};
  const int low = n_qubits - offset_qubits - k;
  for (size_t j = 0; j < len; ++j) sv.amps[j << low] = data[j] * inv;
  return sv;
}

Statevector embed_amplitudes(const std::vector<double>& data, int n_qubits, int offset_qubits) {
  std::vector<cd> z(data.size());
  for (size_t i = 0; i < data.size(); ++i) z[i] = cd{data[i], 0.0};
  return embed_amplitudes(z, n_qubits, offset_qubits);
}

Statevector apply_gate(Statevector state, const GateInstruction& gate, double angle) {
  detail::apply_gate_inplace(state, gate, angle);
  return state;
}

Statevector run_program(const CircuitProgram& program, const std::vector<double>& params,
                        Statevector initial) {
  if (static_cast<int>(params.size()) != program.n_params)
    throw ShapeError("run_program: parameter vector size disagrees with program");
  if (initial.n_qubits != program.n_qubits)
    throw ShapeError("run_program: register size disagrees with program");
  for (const GateInstruction& g : program.instructions) {
    const double angle = g.param >= 0 ? params[g.param] : g.angle;
    detail::apply_gate_inplace(initial, g, angle);
  }
  return initial;
}

double expectation_z(const Statevector& state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits) throw IndexError("qubit index out of range");
  const size_t mask = size_t{1} << (state.n_qubits - 1 - qubit);
  double e = 0.0;
  for (size_t i = 0; i < state.amps.size(); ++i) {
    const double p = std::norm(state.amps[i]);
    e += (i & mask) ? -p : p;
  }
  return e;
}

std::vector<cd> read_amplitudes(const Statevector& state) { return state.amps; }

CMat unitary_of(const CircuitProgram& program, const std::vector<double>& params) {
  const int dim = 1 << program.n_qubits;
  CMat u(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Statevector basis = Statevector::zero(program.n_qubits);
    basis.amps[0] = cd{0.0, 0.0};
    basis.amps[j] = cd{1.0, 0.0};
    Statevector out = run_program(program, params, std::move(basis));
    for (int i = 0; i < dim; ++i) u(i, j) = out.amps[i];
  }
  return u;
}

Statevector tensor_product(const Statevector& upper, const Statevector& lower) {
  Statevector sv;
  sv.n_qubits = upper.n_qubits + lower.n_qubits;
  if (sv.n_qubits > kMaxQubits) throw ArgumentError("qubit count out of range");
  sv.amps.assign(size_t{1} << sv.n_qubits, cd{0.0, 0.0});
  const size_t ld = lower.amps.size();
  for (size_t iu = 0; iu < upper.amps.size(); ++iu)
    for (size_t il = 0; il < ld; ++il) sv.amps[iu * ld + il] = upper.amps[iu] * lower.amps[il];
  return sv;
}

}  // namespace qgnn::qsim
