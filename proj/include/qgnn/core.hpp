#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qgnn {

using cd = std::complex<double>;

// Error taxonomy shared by all modules. The CLI maps these onto exit codes.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmbeddingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CompatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix. Everything in this project is small enough
/// (at most a few hundred entries) that no blocking or BLAS is warranted.
template <class T>
struct MatT {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  MatT() = default;
  MatT(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}

  T& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  const T& operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  std::vector<T> col(int c) const {
    std::vector<T> out(rows);
    for (int r = 0; r < rows; ++r) out[r] = (*this)(r, c);
    return out;
  }
  void set_col(int c, const std::vector<T>& v) {
    for (int r = 0; r < rows; ++r) (*this)(r, c) = v[r];
  }
};

using Mat = MatT<double>;
using CMat = MatT<cd>;

template <class A, class B>
auto matmul(const MatT<A>& x, const MatT<B>& y) {
  if (x.cols != y.rows) throw ShapeError("matmul: inner dimensions disagree");
  MatT<decltype(A() * B())> out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const A xv = x(i, k);
      for (int j = 0; j < y.cols; ++j) out(i, j) += xv * y(k, j);
    }
  return out;
}

/// x * transpose(y), without materializing the transpose.
template <class A, class B>
auto matmul_bt(const MatT<A>& x, const MatT<B>& y) {
  if (x.cols != y.cols) throw ShapeError("matmul_bt: inner dimensions disagree");
  MatT<decltype(A() * B())> out(x.rows, y.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < y.rows; ++j) {
      decltype(A() * B()) acc{};
      for (int k = 0; k < x.cols; ++k) acc += x(i, k) * y(j, k);
      out(i, j) = acc;
    }
  return out;
}

template <class T>
MatT<T> hadamard(const MatT<T>& x, const MatT<T>& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw ShapeError("hadamard: shapes disagree");
  MatT<T> out(x.rows, x.cols);
  for (size_t i = 0; i < x.data.size(); ++i) out.data[i] = x.data[i] * y.data[i];
  return out;
}

template <class T>
MatT<T> vstack(const MatT<T>& top, const MatT<T>& bottom) {
  if (top.cols != bottom.cols) throw ShapeError("vstack: column counts disagree");
  MatT<T> out(top.rows + bottom.rows, top.cols);
  for (int r = 0; r < top.rows; ++r)
    for (int c = 0; c < top.cols; ++c) out(r, c) = top(r, c);
  for (int r = 0; r < bottom.rows; ++r)
    for (int c = 0; c < bottom.cols; ++c) out(top.rows + r, c) = bottom(r, c);
  return out;
}

}  // namespace qgnn
