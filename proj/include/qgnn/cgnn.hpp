#pragma once

#include <cstdint>
#include <vector>

#include "qgnn/graphs.hpp"

namespace qgnn::cgnn {

/// Affine layer with optional layer-norm (over the feature dimension,
/// eps 1e-5) and ReLU, applied in that order.
struct DenseLayer {
  Mat W;
  std::vector<double> b;
  bool layer_norm = false;
  std::vector<double> gain;
  std::vector<double> shift;
  bool relu = false;

  int in_dim() const { return W.cols; }
  int out_dim() const { return W.rows; }
};

using Mlp = std::vector<DenseLayer>;

struct CgnnParams {
  Mlp node_encoder;  // 8 -> 8 -> 9
  Mlp edge_encoder;  // 4 -> 4 -> 5
  struct Pass {
    DenseLayer phi_R;  // 23 -> 5
    DenseLayer phi_O;  // 14 -> 9
  };
  std::vector<Pass> passes;  // one per message round
  DenseLayer decoder;        // 9 -> 2, no norm, no ReLU

  /// Uniform +-sqrt(1/fan_in) weights, zero bias, unit gain, zero shift.
  static CgnnParams init(int processors, uint64_t seed);
  static CgnnParams zeros_like(const CgnnParams& shape);

  int processors() const { return static_cast<int>(passes.size()); }
  size_t flat_size() const;
  std::vector<double> to_flat() const;
  static CgnnParams from_flat(const std::vector<double>& flat, int processors);
};

/// Saved per-column intermediates of one layer application.
struct LayerCache {
  std::vector<double> x;   // input
  std::vector<double> z;   // affine output
  std::vector<double> zh;  // normalized (when layer_norm)
  std::vector<double> y;   // post-norm, pre-ReLU
  double inv = 0.0;        // 1/sqrt(var + eps)
};

std::vector<double> layer_forward(const DenseLayer& layer, const std::vector<double>& x,
                                  LayerCache* cache = nullptr);
/// Propagates dLoss/dOut back to dLoss/dIn, accumulating parameter
/// gradients into `grad` (same shapes as `layer`).
std::vector<double> layer_backward(const DenseLayer& layer, const LayerCache& cache,
                                   std::vector<double> dy, DenseLayer& grad);

std::vector<double> mlp_forward(const Mlp& layers, const std::vector<double>& x);
Mat apply_columns(const Mlp& layers, const Mat& input);

/// Stacks receiver latents, sender latents and edge latents per edge.
Mat marshall(const Mat& O, const Mat& Er, const Mat& Es, const Mat& Ra);
Mat edge_update(const Mat& B, const DenseLayer& phi_R);
/// Sums edge effects into their receiver node: E * Er^T.
Mat aggregate(const Mat& E, const Mat& Er);
Mat node_update(const Mat& O, const Mat& Ebar, const DenseLayer& phi_O);

struct ForwardCache {
  Mat O0, Ra0;
  std::vector<std::vector<LayerCache>> enc_n;  // [column][layer]
  std::vector<std::vector<LayerCache>> enc_e;
  struct PassCache {
    Mat O_in, Ra_in, B, E, Ebar, C, P;
    std::vector<LayerCache> phi_R;  // [column]
    std::vector<LayerCache> phi_O;
  };
  std::vector<PassCache> passes;
  std::vector<LayerCache> dec;
  Mat pred;
};

Mat cgnn_forward(const graphs::GraphSample& sample, const CgnnParams& params);
Mat cgnn_forward_cached(const graphs::GraphSample& sample, const CgnnParams& params,
                        ForwardCache& cache);
/// Reverse-mode gradient of sum(dPred .* pred) with respect to every
/// parameter; dPred is the upstream gradient at the prediction.
CgnnParams cgnn_gradient(const graphs::GraphSample& sample, const CgnnParams& params,
                         const Mat& dPred);

}  // namespace qgnn::cgnn
