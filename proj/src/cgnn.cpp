#include "qgnn/cgnn.hpp"

#include <cmath>
#include <random>

namespace qgnn::cgnn {

namespace {

constexpr double kLnEps = 1e-5;

DenseLayer make_layer(int out, int in, bool norm_relu, std::mt19937_64& rng) {
  DenseLayer l;
  l.W = Mat(out, in);
  const double bound = std::sqrt(1.0 / in);
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& w : l.W.data) w = u(rng);
  l.b.assign(out, 0.0);
  if (norm_relu) {
    l.layer_norm = true;
    l.relu = true;
    l.gain.assign(out, 1.0);
    l.shift.assign(out, 0.0);
  }
  return l;
}

DenseLayer zero_like(const DenseLayer& l) {
  DenseLayer z = l;
  std::fill(z.W.data.begin(), z.W.data.end(), 0.0);
  std::fill(z.b.begin(), z.b.end(), 0.0);
  std::fill(z.gain.begin(), z.gain.end(), 0.0);
  std::fill(z.shift.begin(), z.shift.end(), 0.0);
  return z;
}

void pack_layer(const DenseLayer& l, std::vector<double>& out) {
  out.insert(out.end(), l.W.data.begin(), l.W.data.end());
  out.insert(out.end(), l.b.begin(), l.b.end());
  if (l.layer_norm) {
    out.insert(out.end(), l.gain.begin(), l.gain.end());
    out.insert(out.end(), l.shift.begin(), l.shift.end());
  }
}

void unpack_layer(DenseLayer& l, const std::vector<double>& flat, size_t& pos) {
  for (double& w : l.W.data) w = flat[pos++];
  for (double& b : l.b) b = flat[pos++];
  if (l.layer_norm) {
    for (double& g : l.gain) g = flat[pos++];
    for (double& s : l.shift) s = flat[pos++];
  }
}

template <class Fn>
void for_each_layer(CgnnParams& p, Fn&& fn) {
  for (DenseLayer& l : p.node_encoder) fn(l);
  for (DenseLayer& l : p.edge_encoder) fn(l);
  for (CgnnParams::Pass& pass : p.passes) {
    fn(pass.phi_R);
    fn(pass.phi_O);
  }
  fn(p.decoder);
}

template <class Fn>
void for_each_layer(const CgnnParams& p, Fn&& fn) {
  for_each_layer(const_cast<CgnnParams&>(p), [&](DenseLayer& l) { fn(const_cast<const DenseLayer&>(l)); });
}

}  // namespace

CgnnParams CgnnParams::init(int processors, uint64_t seed) {
  if (processors < 1 || processors > 2) throw ArgumentError("processor count must be 1 or 2");
  std::mt19937_64 rng(seed);
  CgnnParams p;
  p.node_encoder.push_back(make_layer(8, 8, true, rng));
  p.node_encoder.push_back(make_layer(9, 8, true, rng));
  p.edge_encoder.push_back(make_layer(4, 4, true, rng));
  p.edge_encoder.push_back(make_layer(5, 4, true, rng));
  for (int i = 0; i < processors; ++i) {
    Pass pass;
    pass.phi_R = make_layer(5, 23, true, rng);
    pass.phi_O = make_layer(9, 14, true, rng);
    p.passes.push_back(std::move(pass));
  }
  p.decoder = make_layer(2, 9, false, rng);
  return p;
}

CgnnParams CgnnParams::zeros_like(const CgnnParams& shape) {
  CgnnParams z = shape;
  for_each_layer(z, [](DenseLayer& l) { l = zero_like(l); });
  return z;
}

size_t CgnnParams::flat_size() const {
  size_t n = 0;
  for_each_layer(*this, [&](const DenseLayer& l) {
    n += l.W.data.size() + l.b.size() + l.gain.size() + l.shift.size();
  });
  return n;
}

std::vector<double> CgnnParams::to_flat() const {
  std::vector<double> out;
  out.reserve(flat_size());
  for_each_layer(*this, [&](const DenseLayer& l) { pack_layer(l, out); });
  return out;
}

CgnnParams CgnnParams::from_flat(const std::vector<double>& flat, int processors) {
  CgnnParams p = init(processors, 0);
  if (flat.size() != p.flat_size()) throw ShapeError("flat parameter size disagrees");
  size_t pos = 0;
  for_each_layer(p, [&](DenseLayer& l) { unpack_layer(l, flat, pos); });
  return p;
}

std::vector<double> layer_forward(const DenseLayer& layer, const std::vector<double>& x,
                                  LayerCache* cache) {
  if (static_cast<int>(x.size()) != layer.in_dim()) throw ShapeError("layer input size");
  const int out = layer.out_dim();
  std::vector<double> z(out);
  for (int i = 0; i < out; ++i) {
    double acc = layer.b[i];
    for (int j = 0; j < layer.in_dim(); ++j) acc += layer.W(i, j) * x[j];
    z[i] = acc;
  }
  std::vector<double> y = z;
  std::vector<double> zh;
  double inv = 0.0;
  if (layer.layer_norm) {
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= out;
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= out;
    inv = 1.0 / std::sqrt(var + kLnEps);
    zh.resize(out);
    for (int i = 0; i < out; ++i) {
      zh[i] = (z[i] - mean) * inv;
      y[i] = layer.gain[i] * zh[i] + layer.shift[i];
    }
  }
  std::vector<double> r = y;
  if (layer.relu)
    for (double& v : r) v = v > 0 ? v : 0.0;
  if (cache) {
    cache->x = x;
    cache->z = std::move(z);
    cache->zh = std::move(zh);
    cache->y = std::move(y);
    cache->inv = inv;
  }
  return r;
}

std::vector<double> layer_backward(const DenseLayer& layer, const LayerCache& cache,
                                   std::vector<double> dy, DenseLayer& grad) {
  const int out = layer.out_dim();
  if (layer.relu)
    for (int i = 0; i < out; ++i)
      if (cache.y[i] <= 0) dy[i] = 0.0;

  std::vector<double> dz;
  if (layer.layer_norm) {
    std::vector<double> dzh(out);
    for (int i = 0; i < out; ++i) {
      grad.gain[i] += dy[i] * cache.zh[i];
      grad.shift[i] += dy[i];
      dzh[i] = dy[i] * layer.gain[i];
    }
    double mean_dzh = 0.0, mean_dzh_zh = 0.0;
    for (int i = 0; i < out; ++i) {
      mean_dzh += dzh[i];
      mean_dzh_zh += dzh[i] * cache.zh[i];
    }
    mean_dzh /= out;
    mean_dzh_zh /= out;
    dz.resize(out);
    for (int i = 0; i < out; ++i)
      dz[i] = cache.inv * (dzh[i] - mean_dzh - cache.zh[i] * mean_dzh_zh);
  } else {
    dz = std::move(dy);
  }

  std::vector<double> dx(layer.in_dim(), 0.0);
  for (int i = 0; i < out; ++i) {
    grad.b[i] += dz[i];
    for (int j = 0; j < layer.in_dim(); ++j) {
      grad.W(i, j) += dz[i] * cache.x[j];
      dx[j] += layer.W(i, j) * dz[i];
    }
  }
  return dx;
}

std::vector<double> mlp_forward(const Mlp& layers, const std::vector<double>& x) {
  std::vector<double> v = x;
  for (const DenseLayer& l : layers) v = layer_forward(l, v);
  return v;
}

Mat apply_columns(const Mlp& layers, const Mat& input) {
  Mat out;
  for (int c = 0; c < input.cols; ++c) {
    std::vector<double> v = mlp_forward(layers, input.col(c));
    if (c == 0) out = Mat(static_cast<int>(v.size()), input.cols);
    out.set_col(c, v);
  }
  return out;
}

Mat marshall(const Mat& O, const Mat& Er, const Mat& Es, const Mat& Ra) {
  return vstack(vstack(matmul(O, Er), matmul(O, Es)), Ra);
}

Mat edge_update(const Mat& B, const DenseLayer& phi_R) {
  Mat E(phi_R.out_dim(), B.cols);
  for (int c = 0; c < B.cols; ++c) E.set_col(c, layer_forward(phi_R, B.col(c)));
  return E;
}

Mat aggregate(const Mat& E, const Mat& Er) { return matmul_bt(E, Er); }

Mat node_update(const Mat& O, const Mat& Ebar, const DenseLayer& phi_O) {
  Mat C = vstack(O, Ebar);
  Mat P(phi_O.out_dim(), C.cols);
  for (int c = 0; c < C.cols; ++c) P.set_col(c, layer_forward(phi_O, C.col(c)));
  return P;
}

namespace {

Mat encode_columns(const Mlp& layers, const Mat& input, std::vector<std::vector<LayerCache>>* caches) {
  Mat out;
  if (caches) caches->assign(input.cols, {});
  for (int c = 0; c < input.cols; ++c) {
    std::vector<double> v = input.col(c);
    if (caches) (*caches)[c].resize(layers.size());
    for (size_t li = 0; li < layers.size(); ++li)
      v = layer_forward(layers[li], v, caches ? &(*caches)[c][li] : nullptr);
    if (c == 0) out = Mat(static_cast<int>(v.size()), input.cols);
    out.set_col(c, v);
  }
  return out;
}

Mat run_forward(const graphs::GraphSample& sample, const CgnnParams& params, ForwardCache* cache) {
  sample.validate();
  Mat O = encode_columns(params.node_encoder, sample.N, cache ? &cache->enc_n : nullptr);
  Mat Ra = encode_columns(params.edge_encoder, sample.Ea_padded, cache ? &cache->enc_e : nullptr);
  if (cache) {
    cache->O0 = O;
    cache->Ra0 = Ra;
    cache->passes.clear();
  }

  for (const CgnnParams::Pass& pass : params.passes) {
    ForwardCache::PassCache pc;
    if (cache) {
      pc.O_in = O;
      pc.Ra_in = Ra;
    }
    Mat B = marshall(O, sample.Er, sample.Es, Ra);
    Mat E(pass.phi_R.out_dim(), B.cols);
    if (cache) pc.phi_R.resize(B.cols);
    for (int c = 0; c < B.cols; ++c)
      E.set_col(c, layer_forward(pass.phi_R, B.col(c), cache ? &pc.phi_R[c] : nullptr));
    Mat Ebar = aggregate(E, sample.Er);
    Mat C = vstack(O, Ebar);
    Mat P(pass.phi_O.out_dim(), C.cols);
    if (cache) pc.phi_O.resize(C.cols);
    for (int c = 0; c < C.cols; ++c)
      P.set_col(c, layer_forward(pass.phi_O, C.col(c), cache ? &pc.phi_O[c] : nullptr));
    if (cache) {
      pc.B = std::move(B);
      pc.E = E;
      pc.Ebar = std::move(Ebar);
      pc.C = std::move(C);
      pc.P = P;
      cache->passes.push_back(std::move(pc));
    }
    O = std::move(P);   // node latents feed the next round
    Ra = std::move(E);  // so do the refreshed edge latents
  }

  Mat pred(2, 3);
  if (cache) cache->dec.resize(3);
  for (int c = 0; c < 3; ++c)
    pred.set_col(c, layer_forward(params.decoder, O.col(c), cache ? &cache->dec[c] : nullptr));
  if (cache) cache->pred = pred;
  return pred;
}

}  // namespace

Mat cgnn_forward(const graphs::GraphSample& sample, const CgnnParams& params) {
  return run_forward(sample, params, nullptr);
}

Mat cgnn_forward_cached(const graphs::GraphSample& sample, const CgnnParams& params,
                        ForwardCache& cache) {
  return run_forward(sample, params, &cache);
}

CgnnParams cgnn_gradient(const graphs::GraphSample& sample, const CgnnParams& params,
                         const Mat& dPred) {
  if (dPred.rows != 2 || dPred.cols != 3) throw ShapeError("prediction gradient shape");
  ForwardCache cache;
  run_forward(sample, params, &cache);
  CgnnParams grad = CgnnParams::zeros_like(params);

  const int n_pass = params.processors();
  const int ne = sample.n_edges;

  // decoder
  Mat dP(9, 3);
  for (int c = 0; c < 3; ++c)
    dP.set_col(c, layer_backward(params.decoder, cache.dec[c], dPred.col(c), grad.decoder));

  // message rounds, newest first; node latents of round p+1 are the P of
  // round p and its edge latents are the E of round p
  Mat dRa_next(5, ne);
  for (int p = n_pass - 1; p >= 0; --p) {
    const auto& pc = cache.passes[p];
    const auto& pass = params.passes[p];

    Mat dC(14, 3);
    for (int c = 0; c < 3; ++c)
      dC.set_col(c, layer_backward(pass.phi_O, pc.phi_O[c], dP.col(c), grad.passes[p].phi_O));

    Mat dO(9, 3);
    Mat dEbar(5, 3);
    for (int c = 0; c < 3; ++c) {
      for (int r = 0; r < 9; ++r) dO(r, c) = dC(r, c);
      for (int r = 0; r < 5; ++r) dEbar(r, c) = dC(9 + r, c);
    }

    Mat dE = matmul(dEbar, sample.Er);
    if (p < n_pass - 1)
      for (size_t i = 0; i < dE.data.size(); ++i) dE.data[i] += dRa_next.data[i];

    Mat dB(23, ne);
    for (int c = 0; c < ne; ++c)
      dB.set_col(c, layer_backward(pass.phi_R, pc.phi_R[c], dE.col(c), grad.passes[p].phi_R));

    Mat dB_top(9, ne), dB_mid(9, ne), dRa(5, ne);
    for (int c = 0; c < ne; ++c) {
      for (int r = 0; r < 9; ++r) {
        dB_top(r, c) = dB(r, c);
        dB_mid(r, c) = dB(9 + r, c);
      }
      for (int r = 0; r < 5; ++r) dRa(r, c) = dB(18 + r, c);
    }
    Mat dO_from_B = matmul_bt(dB_top, sample.Er);
    Mat dO_from_Bs = matmul_bt(dB_mid, sample.Es);
    for (size_t i = 0; i < dO.data.size(); ++i)
      dO.data[i] += dO_from_B.data[i] + dO_from_Bs.data[i];

    dP = std::move(dO);  // becomes the upstream node gradient of round p-1
    dRa_next = std::move(dRa);
  }

  // encoders
  for (int c = 0; c < 3; ++c) {
    std::vector<double> d = dP.col(c);
    for (int li = static_cast<int>(params.node_encoder.size()) - 1; li >= 0; --li)
      d = layer_backward(params.node_encoder[li], cache.enc_n[c][li], std::move(d),
                         grad.node_encoder[li]);
  }
  for (int c = 0; c < ne; ++c) {
    std::vector<double> d = dRa_next.col(c);
    for (int li = static_cast<int>(params.edge_encoder.size()) - 1; li >= 0; --li)
      d = layer_backward(params.edge_encoder[li], cache.enc_e[c][li], std::move(d),
                         grad.edge_encoder[li]);
  }
  return grad;
}

}  // namespace qgnn::cgnn
