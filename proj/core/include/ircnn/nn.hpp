// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ircnn/detail/conv_kernels.hpp"
#include "ircnn/error.hpp"
#include "ircnn/parallel.hpp"
#include "ircnn/tensor.hpp"

namespace ircnn {

/// One learnable convolution stage. Weights are (outC, inC, k, k); padding is
/// always (k-1)/2 so spatial size is preserved ("same" convolution, zeros
/// outside the input). The forward op is cross-correlation: no kernel flip.
template <typename T>
struct ConvLayerT {
  TensorT<T> weights;
  std::vector<T> biases;
  int pad = 0;

  std::int64_t out_channels() const { return weights.shape().n; }
  std::int64_t in_channels() const { return weights.shape().c; }
  std::int64_t kernel() const { return weights.shape().h; }
};

using ConvLayer = ConvLayerT<float>;

template <typename T>
ConvLayerT<T> make_conv_layer(std::int64_t out_c, std::int64_t in_c,
                              std::int64_t k) {
  if (out_c < 1 || in_c < 1) throw UsageError("conv layer: channels must be >= 1");
  if (k < 1 || k % 2 == 0) {
    throw UsageError("conv layer: kernel size must be odd, got " +
                     std::to_string(k));
  }
  ConvLayerT<T> layer;
  layer.weights = TensorT<T>(Shape{out_c, in_c, k, k});
  layer.biases.assign(static_cast<std::size_t>(out_c), T(0));
  layer.pad = static_cast<int>((k - 1) / 2);
  return layer;
}

template <typename T>
struct ConvGradsT {
  TensorT<T> input;    // empty when the caller did not ask for it
  TensorT<T> weights;  // same shape as layer.weights
  std::vector<T> biases;
};

using ConvGrads = ConvGradsT<float>;

namespace detail {

template <typename T>
void validate_conv(const TensorT<T>& x, const ConvLayerT<T>& layer) {
  if (x.shape().c != layer.in_channels()) {
    throw DataError("conv: input has " + std::to_string(x.shape().c) +
                    " channels, layer expects " +
                    std::to_string(layer.in_channels()));
  }
  const std::int64_t k = layer.kernel();
  if (layer.weights.shape().h != layer.weights.shape().w || k % 2 == 0) {
    throw UsageError("conv: kernel must be square and odd");
  }
  if (layer.pad != (k - 1) / 2) {
    throw UsageError("conv: pad must be (k-1)/2 for same convolution");
  }
}

/// Repacks (outC, inC, k, k) weights tap-major: one contiguous
/// (outC x inC) slice per (ky,kx). With `flip`, the spatial taps are
/// reversed and the channel axes swapped, which turns the forward kernel
/// into the input-gradient kernel.
template <typename T>
std::vector<T> repack_taps(const TensorT<T>& w, bool flip) {
  const std::int64_t outC = w.shape().n, inC = w.shape().c, k = w.shape().h;
  std::vector<T> taps(static_cast<std::size_t>(k * k * outC * inC));
  for (std::int64_t oc = 0; oc < outC; ++oc) {
    for (std::int64_t ic = 0; ic < inC; ++ic) {
      for (std::int64_t ky = 0; ky < k; ++ky) {
        for (std::int64_t kx = 0; kx < k; ++kx) {
          const T v = w.at(oc, ic, ky, kx);
          if (flip) {
            taps[(((k - 1 - ky) * k + (k - 1 - kx)) * inC + ic) * outC + oc] = v;
          } else {
            taps[((ky * k + kx) * outC + oc) * inC + ic] = v;
          }
        }
      }
    }
  }
  return taps;
}

/// Core same-pad convolution: out(N,outC,H,W) from in(N,inC,H,W) and
/// tap-major weights. Parallel over samples, or over output channels when
/// there is a single sample.
template <typename T>
void run_conv(const TensorT<T>& in, const T* wtaps, const T* biases,
              std::int64_t outC, std::int64_t k, std::int64_t pad,
              TensorT<T>& out) {
  const std::int64_t n = in.shape().n, inC = in.shape().c;
  const std::int64_t h = in.shape().h, w = in.shape().w;
  const std::int64_t hp = h + 2 * pad, wp = w + 2 * pad;
  const std::int64_t hw = h * w;

  auto init_planes = [&](std::int64_t s, std::int64_t oc0, std::int64_t oc1) {
    T* base = out.data() + s * outC * hw;
    for (std::int64_t oc = oc0; oc < oc1; ++oc) {
      const T b = biases ? biases[oc] : T(0);
      std::fill(base + oc * hw, base + (oc + 1) * hw, b);
    }
  };

  if (n == 1) {
    ircnn::detail::PadBuffer<T> pb;
    const T* padded = in.data();
    if (pad > 0) {
      T* buf = pb.get(inC * hp * wp);
      ircnn::detail::pad_sample(in.data(), inC, h, w, pad, buf);
      padded = buf;
    }
    parallel_for(outC, [&](std::int64_t oc0, std::int64_t oc1) {
      init_planes(0, oc0, oc1);
      ircnn::detail::conv_sample(padded, inC, hp, wp, wtaps, k, outC, oc0, oc1,
                                 out.data(), h, w);
    });
    return;
  }

  parallel_for(n, [&](std::int64_t s0, std::int64_t s1) {
    ircnn::detail::PadBuffer<T> pb;
    for (std::int64_t s = s0; s < s1; ++s) {
      const T* sample = in.data() + s * inC * hw;
      const T* padded = sample;
      if (pad > 0) {
        T* buf = pb.get(inC * hp * wp);
        ircnn::detail::pad_sample(sample, inC, h, w, pad, buf);
        padded = buf;
      }
      init_planes(s, 0, outC);
      ircnn::detail::conv_sample(padded, inC, hp, wp, wtaps, k, outC, 0, outC,
                                 out.data() + s * outC * hw, h, w);
    }
  });
}

}  // namespace detail

/// Same-padding convolution; output spatial size equals input size.
template <typename T>
TensorT<T> conv_forward(const TensorT<T>& x, const ConvLayerT<T>& layer) {
  detail::validate_conv(x, layer);
  const Shape s = x.shape();
  TensorT<T> out(Shape{s.n, layer.out_channels(), s.h, s.w});
  if (out.empty()) return out;
  const std::vector<T> taps = detail::repack_taps(layer.weights, false);
  detail::run_conv(x, taps.data(), layer.biases.data(), layer.out_channels(),
                   layer.kernel(), layer.pad, out);
  return out;
}

/// Analytic gradients of a scalar loss through conv_forward.
///   input   : "full" correlation of grad_out with the flipped kernels
///   weights : correlation of the (padded) input with grad_out
///   biases  : per-channel sum of grad_out
template <typename T>
ConvGradsT<T> conv_backward(const TensorT<T>& x, const ConvLayerT<T>& layer,
                            const TensorT<T>& grad_out,
                            bool need_input_grad = true) {
  detail::validate_conv(x, layer);
  const Shape s = x.shape();
  const std::int64_t outC = layer.out_channels(), inC = layer.in_channels();
  const std::int64_t k = layer.kernel(), pad = layer.pad;
  require_same_shape(grad_out.shape(), Shape{s.n, outC, s.h, s.w},
                     "conv_backward");

  ConvGradsT<T> g;
  g.weights = TensorT<T>(layer.weights.shape());
  g.biases.assign(static_cast<std::size_t>(outC), T(0));

  const std::int64_t hw = s.h * s.w;
  for (std::int64_t oc = 0; oc < outC; ++oc) {
    double acc = 0.0;
    for (std::int64_t n = 0; n < s.n; ++n) {
      const T* gp = grad_out.data() + (n * outC + oc) * hw;
      for (std::int64_t i = 0; i < hw; ++i) acc += static_cast<double>(gp[i]);
    }
    g.biases[static_cast<std::size_t>(oc)] = static_cast<T>(acc);
  }

  const std::int64_t hp = s.h + 2 * pad, wp = s.w + 2 * pad;
  parallel_for(outC, [&](std::int64_t oc0, std::int64_t oc1) {
    ircnn::detail::PadBuffer<T> pb;
    for (std::int64_t n = 0; n < s.n; ++n) {
      const T* sample = x.data() + n * inC * hw;
      const T* padded = sample;
      if (pad > 0) {
        T* buf = pb.get(inC * hp * wp);
        ircnn::detail::pad_sample(sample, inC, s.h, s.w, pad, buf);
        padded = buf;
      }
      ircnn::detail::conv_grad_w_sample(padded, inC, hp, wp,
                                        grad_out.data() + n * outC * hw, s.h,
                                        s.w, k, oc0, oc1, g.weights.data());
    }
  });

  if (need_input_grad) {
    g.input = TensorT<T>(s);
    const std::vector<T> taps = detail::repack_taps(layer.weights, true);
    detail::run_conv(grad_out, taps.data(), static_cast<const T*>(nullptr),
                     inC, k, pad, g.input);
  }
  return g;
}

template <typename T>
TensorT<T> relu_forward(const TensorT<T>& x) {
  TensorT<T> out(x.shape());
  for (std::int64_t i = 0; i < x.size(); ++i)
    out[i] = x[i] > T(0) ? x[i] : T(0);
  return out;
}

/// `x` is the tensor whose sign gated the forward pass. Passing the forward
/// *output* is equivalent: max(0,x) > 0 exactly where x > 0.
template <typename T>
TensorT<T> relu_backward(const TensorT<T>& x, const TensorT<T>& grad_out) {
  require_same_shape(x.shape(), grad_out.shape(), "relu_backward");
  TensorT<T> out(x.shape());
  for (std::int64_t i = 0; i < x.size(); ++i)
    out[i] = x[i] > T(0) ? grad_out[i] : T(0);
  return out;
}

template <typename T>
struct MseResultT {
  double loss = 0.0;
  TensorT<T> grad;  // d(loss)/d(pred)
};

using MseResult = MseResultT<float>;

/// Mean squared error over all elements, with its gradient wrt `pred`.
template <typename T>
MseResultT<T> mse_loss(const TensorT<T>& pred, const TensorT<T>& target) {
  require_same_shape(pred.shape(), target.shape(), "mse_loss");
  if (pred.empty()) throw UsageError("mse_loss: empty tensors");
  MseResultT<T> r;
  r.grad = TensorT<T>(pred.shape());
  const double inv = 1.0 / static_cast<double>(pred.size());
  double acc = 0.0;
  for (std::int64_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - static_cast<double>(target[i]);
    acc += d * d;
    r.grad[i] = static_cast<T>(2.0 * d * inv);
  }
  r.loss = acc * inv;
  return r;
}

/// Velocity state for momentum SGD over a stack of conv layers.
/// Update rule per parameter: v <- momentum*v - lr*g; p <- p + v.
template <typename T>
struct OptimizerStateT {
  T learning_rate = T(1e-4);
  T momentum = T(0.9);
  std::vector<TensorT<T>> vel_w;
  std::vector<std::vector<T>> vel_b;

  static OptimizerStateT make(const std::vector<ConvLayerT<T>>& layers, T lr,
                              T momentum) {
    if (!(lr > T(0))) throw UsageError("optimizer: learning rate must be > 0");
    if (momentum < T(0) || momentum >= T(1)) {
      throw UsageError("optimizer: momentum must be in [0, 1)");
    }
    OptimizerStateT st;
    st.learning_rate = lr;
    st.momentum = momentum;
    for (const auto& l : layers) {
      st.vel_w.emplace_back(l.weights.shape());
      st.vel_b.emplace_back(l.biases.size(), T(0));
    }
    return st;
  }
};

using OptimizerState = OptimizerStateT<float>;

template <typename T>
void sgd_momentum_step(std::vector<ConvLayerT<T>>& layers,
                       const std::vector<ConvGradsT<T>>& grads,
                       OptimizerStateT<T>& state) {
  if (layers.size() != grads.size() || layers.size() != state.vel_w.size()) {
    throw UsageError("sgd step: layer/gradient/state count mismatch");
  }
  for (std::size_t li = 0; li < layers.size(); ++li) {
    auto& layer = layers[li];
    const auto& g = grads[li];
    require_same_shape(layer.weights.shape(), g.weights.shape(), "sgd step");
    if (!g.weights.all_finite()) {
      throw NumericError("sgd step: non-finite weight gradient in layer " +
                         std::to_string(li + 1));
    }
    for (const T b : g.biases) {
      if (!std::isfinite(static_cast<double>(b))) {
        throw NumericError("sgd step: non-finite bias gradient in layer " +
                           std::to_string(li + 1));
      }
    }
    auto& vw = state.vel_w[li];
    for (std::int64_t i = 0; i < vw.size(); ++i) {
      vw[i] = state.momentum * vw[i] - state.learning_rate * g.weights[i];
      layer.weights[i] += vw[i];
    }
    auto& vb = state.vel_b[li];
    for (std::size_t i = 0; i < vb.size(); ++i) {
      vb[i] = state.momentum * vb[i] - state.learning_rate * g.biases[i];
      layer.biases[i] += vb[i];
    }
  }
}

}  // namespace ircnn
