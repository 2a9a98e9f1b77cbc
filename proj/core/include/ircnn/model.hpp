// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ircnn/nn.hpp"
#include "ircnn/rng.hpp"
#include "ircnn/tensor.hpp"

namespace ircnn {

/// Kernel sizes of the six stages, in order.
inline constexpr std::array<std::int64_t, 6> kKernelPlan = {5, 5, 1, 5, 5, 5};

/// Channel widths of the five hidden stages when none are given.
inline constexpr std::array<std::int64_t, 5> kDefaultWidths = {64, 64, 64, 64,
                                                               64};

/// The restoration network: six same-padding convolutions (kernel plan
/// 5-5-1-5-5-5), ReLU after stages 1-5, linear output stage. RGB in, RGB
/// out, spatial size preserved everywhere.
template <typename T>
struct IrcnnModelT {
  std::vector<ConvLayerT<T>> layers;

  std::int64_t parameter_count() const {
    std::int64_t total = 0;
    for (const auto& l : layers) {
      total += l.weights.size() + static_cast<std::int64_t>(l.biases.size());
    }
    return total;
  }

  /// How far, in pixels, one output value can see: sum of (k-1)/2 over the
  /// stages. 10 for the fixed kernel plan.
  std::int64_t receptive_radius() const {
    std::int64_t r = 0;
    for (const auto& l : layers) r += (l.kernel() - 1) / 2;
    return r;
  }

  std::array<std::int64_t, 5> hidden_widths() const {
    std::array<std::int64_t, 5> w{};
    for (int i = 0; i < 5; ++i) w[static_cast<std::size_t>(i)] = layers[static_cast<std::size_t>(i)].out_channels();
    return w;
  }
};

using IrcnnModel = IrcnnModelT<float>;
using IrcnnModel64 = IrcnnModelT<double>;

/// Validates the fixed architecture: 6 layers, kernel plan 5-5-1-5-5-5,
/// 3 channels in and out, matching channel chain.
template <typename T>
void validate_architecture(const IrcnnModelT<T>& m) {
  if (m.layers.size() != kKernelPlan.size()) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeChain,
                           "model: expected 6 layers, got " +
                               std::to_string(m.layers.size()));
  }
  std::int64_t prev_c = 3;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const auto& l = m.layers[i];
    if (l.kernel() != kKernelPlan[i]) {
      throw ModelFormatError(
          ModelFormatError::Kind::kShapeChain,
          "model: layer " + std::to_string(i + 1) + " kernel " +
              std::to_string(l.kernel()) + ", plan requires " +
              std::to_string(kKernelPlan[i]));
    }
    if (l.in_channels() != prev_c) {
      throw ModelFormatError(
          ModelFormatError::Kind::kShapeChain,
          "model: layer " + std::to_string(i + 1) + " expects " +
              std::to_string(l.in_channels()) + " input channels, chain has " +
              std::to_string(prev_c));
    }
    prev_c = l.out_channels();
  }
  if (prev_c != 3) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeChain,
                           "model: final layer must emit 3 channels, got " +
                               std::to_string(prev_c));
  }
}

/// Builds a model with He-scaled Gaussian weights (stddev sqrt(2/(inC*k*k)),
/// drawn from one seeded stream in layer order) and zero biases. The same
/// seed always yields the same parameters.
template <typename T>
IrcnnModelT<T> model_init_as(const std::array<std::int64_t, 5>& widths,
                             std::uint64_t seed) {
  for (const std::int64_t w : widths) {
    if (w < 1) throw UsageError("model_init: widths must be >= 1");
  }
  IrcnnModelT<T> m;
  std::int64_t in_c = 3;
  Rng rng(derive_seed(seed, 0x6d6f64656cull));  // "model" stream
  for (std::size_t i = 0; i < kKernelPlan.size(); ++i) {
    const std::int64_t out_c = i < 5 ? widths[i] : 3;
    auto layer = make_conv_layer<T>(out_c, in_c, kKernelPlan[i]);
    const double stddev =
        std::sqrt(2.0 / static_cast<double>(in_c * kKernelPlan[i] *
                                            kKernelPlan[i]));
    for (std::int64_t j = 0; j < layer.weights.size(); ++j) {
      layer.weights[j] = static_cast<T>(rng.normal() * stddev);
    }
    m.layers.push_back(std::move(layer));
    in_c = out_c;
  }
  return m;
}

inline IrcnnModel model_init(const std::array<std::int64_t, 5>& widths,
                             std::uint64_t seed) {
  return model_init_as<float>(widths, seed);
}

template <typename T>
IrcnnModelT<double> to_double(const IrcnnModelT<T>& m) {
  IrcnnModelT<double> out;
  for (const auto& l : m.layers) {
    ConvLayerT<double> dl;
    dl.weights = cast_tensor<double>(l.weights);
    dl.biases.assign(l.biases.begin(), l.biases.end());
    dl.pad = l.pad;
    out.layers.push_back(std::move(dl));
  }
  return out;
}

/// Activations kept around for the backward pass: the model input, then the
/// post-ReLU output of stages 1..5. (The ReLU mask can be read off a
/// post-activation tensor, so pre-activations are not stored.)
template <typename T>
struct ForwardCacheT {
  std::vector<TensorT<T>> acts;
};

using ForwardCache = ForwardCacheT<float>;

template <typename T>
void validate_model_input(const IrcnnModelT<T>& m, const TensorT<T>& x) {
  if (x.shape().c != m.layers.front().in_channels()) {
    throw DataError("model: input has " + std::to_string(x.shape().c) +
                    " channels, expected " +
                    std::to_string(m.layers.front().in_channels()));
  }
  if (x.shape().h < 1 || x.shape().w < 1) {
    throw DataError("model: input spatial size must be >= 1, got " +
                    x.shape().str());
  }
}

template <typename T>
TensorT<T> model_forward_cached(const IrcnnModelT<T>& m, const TensorT<T>& x,
                                ForwardCacheT<T>& cache) {
  validate_model_input(m, x);
  cache.acts.clear();
  cache.acts.reserve(m.layers.size());
  cache.acts.push_back(x);
  for (std::size_t i = 0;; ++i) {
    TensorT<T> z = conv_forward(cache.acts.back(), m.layers[i]);
    if (i + 1 == m.layers.size()) return z;
    for (std::int64_t j = 0; j < z.size(); ++j) {
      if (z[j] < T(0)) z[j] = T(0);
    }
    cache.acts.push_back(std::move(z));
  }
}

template <typename T>
TensorT<T> model_forward(const IrcnnModelT<T>& m, const TensorT<T>& x) {
  validate_model_input(m, x);
  TensorT<T> cur = x;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    cur = conv_forward(cur, m.layers[i]);
    if (i + 1 < m.layers.size()) cur = relu_forward(cur);
  }
  return cur;
}

/// Per-layer gradients plus (optionally) the gradient wrt the model input.
template <typename T>
struct ModelGradsT {
  std::vector<ConvGradsT<T>> layer;
  TensorT<T> input;
};

using ModelGrads = ModelGradsT<float>;

/// Chain rule over the stack, in reverse. `cache` must come from
/// model_forward_cached on the same input.
template <typename T>
ModelGradsT<T> model_backward(const IrcnnModelT<T>& m,
                              const ForwardCacheT<T>& cache,
                              const TensorT<T>& grad_out,
                              bool need_input_grad = false) {
  if (cache.acts.size() != m.layers.size()) {
    throw UsageError("model_backward: forward cache missing or stale (" +
                     std::to_string(cache.acts.size()) + " activations for " +
                     std::to_string(m.layers.size()) + " layers)");
  }
  ModelGradsT<T> grads;
  grads.layer.resize(m.layers.size());
  TensorT<T> g = grad_out;
  for (std::size_t ri = m.layers.size(); ri-- > 0;) {
    const bool want_gx = ri > 0 || need_input_grad;
    grads.layer[ri] = conv_backward(cache.acts[ri], m.layers[ri], g, want_gx);
    if (ri > 0) {
      // grad through the ReLU that produced this layer's input
      g = relu_backward(cache.acts[ri], grads.layer[ri].input);
      grads.layer[ri].input = TensorT<T>();
    } else if (need_input_grad) {
      grads.input = std::move(grads.layer[ri].input);
      grads.layer[ri].input = TensorT<T>();
    }
  }
  return grads;
}

/// Binary model file, little-endian throughout:
///   "IRCN" | u32 version (=1) | u32 layer count |
///   per layer: u32 inC, outC, kH, kW, then f32 weights (row-major) and
///   f32 biases.
/// save -> load -> save reproduces the file byte for byte.
void model_save(const IrcnnModel& m, const std::string& path);
IrcnnModel model_load(const std::string& path);

inline constexpr std::uint32_t kModelFormatVersion = 1;

}  // namespace ircnn
