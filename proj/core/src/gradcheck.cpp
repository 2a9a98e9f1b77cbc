// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "ircnn/nn.hpp"
#include "ircnn/rng.hpp"

namespace ircnn {

namespace {

struct ParamView {
  double* data;
  const double* analytic;
  std::int64_t size;
};

// loss value plus a hash of the ReLU activation pattern; probes whose +-h
// interval flips the pattern cross a kink, where central differences do not
// measure the one-sided analytic gradient
struct LossProbe {
  double loss;
  std::uint64_t pattern;
};

double rel_error(double num, double ana) {
  const double denom = std::max({std::abs(num), std::abs(ana), 1e-8});
  return std::abs(num - ana) / denom;
}

GradCheckReport run_check(const std::vector<ParamView>& params,
                          const std::function<LossProbe()>& probe,
                          std::int64_t samples_per_tensor, double tolerance,
                          std::uint64_t seed) {
  GradCheckReport report;
  report.tolerance = tolerance;
  Rng rng(derive_seed(seed, 0x67636bull));  // "gck" stream
  for (const auto& p : params) {
    const bool exhaustive = p.size <= samples_per_tensor;
    const std::int64_t wanted = std::min<std::int64_t>(samples_per_tensor, p.size);
    std::int64_t done = 0;
    const std::int64_t max_attempts = wanted * 20;
    for (std::int64_t attempt = 0;
         done < wanted && (exhaustive ? attempt < p.size : attempt < max_attempts);
         ++attempt) {
      const std::int64_t i =
          exhaustive ? attempt
                     : static_cast<std::int64_t>(rng.uniform_below(
                           static_cast<std::uint64_t>(p.size)));
      const double saved = p.data[i];
      p.data[i] = saved + kGradCheckStep;
      const LossProbe lp = probe();
      p.data[i] = saved - kGradCheckStep;
      const LossProbe lm = probe();
      p.data[i] = saved;
      if (lp.pattern != lm.pattern) {
        ++report.coords_skipped;
        continue;
      }
      const double numeric = (lp.loss - lm.loss) / (2.0 * kGradCheckStep);
      const double err = rel_error(numeric, p.analytic[i]);
      report.max_rel_error = std::max(report.max_rel_error, err);
      ++report.coords_checked;
      ++done;
    }
  }
  report.pass = report.max_rel_error < tolerance;
  return report;
}

}  // namespace

std::string GradCheckReport::summary() const {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "%s: max relative error %.3e over %lld coordinates "
                "(%lld kink-crossing probes excluded, tolerance %.1e)",
                pass ? "PASS" : "FAIL", max_rel_error,
                static_cast<long long>(coords_checked),
                static_cast<long long>(coords_skipped), tolerance);
  return buf;
}

GradCheckReport gradient_check_against(const IrcnnModel64& model,
                                       const Tensor64& input,
                                       const Tensor64& target,
                                       const ModelGradsT<double>& analytic,
                                       std::int64_t samples_per_tensor,
                                       double tolerance, std::uint64_t seed) {
  IrcnnModel64 m = model;  // perturbed in place by the checker
  Tensor64 x = input;
  ForwardCacheT<double> cache;
  const auto probe = [&]() -> LossProbe {
    const Tensor64 out = model_forward_cached(m, x, cache);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the ReLU pattern
    for (std::size_t li = 1; li < cache.acts.size(); ++li) {
      const auto& a = cache.acts[li];
      for (std::int64_t i = 0; i < a.size(); ++i) {
        h = (h ^ static_cast<std::uint64_t>(a[i] > 0.0)) * 1099511628211ull;
      }
    }
    return {mse_loss(out, target).loss, h};
  };
  std::vector<ParamView> params;
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    auto& layer = m.layers[li];
    params.push_back({layer.weights.data(), analytic.layer[li].weights.data(),
                      layer.weights.size()});
    params.push_back({layer.biases.data(), analytic.layer[li].biases.data(),
                      static_cast<std::int64_t>(layer.biases.size())});
  }
  params.push_back({x.data(), analytic.input.data(), x.size()});
  return run_check(params, probe, samples_per_tensor, tolerance, seed);
}

GradCheckReport gradient_check(const IrcnnModel64& model, const Tensor64& input,
                               const Tensor64& target,
                               std::int64_t samples_per_tensor,
                               double tolerance, std::uint64_t seed) {
  ForwardCacheT<double> cache;
  const Tensor64 out = model_forward_cached(model, input, cache);
  const auto mse = mse_loss(out, target);
  const auto grads = model_backward(model, cache, mse.grad, true);
  return gradient_check_against(model, input, target, grads,
                                samples_per_tensor, tolerance, seed);
}

GradCheckReport gradient_check_layer(const ConvLayerT<double>& layer,
                                     const Tensor64& input,
                                     const Tensor64& target,
                                     std::int64_t samples_per_tensor,
                                     double tolerance, std::uint64_t seed) {
  ConvLayerT<double> l = layer;
  Tensor64 x = input;
  const auto probe = [&]() -> LossProbe {
    // a single convolution is smooth: no pattern to track
    return {mse_loss(conv_forward(x, l), target).loss, 0};
  };

  const auto mse = mse_loss(conv_forward(x, l), target);
  const auto grads = conv_backward(x, l, mse.grad, true);

  std::vector<ParamView> params;
  params.push_back({l.weights.data(), grads.weights.data(), l.weights.size()});
  params.push_back({l.biases.data(), grads.biases.data(),
                    static_cast<std::int64_t>(l.biases.size())});
  params.push_back({x.data(), grads.input.data(), x.size()});
  return run_check(params, probe, samples_per_tensor, tolerance, seed);
}

}  // namespace ircnn
