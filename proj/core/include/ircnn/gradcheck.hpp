// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "ircnn/model.hpp"

namespace ircnn {

/// Outcome of a finite-difference pass over sampled coordinates. Relative
/// error uses |num - ana| / max(|num|, |ana|, 1e-8); the floor keeps noise
/// around exactly-zero gradients from registering as failures.
///
/// The loss is piecewise smooth in the parameters (ReLU), and central
/// differences only measure the analytic gradient inside one smooth piece.
/// A probe whose +-h interval changes the activation sign pattern is
/// therefore excluded and another coordinate sampled in its place;
/// `coords_skipped` counts the exclusions.
struct GradCheckReport {
  double max_rel_error = 0.0;
  std::int64_t coords_checked = 0;
  std::int64_t coords_skipped = 0;
  double tolerance = 0.0;
  bool pass = false;

  std::string summary() const;
};

inline constexpr double kGradCheckStep = 1e-4;  // central differences, 64-bit

/// Checks analytic gradients of mse_loss(model(x), target) against central
/// finite differences, sampling up to `samples_per_tensor` coordinates from
/// every weight tensor, every bias vector, and the input. Runs entirely in
/// double precision.
GradCheckReport gradient_check(const IrcnnModel64& model, const Tensor64& input,
                               const Tensor64& target,
                               std::int64_t samples_per_tensor,
                               double tolerance, std::uint64_t seed);

/// Same pass, but scores a caller-supplied set of "analytic" gradients.
/// Lets a corrupted gradient be fed in to prove the checker notices.
GradCheckReport gradient_check_against(const IrcnnModel64& model,
                                       const Tensor64& input,
                                       const Tensor64& target,
                                       const ModelGradsT<double>& analytic,
                                       std::int64_t samples_per_tensor,
                                       double tolerance, std::uint64_t seed);

/// Single-layer variant: loss is mse_loss(conv_forward(x, layer), target).
GradCheckReport gradient_check_layer(const ConvLayerT<double>& layer,
                                     const Tensor64& input,
                                     const Tensor64& target,
                                     std::int64_t samples_per_tensor,
                                     double tolerance, std::uint64_t seed);

}  // namespace ircnn
