// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ircnn/error.hpp"

namespace ircnn {

/// Logical layout of every dense array in the toolkit: batch, channels,
/// height, width, stored row-major in exactly that order.
struct Shape {
  std::int64_t n = 0;
  std::int64_t c = 0;
  std::int64_t h = 0;
  std::int64_t w = 0;

  std::int64_t count() const { return n * c * h * w; }

  bool operator==(const Shape&) const = default;

  std::string str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + ")";
  }
};

inline void require_same_shape(const Shape& a, const Shape& b,
                               const char* op) {
  if (!(a == b)) {
    throw DataError(std::string(op) + ": shape mismatch " + a.str() + " vs " +
                    b.str());
  }
}

/// Dense 4-D array. Float in the production paths; the double instantiation
/// exists for finite-difference verification. Values are treated as
/// immutable once an operation has produced the tensor.
template <typename T>
class TensorT {
 public:
  TensorT() = default;

  explicit TensorT(Shape shape, T fill = T(0)) : shape_(shape) {
    if (shape.n < 0 || shape.c < 0 || shape.h < 0 || shape.w < 0) {
      throw UsageError("tensor: negative shape component " + shape.str());
    }
    unsigned __int128 count = 1;
    for (const std::int64_t d : {shape.n, shape.c, shape.h, shape.w}) {
      count *= static_cast<unsigned __int128>(d);
    }
    if (count > (std::int64_t{1} << 40)) {
      throw DataError("tensor: implausible element count for shape " +
                      shape.str());
    }
    try {
      data_.assign(static_cast<std::size_t>(count), fill);
    } catch (const std::bad_alloc&) {
      throw DataError("tensor: allocation of " + std::to_string(shape.count()) +
                      " elements failed for shape " + shape.str());
    }
  }

  const Shape& shape() const { return shape_; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  T operator[](std::int64_t i) const {
    return data_[static_cast<std::size_t>(i)];
  }

  std::int64_t index(std::int64_t n, std::int64_t c, std::int64_t h,
                     std::int64_t w) const {
    return ((n * shape_.c + c) * shape_.h + h) * shape_.w + w;
  }

  T& at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) {
    return data_[static_cast<std::size_t>(index(n, c, h, w))];
  }
  T at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const {
    return data_[static_cast<std::size_t>(index(n, c, h, w))];
  }

  bool all_finite() const {
    for (const T v : data_) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }

  void require_finite(const char* what) const {
    if (!all_finite()) {
      throw NumericError(std::string(what) + ": non-finite value in tensor " +
                         shape_.str());
    }
  }

 private:
  Shape shape_;
  std::vector<T> data_;
};

using Tensor = TensorT<float>;
using Tensor64 = TensorT<double>;

template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b) {
  require_same_shape(a.shape(), b.shape(), "add");
  TensorT<T> out(a.shape());
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <typename T>
TensorT<T> sub(const TensorT<T>& a, const TensorT<T>& b) {
  require_same_shape(a.shape(), b.shape(), "sub");
  TensorT<T> out(a.shape());
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <typename T>
TensorT<T> mul(const TensorT<T>& a, const TensorT<T>& b) {
  require_same_shape(a.shape(), b.shape(), "mul");
  TensorT<T> out(a.shape());
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

template <typename T>
TensorT<T> scale(const TensorT<T>& a, T k) {
  TensorT<T> out(a.shape());
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] * k;
  return out;
}

/// Mean of the squared elements, accumulated in double.
template <typename T>
double reduce_mean_sq(const TensorT<T>& a) {
  if (a.empty()) throw UsageError("reduce_mean_sq: empty tensor");
  double acc = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    const double v = static_cast<double>(a[i]);
    acc += v * v;
  }
  return acc / static_cast<double>(a.size());
}

template <typename To, typename From>
TensorT<To> cast_tensor(const TensorT<From>& a) {
  TensorT<To> out(a.shape());
  for (std::int64_t i = 0; i < a.size(); ++i)
    out[i] = static_cast<To>(a[i]);
  return out;
}

}  // namespace ircnn
