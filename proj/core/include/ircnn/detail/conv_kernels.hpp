// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace ircnn::detail {

// Direct convolution, decomposed into k*k shifted channel-mix updates over a
// zero-padded input buffer. Each (ky,kx) tap contributes
//   out[oc][y][x] += W[oc][ic][ky][kx] * pad[ic][y+ky][x+kx]
// which is a small GEMM with the reduction over input channels. Blocking is
// sized so the accumulators fit the vector register file: 4 output channels
// by 16 pixels in the main path.

inline constexpr int kOcBlock = 4;
inline constexpr int kXBlock = 16;

/// Copies one sample (C,H,W) into a (C,H+2p,W+2p) zero-padded buffer.
template <typename T>
void pad_sample(const T* src, std::int64_t c, std::int64_t h, std::int64_t w,
                std::int64_t pad, T* dst) {
  const std::int64_t hp = h + 2 * pad;
  const std::int64_t wp = w + 2 * pad;
  std::fill(dst, dst + c * hp * wp, T(0));
  for (std::int64_t ic = 0; ic < c; ++ic) {
    for (std::int64_t y = 0; y < h; ++y) {
      const T* s = src + (ic * h + y) * w;
      T* d = dst + (ic * hp + y + pad) * wp + pad;
      std::copy(s, s + w, d);
    }
  }
}

/// One tap over a row span for a block of 4 output channels.
template <typename T>
inline void tap_row_oc4(const T* __restrict in_row, std::int64_t plane_stride,
                        const T* __restrict w0, const T* __restrict w1,
                        const T* __restrict w2, const T* __restrict w3,
                        std::int64_t inC, T* __restrict o0, T* __restrict o1,
                        T* __restrict o2, T* __restrict o3, std::int64_t xn) {
  std::int64_t x = 0;
  for (; x + kXBlock <= xn; x += kXBlock) {
    T a0[kXBlock], a1[kXBlock], a2[kXBlock], a3[kXBlock];
    for (int j = 0; j < kXBlock; ++j) {
      a0[j] = o0[x + j];
      a1[j] = o1[x + j];
      a2[j] = o2[x + j];
      a3[j] = o3[x + j];
    }
    for (std::int64_t ic = 0; ic < inC; ++ic) {
      const T* v = in_row + ic * plane_stride + x;
      const T c0 = w0[ic], c1 = w1[ic], c2 = w2[ic], c3 = w3[ic];
      for (int j = 0; j < kXBlock; ++j) {
        const T vj = v[j];
        a0[j] += c0 * vj;
        a1[j] += c1 * vj;
        a2[j] += c2 * vj;
        a3[j] += c3 * vj;
      }
    }
    for (int j = 0; j < kXBlock; ++j) {
      o0[x + j] = a0[j];
      o1[x + j] = a1[j];
      o2[x + j] = a2[j];
      o3[x + j] = a3[j];
    }
  }
  if (x < xn) {
    const std::int64_t left = xn - x;
    T a0[kXBlock] = {}, a1[kXBlock] = {}, a2[kXBlock] = {}, a3[kXBlock] = {};
    for (std::int64_t ic = 0; ic < inC; ++ic) {
      const T* v = in_row + ic * plane_stride + x;
      const T c0 = w0[ic], c1 = w1[ic], c2 = w2[ic], c3 = w3[ic];
      for (std::int64_t j = 0; j < left; ++j) {
        const T vj = v[j];
        a0[j] += c0 * vj;
        a1[j] += c1 * vj;
        a2[j] += c2 * vj;
        a3[j] += c3 * vj;
      }
    }
    for (std::int64_t j = 0; j < left; ++j) {
      o0[x + j] += a0[j];
      o1[x + j] += a1[j];
      o2[x + j] += a2[j];
      o3[x + j] += a3[j];
    }
  }
}

/// Same, single output channel (covers the oc remainder, still x-vectorized).
template <typename T>
inline void tap_row_oc1(const T* __restrict in_row, std::int64_t plane_stride,
                        const T* __restrict w0, std::int64_t inC,
                        T* __restrict o0, std::int64_t xn) {
  std::int64_t x = 0;
  for (; x + kXBlock <= xn; x += kXBlock) {
    T a0[kXBlock];
    for (int j = 0; j < kXBlock; ++j) a0[j] = o0[x + j];
    for (std::int64_t ic = 0; ic < inC; ++ic) {
      const T* v = in_row + ic * plane_stride + x;
      const T c0 = w0[ic];
      for (int j = 0; j < kXBlock; ++j) a0[j] += c0 * v[j];
    }
    for (int j = 0; j < kXBlock; ++j) o0[x + j] = a0[j];
  }
  if (x < xn) {
    const std::int64_t left = xn - x;
    T a0[kXBlock] = {};
    for (std::int64_t ic = 0; ic < inC; ++ic) {
      const T* v = in_row + ic * plane_stride + x;
      const T c0 = w0[ic];
      for (std::int64_t j = 0; j < left; ++j) a0[j] += c0 * v[j];
    }
    for (std::int64_t j = 0; j < left; ++j) o0[x + j] += a0[j];
  }
}

/// Forward body for one sample over an output-channel range [oc0, oc1).
/// `wtaps` holds k*k contiguous (outC x inC) slices (tap-major repack of the
/// weights). Output planes must already be initialized (with the bias).
template <typename T>
void conv_sample(const T* pad, std::int64_t inC, std::int64_t hp,
                 std::int64_t wp, const T* wtaps, std::int64_t k,
                 std::int64_t outC, std::int64_t oc0, std::int64_t oc1,
                 T* out, std::int64_t h, std::int64_t w) {
  const std::int64_t plane = hp * wp;
  const std::int64_t hw = h * w;
  for (std::int64_t ky = 0; ky < k; ++ky) {
    for (std::int64_t kx = 0; kx < k; ++kx) {
      const T* wslice = wtaps + (ky * k + kx) * outC * inC;
      for (std::int64_t y = 0; y < h; ++y) {
        const T* in_row = pad + (y + ky) * wp + kx;
        T* out_row = out + y * w;
        std::int64_t oc = oc0;
        for (; oc + kOcBlock <= oc1; oc += kOcBlock) {
          tap_row_oc4(in_row, plane, wslice + (oc + 0) * inC,
                      wslice + (oc + 1) * inC, wslice + (oc + 2) * inC,
                      wslice + (oc + 3) * inC, inC, out_row + (oc + 0) * hw,
                      out_row + (oc + 1) * hw, out_row + (oc + 2) * hw,
                      out_row + (oc + 3) * hw, w);
        }
        for (; oc < oc1; ++oc) {
          tap_row_oc1(in_row, plane, wslice + oc * inC, inC, out_row + oc * hw,
                      w);
        }
      }
    }
  }
}

/// Weight-gradient pass for a pair of output channels and one input channel,
/// k = 5: one plane sweep per ky accumulates all five kx taps, so every
/// gradient load feeds ten FMAs. The kx taps are spelled out so the
/// accumulator arrays stay register-resident. Reductions run in a fixed lane
/// order so results do not depend on the worker count.
template <typename T>
void grad_w_k5_oc2(const T* __restrict g0, const T* __restrict g1,
                   const T* __restrict pplane, std::int64_t h, std::int64_t w,
                   std::int64_t wp, T* __restrict cell0, T* __restrict cell1) {
  constexpr int kLanes = 8;
  for (int ky = 0; ky < 5; ++ky) {
    T a0[kLanes] = {}, a1[kLanes] = {}, a2[kLanes] = {}, a3[kLanes] = {},
      a4[kLanes] = {};
    T b0[kLanes] = {}, b1[kLanes] = {}, b2[kLanes] = {}, b3[kLanes] = {},
      b4[kLanes] = {};
    T ta[5] = {}, tb[5] = {};
    for (std::int64_t y = 0; y < h; ++y) {
      const T* r0 = g0 + y * w;
      const T* r1 = g1 + y * w;
      const T* prow = pplane + (y + ky) * wp;
      std::int64_t x = 0;
      for (; x + kLanes <= w; x += kLanes) {
        const T* p = prow + x;
        for (int j = 0; j < kLanes; ++j) {
          const T g0v = r0[x + j];
          const T g1v = r1[x + j];
          a0[j] += g0v * p[j];
          b0[j] += g1v * p[j];
          a1[j] += g0v * p[j + 1];
          b1[j] += g1v * p[j + 1];
          a2[j] += g0v * p[j + 2];
          b2[j] += g1v * p[j + 2];
          a3[j] += g0v * p[j + 3];
          b3[j] += g1v * p[j + 3];
          a4[j] += g0v * p[j + 4];
          b4[j] += g1v * p[j + 4];
        }
      }
      for (; x < w; ++x) {
        const T g0v = r0[x], g1v = r1[x];
        for (int kx = 0; kx < 5; ++kx) {
          const T pv = prow[x + kx];
          ta[kx] += g0v * pv;
          tb[kx] += g1v * pv;
        }
      }
    }
    const T* accs0[5] = {a0, a1, a2, a3, a4};
    const T* accs1[5] = {b0, b1, b2, b3, b4};
    for (int kx = 0; kx < 5; ++kx) {
      T s0 = ta[kx], s1 = tb[kx];
      for (int j = 0; j < kLanes; ++j) {
        s0 += accs0[kx][j];
        s1 += accs1[kx][j];
      }
      cell0[ky * 5 + kx] += s0;
      cell1[ky * 5 + kx] += s1;
    }
  }
}

/// Single-output-channel k = 5 weight-gradient pass (oc remainder).
template <typename T>
void grad_w_k5_oc1(const T* __restrict g0, const T* __restrict pplane,
                   std::int64_t h, std::int64_t w, std::int64_t wp,
                   T* __restrict cell0) {
  constexpr int kLanes = 8;
  for (int ky = 0; ky < 5; ++ky) {
    T a0[kLanes] = {}, a1[kLanes] = {}, a2[kLanes] = {}, a3[kLanes] = {},
      a4[kLanes] = {};
    T ta[5] = {};
    for (std::int64_t y = 0; y < h; ++y) {
      const T* r0 = g0 + y * w;
      const T* prow = pplane + (y + ky) * wp;
      std::int64_t x = 0;
      for (; x + kLanes <= w; x += kLanes) {
        const T* p = prow + x;
        for (int j = 0; j < kLanes; ++j) {
          const T g0v = r0[x + j];
          a0[j] += g0v * p[j];
          a1[j] += g0v * p[j + 1];
          a2[j] += g0v * p[j + 2];
          a3[j] += g0v * p[j + 3];
          a4[j] += g0v * p[j + 4];
        }
      }
      for (; x < w; ++x) {
        const T g0v = r0[x];
        for (int kx = 0; kx < 5; ++kx) ta[kx] += g0v * prow[x + kx];
      }
    }
    const T* accs0[5] = {a0, a1, a2, a3, a4};
    for (int kx = 0; kx < 5; ++kx) {
      T s0 = ta[kx];
      for (int j = 0; j < kLanes; ++j) s0 += accs0[kx][j];
      cell0[ky * 5 + kx] += s0;
    }
  }
}

/// Runtime-k fallback with the same per-(ky,kx) accumulation order.
template <typename T>
void grad_w_pair_generic(const T* gplane, const T* pplane, std::int64_t h,
                         std::int64_t w, std::int64_t wp, std::int64_t k,
                         T* gw_cell) {
  constexpr int kLanes = 8;
  for (std::int64_t ky = 0; ky < k; ++ky) {
    for (std::int64_t kx = 0; kx < k; ++kx) {
      T lanes[kLanes] = {};
      T tail = 0;
      for (std::int64_t y = 0; y < h; ++y) {
        const T* grow = gplane + y * w;
        const T* prow = pplane + (y + ky) * wp + kx;
        std::int64_t x = 0;
        for (; x + kLanes <= w; x += kLanes) {
          for (int j = 0; j < kLanes; ++j) lanes[j] += grow[x + j] * prow[x + j];
        }
        for (; x < w; ++x) tail += grow[x] * prow[x];
      }
      T s = tail;
      for (int j = 0; j < kLanes; ++j) s += lanes[j];
      gw_cell[ky * k + kx] += s;
    }
  }
}

/// Weight-gradient body: for an output-channel range, accumulates
///   gw[oc][ic][ky][kx] += sum_{y,x} g[oc][y][x] * pad[ic][y+ky][x+kx]
/// for one sample.
template <typename T>
void conv_grad_w_sample(const T* pad, std::int64_t inC, std::int64_t hp,
                        std::int64_t wp, const T* g, std::int64_t h,
                        std::int64_t w, std::int64_t k, std::int64_t oc0,
                        std::int64_t oc1, T* gw) {
  const std::int64_t hw = h * w;
  const std::int64_t plane = hp * wp;
  const std::int64_t kk = k * k;
  for (std::int64_t ic = 0; ic < inC; ++ic) {
    const T* pplane = pad + ic * plane;
    std::int64_t oc = oc0;
    if (k == 5) {
      for (; oc + 2 <= oc1; oc += 2) {
        grad_w_k5_oc2(g + oc * hw, g + (oc + 1) * hw, pplane, h, w, wp,
                      gw + (oc * inC + ic) * kk,
                      gw + ((oc + 1) * inC + ic) * kk);
      }
      if (oc < oc1) {
        grad_w_k5_oc1(g + oc * hw, pplane, h, w, wp,
                      gw + (oc * inC + ic) * kk);
      }
    } else {
      for (; oc < oc1; ++oc) {
        grad_w_pair_generic(g + oc * hw, pplane, h, w, wp, k,
                            gw + (oc * inC + ic) * kk);
      }
    }
  }
}

template <typename T>
struct PadBuffer {
  std::vector<T> v;
  T* get(std::int64_t count) {
    if (static_cast<std::int64_t>(v.size()) < count) v.resize(count);
    return v.data();
  }
};

}  // namespace ircnn::detail
