// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/numerics/haar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ambient {

namespace {

struct Layout {
  std::size_t batch = 1;
  std::size_t rows = 1;
  std::size_t cols = 1;
  bool two_d = false;
};

Layout layout_of(const Shape& shape) {
  Layout l;
  const std::size_t total = shape_size(shape);
  if (shape.size() == 1) {
    l.cols = shape[0];
  } else {
    l.rows = shape[shape.size() - 2];
    l.cols = shape[shape.size() - 1];
    l.two_d = true;
  }
  l.batch = total / (l.rows * l.cols);
  return l;
}

void check_levels(const Shape& shape, int levels) {
  if (levels < 0) throw std::invalid_argument("Haar level count must be non-negative");
  const Layout l = layout_of(shape);
  const std::size_t block = std::size_t{1} << levels;
  if (l.cols % block != 0 || (l.two_d && l.rows % block != 0))
    throw std::invalid_argument("dims of " + shape_string(shape) + " not divisible by 2^" +
                                std::to_string(levels));
}

// One analysis step on `len` strided entries.
template <class T>
void analyze(T* x, std::size_t len, std::size_t stride, std::vector<T>& tmp) {
  const double s = std::numbers::sqrt2 / 2.0;
  const std::size_t half = len / 2;
  tmp.resize(len);
  for (std::size_t k = 0; k < half; ++k) {
    const T a = x[(2 * k) * stride];
    const T b = x[(2 * k + 1) * stride];
    tmp[k] = (a + b) * s;
    tmp[half + k] = (a - b) * s;
  }
  for (std::size_t k = 0; k < len; ++k) x[k * stride] = tmp[k];
}

template <class T>
void synthesize(T* x, std::size_t len, std::size_t stride, std::vector<T>& tmp) {
  const double s = std::numbers::sqrt2 / 2.0;
  const std::size_t half = len / 2;
  tmp.resize(len);
  for (std::size_t k = 0; k < half; ++k) {
    const T a = x[k * stride];
    const T d = x[(half + k) * stride];
    tmp[2 * k] = (a + d) * s;
    tmp[2 * k + 1] = (a - d) * s;
  }
  for (std::size_t k = 0; k < len; ++k) x[k * stride] = tmp[k];
}

template <class T>
void forward(std::span<T> data, const Shape& shape, int levels) {
  if (data.size() != shape_size(shape)) throw std::invalid_argument("Haar data/shape mismatch");
  check_levels(shape, levels);
  const Layout l = layout_of(shape);
  std::vector<T> tmp;
  for (std::size_t b = 0; b < l.batch; ++b) {
    T* img = data.data() + b * l.rows * l.cols;
    std::size_t h = l.rows, w = l.cols;
    for (int lev = 0; lev < levels; ++lev) {
      for (std::size_t r = 0; r < h; ++r) analyze(img + r * l.cols, w, 1, tmp);
      if (l.two_d)
        for (std::size_t c = 0; c < w; ++c) analyze(img + c, h, l.cols, tmp);
      w /= 2;
      if (l.two_d) h /= 2;
    }
  }
}

template <class T>
void inverse(std::span<T> data, const Shape& shape, int levels) {
  if (data.size() != shape_size(shape)) throw std::invalid_argument("Haar data/shape mismatch");
  check_levels(shape, levels);
  const Layout l = layout_of(shape);
  std::vector<T> tmp;
  for (std::size_t b = 0; b < l.batch; ++b) {
    T* img = data.data() + b * l.rows * l.cols;
    for (int lev = levels - 1; lev >= 0; --lev) {
      const std::size_t w = l.cols >> lev;
      const std::size_t h = l.two_d ? (l.rows >> lev) : 1;
      if (l.two_d)
        for (std::size_t c = 0; c < w; ++c) synthesize(img + c, h, l.cols, tmp);
      for (std::size_t r = 0; r < h; ++r) synthesize(img + r * l.cols, w, 1, tmp);
    }
  }
}

}  // namespace

int max_haar_levels(const Shape& shape, int cap) {
  const Layout l = layout_of(shape);
  int levels = 0;
  while (levels < cap) {
    const std::size_t block = std::size_t{1} << (levels + 1);
    if (l.cols % block != 0 || (l.two_d && l.rows % block != 0)) break;
    ++levels;
  }
  return levels;
}

void haar_fwd_inplace(std::span<double> data, const Shape& shape, int levels) { forward(data, shape, levels); }
void haar_fwd_inplace(std::span<cplx> data, const Shape& shape, int levels) { forward(data, shape, levels); }
void haar_inv_inplace(std::span<double> data, const Shape& shape, int levels) { inverse(data, shape, levels); }
void haar_inv_inplace(std::span<cplx> data, const Shape& shape, int levels) { inverse(data, shape, levels); }

namespace {

Tensor apply(const Tensor& x, int levels, bool inv) {
  if (x.is_complex()) {
    Tensor out = x.astype(DType::c128);
    auto v = out.values<cplx>();
    inv ? inverse(v, x.shape(), levels) : forward(v, x.shape(), levels);
    return out.astype(x.dtype());
  }
  Tensor out = x.astype(DType::f64);
  auto v = out.values<double>();
  inv ? inverse(v, x.shape(), levels) : forward(v, x.shape(), levels);
  return out.astype(x.dtype());
}

}  // namespace

Tensor haar_fwd(const Tensor& x, int levels) { return apply(x, levels, false); }
Tensor haar_inv(const Tensor& x, int levels) { return apply(x, levels, true); }

}  // namespace ambient
