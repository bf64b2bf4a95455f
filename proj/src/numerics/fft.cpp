// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/numerics/fft.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ambient {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

const std::vector<cplx>& twiddles(std::size_t n) {
  thread_local std::map<std::size_t, std::vector<cplx>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> w(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return cache.emplace(n, std::move(w)).first->second;
}

void check_length(std::size_t n) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("FFT length " + std::to_string(n) + " is not a power of two");
}

}  // namespace

void fft_inplace(std::span<cplx> x, bool inverse) {
  const std::size_t n = x.size();
  check_length(n);
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  const auto& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx tw = inverse ? std::conj(w[k * stride]) : w[k * stride];
        const cplx a = x[start + k];
        const cplx b = x[start + k + half] * tw;
        x[start + k] = a + b;
        x[start + k + half] = a - b;
      }
    }
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : x) v *= scale;
}

void fft_axis(std::span<cplx> data, const Shape& shape, std::size_t axis, bool inverse) {
  if (axis >= shape.size()) throw std::invalid_argument("FFT axis out of range");
  if (data.size() != shape_size(shape)) throw std::invalid_argument("FFT data/shape mismatch");
  const std::size_t n = shape[axis];
  check_length(n);

  std::size_t inner = 1;
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  const std::size_t outer = data.size() / (n * inner);

  if (inner == 1) {
    for (std::size_t o = 0; o < outer; ++o) fft_inplace(data.subspan(o * n, n), inverse);
    return;
  }
  std::vector<cplx> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * inner];
      fft_inplace(line, inverse);
      for (std::size_t k = 0; k < n; ++k) data[base + k * inner] = line[k];
    }
  }
}

void fftshift(std::span<cplx> data, const Shape& shape) {
  if (data.size() != shape_size(shape)) throw std::invalid_argument("fftshift data/shape mismatch");
  std::vector<cplx> tmp;
  std::size_t inner = data.size();
  std::size_t outer = 1;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t n = shape[axis];
    inner /= n;
    const std::size_t shift = n / 2;
    if (shift != 0) {
      tmp.resize(n * inner);
      for (std::size_t o = 0; o < outer; ++o) {
        auto block = data.subspan(o * n * inner, n * inner);
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t i = 0; i < inner; ++i) tmp[((k + shift) % n) * inner + i] = block[k * inner + i];
        std::copy(tmp.begin(), tmp.end(), block.begin());
      }
    }
    outer *= n;
  }
}

void fftn(std::span<cplx> data, const Shape& shape, bool inverse, bool centered) {
  if (centered) fftshift(data, shape);
  for (std::size_t axis = 0; axis < shape.size(); ++axis) fft_axis(data, shape, axis, inverse);
  if (centered) fftshift(data, shape);
}

namespace {

Tensor transform(const Tensor& x, std::size_t axis, bool inverse) {
  if (!x.is_complex()) throw std::invalid_argument("fft requires a complex tensor");
  std::vector<cplx> buf(x.size());
  const CVec wide = x.to_cvec();
  std::copy(wide.data(), wide.data() + wide.size(), buf.begin());
  fft_axis(buf, x.shape(), axis, inverse);
  return Tensor::complex(x.shape(), std::move(buf)).astype(x.dtype());
}

}  // namespace

Tensor fft(const Tensor& x, std::size_t axis) { return transform(x, axis, false); }
Tensor ifft(const Tensor& x, std::size_t axis) { return transform(x, axis, true); }

}  // namespace ambient
