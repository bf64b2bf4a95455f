// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

bool is_power_of_two(std::size_t n);

/// Unitary radix-2 DFT of a contiguous vector (scaled by 1/sqrt(n) in both
/// directions, so the inverse is the adjoint). Throws std::invalid_argument
/// unless the length is a power of two.
void fft_inplace(std::span<cplx> x, bool inverse);

/// Unitary DFT along one axis of a row-major array.
void fft_axis(std::span<cplx> data, const Shape& shape, std::size_t axis, bool inverse);

/// Unitary DFT over every axis. With `centered` the zero frequency sits at
/// index n/2 of each axis (shift, transform, shift back); still unitary.
void fftn(std::span<cplx> data, const Shape& shape, bool inverse, bool centered);

/// Circular shift by n/2 along every axis (self-inverse for even lengths).
void fftshift(std::span<cplx> data, const Shape& shape);

Tensor fft(const Tensor& x, std::size_t axis);
Tensor ifft(const Tensor& x, std::size_t axis);

}  // namespace ambient
