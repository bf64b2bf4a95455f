// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

// Orthonormal multi-level Haar transform. 1-D tensors transform their single
// axis; tensors with two or more axes transform the trailing two axes, treating
// leading axes as a batch. Coefficients are stored Mallat-style: the coarse
// approximation occupies the leading corner.

/// Largest level count (capped at `cap`) for which the transformed dims stay divisible.
int max_haar_levels(const Shape& shape, int cap = 8);

void haar_fwd_inplace(std::span<double> data, const Shape& shape, int levels);
void haar_fwd_inplace(std::span<cplx> data, const Shape& shape, int levels);
void haar_inv_inplace(std::span<double> data, const Shape& shape, int levels);
void haar_inv_inplace(std::span<cplx> data, const Shape& shape, int levels);

Tensor haar_fwd(const Tensor& x, int levels);
Tensor haar_inv(const Tensor& x, int levels);

}  // namespace ambient
