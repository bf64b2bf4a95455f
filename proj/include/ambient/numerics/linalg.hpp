// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ambient/numerics/tensor.hpp"

namespace ambient {

/// Smallest singular value of a 2-D tensor (real or complex).
double min_singular_value(const Tensor& matrix);
double min_singular_value(const CMat& matrix);
double min_singular_value(const Mat& matrix);

/// Singular values in decreasing order.
Vec singular_values(const CMat& matrix);

/// Row-major 2-D tensor viewed as a complex matrix.
CMat to_cmat(const Tensor& matrix);

}  // namespace ambient
