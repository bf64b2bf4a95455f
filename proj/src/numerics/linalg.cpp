// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/numerics/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace ambient {

CMat to_cmat(const Tensor& matrix) {
  if (matrix.ndim() != 2) throw std::invalid_argument("expected a 2-D tensor, got " + shape_string(matrix.shape()));
  const auto rows = static_cast<Eigen::Index>(matrix.shape()[0]);
  const auto cols = static_cast<Eigen::Index>(matrix.shape()[1]);
  const CVec flat = matrix.to_cvec();
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

Vec singular_values(const CMat& matrix) {
  if (!matrix.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  Eigen::JacobiSVD<CMat> svd(matrix);
  return svd.singularValues();
}

double min_singular_value(const CMat& matrix) {
  if (matrix.size() == 0) throw std::invalid_argument("empty matrix");
  const Vec s = singular_values(matrix);
  return s[s.size() - 1];
}

double min_singular_value(const Mat& matrix) { return min_singular_value(CMat(matrix.cast<cplx>())); }

double min_singular_value(const Tensor& matrix) { return min_singular_value(to_cmat(matrix)); }

}  // namespace ambient
