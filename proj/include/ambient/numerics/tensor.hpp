// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ambient {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

using Shape = std::vector<std::size_t>;

enum class DType : std::uint8_t { f32 = 0, f64 = 1, c64 = 2, c128 = 3 };

std::string to_string(DType dtype);
bool is_complex(DType dtype);
std::size_t element_size(DType dtype);

/// Product of the dimensions. Throws on an empty shape or a zero dimension.
std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);
/// Parses "8x8" / "16" into a shape.
Shape parse_shape(const std::string& text);

/// Dense row-major n-dimensional array tagged with its element type.
class Tensor {
 public:
  using Storage = std::variant<std::vector<float>, std::vector<double>,
                               std::vector<std::complex<float>>, std::vector<cplx>>;

  /// Zero-filled tensor.
  Tensor(DType dtype, Shape shape);

  static Tensor real(Shape shape, std::vector<double> values);
  static Tensor complex(Shape shape, std::vector<cplx> values);
  static Tensor from(Shape shape, const Vec& values);
  static Tensor from(Shape shape, const CVec& values);

  DType dtype() const { return dtype_; }
  const Shape& shape() const { return shape_; }
  std::size_t ndim() const { return shape_.size(); }
  std::size_t size() const;
  bool is_complex() const { return ambient::is_complex(dtype_); }

  /// Typed view of the payload; throws std::invalid_argument if T does not match dtype().
  template <class T>
  std::span<T> values();
  template <class T>
  std::span<const T> values() const;

  /// Widening conversions used by the compute paths.
  CVec to_cvec() const;
  Vec to_vec() const;  // real dtypes only

  Tensor astype(DType dtype) const;
  Tensor reshaped(Shape shape) const;

  const Storage& storage() const { return data_; }

  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  Tensor(DType dtype, Shape shape, Storage data);
  void check_invariants() const;

  DType dtype_;
  Shape shape_;
  Storage data_;
};

}  // namespace ambient
