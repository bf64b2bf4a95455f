// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/numerics/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace ambient {

std::string to_string(DType dtype) {
  switch (dtype) {
    case DType::f32: return "f32";
    case DType::f64: return "f64";
    case DType::c64: return "c64";
    case DType::c128: return "c128";
  }
  return "unknown";
}

bool is_complex(DType dtype) { return dtype == DType::c64 || dtype == DType::c128; }

std::size_t element_size(DType dtype) {
  switch (dtype) {
    case DType::f32: return 4;
    case DType::f64: return 8;
    case DType::c64: return 8;
    case DType::c128: return 16;
  }
  return 0;
}

std::size_t shape_size(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("tensor shape must be nonempty");
  std::size_t n = 1;
  for (auto d : shape) {
    if (d == 0) throw std::invalid_argument("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  return os.str();
}

Shape parse_shape(const std::string& text) {
  Shape shape;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, 'x')) {
    if (part.empty()) throw std::invalid_argument("bad shape: '" + text + "'");
    std::size_t pos = 0;
    long long v = std::stoll(part, &pos);
    if (pos != part.size() || v <= 0) throw std::invalid_argument("bad shape: '" + text + "'");
    shape.push_back(static_cast<std::size_t>(v));
  }
  shape_size(shape);
  return shape;
}

namespace {

Tensor::Storage make_storage(DType dtype, std::size_t n) {
  switch (dtype) {
    case DType::f32: return std::vector<float>(n, 0.0f);
    case DType::f64: return std::vector<double>(n, 0.0);
    case DType::c64: return std::vector<std::complex<float>>(n);
    case DType::c128: return std::vector<cplx>(n);
  }
  throw std::invalid_argument("unknown dtype");
}

template <class T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<float>() { return DType::f32; }
template <>
constexpr DType dtype_of<double>() { return DType::f64; }
template <>
constexpr DType dtype_of<std::complex<float>>() { return DType::c64; }
template <>
constexpr DType dtype_of<cplx>() { return DType::c128; }

}  // namespace

Tensor::Tensor(DType dtype, Shape shape)
    : dtype_(dtype), shape_(std::move(shape)), data_(make_storage(dtype, shape_size(shape_))) {}

Tensor::Tensor(DType dtype, Shape shape, Storage data)
    : dtype_(dtype), shape_(std::move(shape)), data_(std::move(data)) {
  check_invariants();
}

void Tensor::check_invariants() const {
  const std::size_t n = shape_size(shape_);
  const std::size_t stored = std::visit([](const auto& v) { return v.size(); }, data_);
  if (stored != n) throw std::invalid_argument("tensor payload length does not match shape");
  if (static_cast<std::size_t>(data_.index()) != static_cast<std::size_t>(dtype_))
    throw std::invalid_argument("tensor payload does not match dtype");
}

Tensor Tensor::real(Shape shape, std::vector<double> values) {
  return Tensor(DType::f64, std::move(shape), Storage(std::move(values)));
}

Tensor Tensor::complex(Shape shape, std::vector<cplx> values) {
  return Tensor(DType::c128, std::move(shape), Storage(std::move(values)));
}

Tensor Tensor::from(Shape shape, const Vec& values) {
  return real(std::move(shape), std::vector<double>(values.data(), values.data() + values.size()));
}

Tensor Tensor::from(Shape shape, const CVec& values) {
  return complex(std::move(shape), std::vector<cplx>(values.data(), values.data() + values.size()));
}

std::size_t Tensor::size() const { return shape_size(shape_); }

template <class T>
std::span<T> Tensor::values() {
  if (dtype_of<T>() != dtype_)
    throw std::invalid_argument("tensor dtype is " + to_string(dtype_) + ", requested " +
                                to_string(dtype_of<T>()));
  return std::get<std::vector<T>>(data_);
}

template <class T>
std::span<const T> Tensor::values() const {
  if (dtype_of<T>() != dtype_)
    throw std::invalid_argument("tensor dtype is " + to_string(dtype_) + ", requested " +
                                to_string(dtype_of<T>()));
  return std::get<std::vector<T>>(data_);
}

template std::span<float> Tensor::values<float>();
template std::span<double> Tensor::values<double>();
template std::span<std::complex<float>> Tensor::values<std::complex<float>>();
template std::span<cplx> Tensor::values<cplx>();
template std::span<const float> Tensor::values<float>() const;
template std::span<const double> Tensor::values<double>() const;
template std::span<const std::complex<float>> Tensor::values<std::complex<float>>() const;
template std::span<const cplx> Tensor::values<cplx>() const;

CVec Tensor::to_cvec() const {
  CVec out(static_cast<Eigen::Index>(size()));
  std::visit(
      [&](const auto& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = cplx(v[i]);
      },
      data_);
  return out;
}

Vec Tensor::to_vec() const {
  if (is_complex()) throw std::invalid_argument("to_vec on a complex tensor");
  Vec out(static_cast<Eigen::Index>(size()));
  std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        if constexpr (std::is_floating_point_v<T>) {
          for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
        }
      },
      data_);
  return out;
}

Tensor Tensor::astype(DType dtype) const {
  if (dtype == dtype_) return *this;
  if (is_complex() && !ambient::is_complex(dtype))
    throw std::invalid_argument("cannot narrow complex tensor to real dtype");
  Tensor out(dtype, shape_);
  const CVec wide = to_cvec();
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const cplx z = wide[static_cast<Eigen::Index>(i)];
          if constexpr (std::is_floating_point_v<T>)
            v[i] = static_cast<T>(z.real());
          else
            v[i] = T(static_cast<typename T::value_type>(z.real()),
                     static_cast<typename T::value_type>(z.imag()));
        }
      },
      out.data_);
  return out;
}

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_size(shape) != size()) throw std::invalid_argument("reshape changes element count");
  Tensor out = *this;
  out.shape_ = std::move(shape);
  return out;
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.dtype_ == b.dtype_ && a.shape_ == b.shape_ && a.data_ == b.data_;
}

}  // namespace ambient
