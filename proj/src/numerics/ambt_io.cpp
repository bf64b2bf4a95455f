// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/numerics/ambt_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ambient {

namespace {

constexpr char kMagic[4] = {'A', 'M', 'B', 'T'};

template <class U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <class U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

void put_scalar(std::string& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
void put_scalar(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

}  // namespace

std::string encode_ambt(const Tensor& tensor) {
  if (tensor.ndim() > 255) throw std::invalid_argument("AMBT supports at most 255 dims");
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(kAmbtVersion));
  out.push_back(static_cast<char>(tensor.dtype()));
  out.push_back(static_cast<char>(tensor.ndim()));
  out.push_back('\0');
  for (auto d : tensor.shape()) {
    if (d > 0xFFFFFFFFu) throw std::invalid_argument("AMBT dims must fit in u32");
    put_le(out, static_cast<std::uint32_t>(d));
  }
  out.reserve(out.size() + tensor.size() * element_size(tensor.dtype()));
  std::visit(
      [&](const auto& values) {
        using T = typename std::decay_t<decltype(values)>::value_type;
        for (const auto& v : values) {
          if constexpr (std::is_floating_point_v<T>) {
            put_scalar(out, v);
          } else {
            put_scalar(out, v.real());
            put_scalar(out, v.imag());
          }
        }
      },
      tensor.storage());
  return out;
}

Tensor decode_ambt(std::string_view bytes) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 8) throw std::runtime_error("AMBT: truncated header");
  if (std::memcmp(p, kMagic, 4) != 0) throw std::runtime_error("AMBT: bad magic");
  if (p[4] != kAmbtVersion) throw std::runtime_error("AMBT: unsupported version " + std::to_string(p[4]));
  if (p[5] > 3) throw std::runtime_error("AMBT: unknown dtype code " + std::to_string(p[5]));
  const auto dtype = static_cast<DType>(p[5]);
  const std::size_t ndim = p[6];
  if (ndim == 0) throw std::runtime_error("AMBT: zero-dimensional tensor");
  std::size_t offset = 8;
  if (bytes.size() < offset + 4 * ndim) throw std::runtime_error("AMBT: truncated dims");
  Shape shape(ndim);
  for (std::size_t i = 0; i < ndim; ++i, offset += 4) {
    shape[i] = get_le<std::uint32_t>(p + offset);
    if (shape[i] == 0) throw std::runtime_error("AMBT: zero dimension");
  }
  Tensor out(dtype, shape);
  const std::size_t payload = out.size() * element_size(dtype);
  if (bytes.size() < offset + payload) throw std::runtime_error("AMBT: truncated payload");
  if (bytes.size() > offset + payload) throw std::runtime_error("AMBT: trailing bytes after payload");
  const unsigned char* q = p + offset;
  switch (dtype) {
    case DType::f32:
      for (auto& v : out.values<float>()) v = std::bit_cast<float>(get_le<std::uint32_t>(q)), q += 4;
      break;
    case DType::f64:
      for (auto& v : out.values<double>()) v = std::bit_cast<double>(get_le<std::uint64_t>(q)), q += 8;
      break;
    case DType::c64:
      for (auto& v : out.values<std::complex<float>>()) {
        const float re = std::bit_cast<float>(get_le<std::uint32_t>(q));
        const float im = std::bit_cast<float>(get_le<std::uint32_t>(q + 4));
        v = {re, im};
        q += 8;
      }
      break;
    case DType::c128:
      for (auto& v : out.values<cplx>()) {
        const double re = std::bit_cast<double>(get_le<std::uint64_t>(q));
        const double im = std::bit_cast<double>(get_le<std::uint64_t>(q + 8));
        v = {re, im};
        q += 16;
      }
      break;
  }
  return out;
}

void save_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  const std::string bytes = encode_ambt(tensor);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path, std::optional<DType> expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  Tensor t = [&] {
    try {
      return decode_ambt(buf.str());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
  }();
  if (expected && t.dtype() != *expected)
    throw std::runtime_error(path.string() + ": dtype " + to_string(t.dtype()) + ", expected " +
                             to_string(*expected));
  return t;
}

}  // namespace ambient
