// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/operators/signal_space.hpp"

#include <stdexcept>

namespace ambient {

Vec to_channels(const CVec& x, Field field) {
  if (field == Field::real) return x.real();
  Vec out(2 * x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[2 * i] = x[i].real();
    out[2 * i + 1] = x[i].imag();
  }
  return out;
}

CVec from_channels(const Vec& channels, Field field) {
  if (field == Field::real) return channels.cast<cplx>();
  if (channels.size() % 2 != 0) throw std::invalid_argument("complex channel vector has odd length");
  CVec out(channels.size() / 2);
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = cplx(channels[2 * i], channels[2 * i + 1]);
  return out;
}

}  // namespace ambient
