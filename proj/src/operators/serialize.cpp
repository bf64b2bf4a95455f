// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/operators/serialize.hpp"

#include <stdexcept>

#include "ambient/numerics/ambt_io.hpp"

namespace ambient {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

MaskKind parse_mask_kind(const std::string& s) {
  if (s == "pixel") return MaskKind::pixel;
  if (s == "kspace_line") return MaskKind::kspace_line;
  throw std::runtime_error("unknown mask kind '" + s + "'");
}

}  // namespace

void save_mask(const std::filesystem::path& stem, const MaskSpec& mask) {
  std::vector<double> flags(mask.keep.begin(), mask.keep.end());
  save_tensor(with_suffix(stem, ".ambt"), Tensor::real(mask.shape, std::move(flags)).astype(DType::f32));
  KeyValues kv;
  kv.set("kind", to_string(mask.kind));
  kv.set("shape", shape_string(mask.shape));
  kv.set("erasure", mask.erasure);
  kv.set("acceleration", mask.acceleration);
  kv.set("acs_lines", mask.acs_lines);
  kv.set("seed", mask.seed);
  kv.save(with_suffix(stem, ".kv"));
}

MaskSpec load_mask(const std::filesystem::path& stem) {
  const KeyValues kv = KeyValues::load(with_suffix(stem, ".kv"));
  const Tensor t = load_tensor(with_suffix(stem, ".ambt"));
  MaskSpec m;
  m.kind = parse_mask_kind(kv.get("kind"));
  m.shape = t.shape();
  if (kv.contains("shape") && parse_shape(kv.get("shape")) != m.shape)
    throw std::runtime_error(stem.string() + ": sidecar shape disagrees with tensor");
  m.erasure = kv.get_double("erasure");
  m.acceleration = kv.get_double("acceleration");
  m.acs_lines = kv.get_u64("acs_lines");
  m.seed = kv.get_u64("seed");
  const Vec flags = t.to_vec();
  m.keep.resize(flags.size());
  for (Eigen::Index i = 0; i < flags.size(); ++i) {
    if (flags[i] != 0.0 && flags[i] != 1.0) throw std::runtime_error(stem.string() + ": mask entries must be 0/1");
    m.keep[static_cast<std::size_t>(i)] = flags[i] == 1.0;
  }
  return m;
}

void save_coils(const std::filesystem::path& path, const CoilMaps& coils) { save_tensor(path, coils.to_tensor()); }

CoilMaps load_coils(const std::filesystem::path& path) { return CoilMaps::from_tensor(load_tensor(path)); }

void save_operator(const std::filesystem::path& stem, const LinearOp& op) {
  KeyValues kv = op.describe();
  switch (op.kind()) {
    case OpKind::identity:
    case OpKind::downsample:
    case OpKind::gaussian_cs:
      break;
    case OpKind::inpaint:
      save_mask(with_suffix(stem, ".mask"), static_cast<const InpaintOp&>(op).mask());
      break;
    case OpKind::mri_adjoint_aggregate: {
      const auto& mri = static_cast<const MriAggregateOp&>(op);
      save_mask(with_suffix(stem, ".mask"), mri.mask());
      save_coils(with_suffix(stem, ".coils.ambt"), mri.coils());
      break;
    }
    case OpKind::mri_forward: {
      const auto& mri = static_cast<const MriForwardOp&>(op);
      save_mask(with_suffix(stem, ".mask"), mri.mask());
      save_coils(with_suffix(stem, ".coils.ambt"), mri.coils());
      break;
    }
    case OpKind::composite:
      throw std::invalid_argument("composite operators are not serializable");
  }
  kv.save(with_suffix(stem, ".kv"));
}

LinearOpPtr load_operator(const std::filesystem::path& stem) {
  const KeyValues kv = KeyValues::load(with_suffix(stem, ".kv"));
  const std::string kind = kv.get("kind");
  const Shape in = parse_shape(kv.get("input_shape"));
  if (kind == "identity") return identity_operator(in);
  if (kind == "downsample") return downsample_operator(in, kv.get_u64("factor"));
  if (kind == "gaussian_cs") return gaussian_cs_operator(in, kv.get_u64("measurements"), kv.get_u64("seed"));
  if (kind == "inpaint") return inpaint_operator(load_mask(with_suffix(stem, ".mask")));
  if (kind == "mri_adjoint_aggregate" || kind == "mri_forward") {
    const MaskSpec mask = load_mask(with_suffix(stem, ".mask"));
    const CoilMaps coils = load_coils(with_suffix(stem, ".coils.ambt"));
    return kind == "mri_forward" ? mri_forward_operator(mask, coils) : mri_operator(mask, coils);
  }
  throw std::runtime_error("unknown operator kind '" + kind + "'");
}

}  // namespace ambient
