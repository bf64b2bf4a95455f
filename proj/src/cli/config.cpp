// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace ambient {

const char* to_string(Task task) {
  switch (task) {
    case Task::cs: return "cs";
    case Task::superres: return "superres";
    case Task::inpaint: return "inpaint";
    case Task::mri: return "mri";
  }
  return "?";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::uncond: return "uncond";
    case Method::dps: return "dps";
    case Method::adps: return "adps";
    case Method::aos: return "aos";
    case Method::fista: return "fista";
  }
  return "?";
}

Task parse_task(const std::string& text) {
  for (Task t : {Task::cs, Task::superres, Task::inpaint, Task::mri})
    if (text == to_string(t)) return t;
  throw std::invalid_argument("unknown task '" + text + "' (cs, superres, inpaint, mri)");
}

Method parse_method(const std::string& text) {
  for (Method m : {Method::uncond, Method::dps, Method::adps, Method::aos, Method::fista})
    if (text == to_string(m)) return m;
  throw std::invalid_argument("unknown method '" + text + "' (uncond, dps, adps, aos, fista)");
}

GaussianMixturePrior PriorSpec::build(std::size_t dim) const {
  Rng rng(seed);
  GaussianMixturePrior p;
  for (std::size_t k = 0; k < components; ++k) {
    p.means.push_back(scale * rng.normal_vec(dim));
    p.variances.push_back(variance);
    p.weights.push_back(1.0 / static_cast<double>(components));
  }
  p.validate();
  return p;
}

void ExperimentConfig::validate() const {
  const std::size_t n = shape_size(shape);
  if (task == Task::cs && (m == 0 || m > n))
    throw std::invalid_argument("cs needs 1 <= m <= " + std::to_string(n) + ", got " + std::to_string(m));
  if (task == Task::superres) {
    for (auto d : shape)
      if (factor == 0 || d % factor != 0)
        throw std::invalid_argument("superres factor " + std::to_string(factor) + " does not divide " +
                                    shape_string(shape));
  }
  if (task == Task::inpaint && !(erasure >= 0.0 && erasure < 1.0))
    throw std::invalid_argument("inpainting erasure p must lie in [0, 1)");
  if (task == Task::mri) {
    if (dataset.empty()) throw std::invalid_argument("mri task needs a dataset directory");
    if (!std::filesystem::exists(std::filesystem::path(dataset) / "manifest.kv"))
      throw std::invalid_argument("dataset '" + dataset + "' has no manifest.kv");
    if (!(acceleration >= 1.0)) throw std::invalid_argument("acceleration R must be >= 1");
    if (analytic_model() && method != Method::fista)
      throw std::invalid_argument("analytic models cover the toy tasks only; mri needs a checkpoint");
  }
  if (method == Method::aos && (task == Task::cs || task == Task::superres))
    throw std::invalid_argument("one-step ambient restoration needs an inpainting or mri operator");
  if ((method == Method::adps || method == Method::aos) && task != Task::mri &&
      !(train_erasure >= 0.0 && train_erasure < 1.0))
    throw std::invalid_argument("train_p must lie in [0, 1)");
  if (method != Method::fista) {
    if (analytic_model()) {
      if (model != "analytic:gm" && model != "analytic:gm_ambient")
        throw std::invalid_argument("unknown analytic model '" + model + "'");
    } else if (!std::filesystem::exists(model + ".kv")) {
      throw std::invalid_argument("checkpoint '" + model + "' not found");
    }
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
  if (!(data_range >= 0.0)) throw std::invalid_argument("data_range must be >= 0");
  if (!axis.empty() && axis != "m" && axis != "factor" && axis != "p" && axis != "R" && axis != "NFE")
    throw std::invalid_argument("unknown sweep axis '" + axis + "' (m, factor, p, R, NFE)");
  sampler.validate();
  schedule.validate();
  fista.validate();
}

KeyValues ExperimentConfig::to_kv() const {
  KeyValues kv;
  kv.set("task", to_string(task));
  kv.set("shape", shape_string(shape));
  kv.set("m", static_cast<std::uint64_t>(m));
  kv.set("factor", static_cast<std::uint64_t>(factor));
  kv.set("p", erasure);
  kv.set("R", acceleration);
  kv.set("acs_lines", static_cast<std::uint64_t>(acs_lines));
  kv.set("coils", static_cast<std::uint64_t>(coils));
  kv.set("coil_smoothness", coil_smoothness);
  kv.set("noise_sigma", noise_sigma);
  kv.set("model", model);
  kv.set("method", to_string(method));
  kv.set("train_p", train_erasure);
  kv.set("train_R", train_acceleration);
  kv.set("prior_components", static_cast<std::uint64_t>(prior.components));
  kv.set("prior_scale", prior.scale);
  kv.set("prior_variance", prior.variance);
  kv.set("prior_seed", prior.seed);
  kv.set("dataset", dataset);
  kv.set("test_count", static_cast<std::uint64_t>(test_count));
  kv.set("seed", seed);
  kv.set("out", out);
  kv.set("data_range", data_range);
  sampler.write_config(kv);
  schedule.write_config(kv);
  fista.write_config(kv);
  kv.set("axis", axis);
  std::string list;
  for (std::size_t i = 0; i < values.size(); ++i) list += (i ? "," : "") + format_double(values[i]);
  kv.set("values", list);
  return kv;
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValues& kv) {
  ExperimentConfig c;
  c.task = parse_task(kv.get_or("task", to_string(c.task)));
  if (kv.contains("shape")) c.shape = parse_shape(kv.get("shape"));
  c.m = kv.get_u64_or("m", c.m);
  c.factor = kv.get_u64_or("factor", c.factor);
  c.erasure = kv.get_double_or("p", c.erasure);
  c.acceleration = kv.get_double_or("R", c.acceleration);
  c.acs_lines = kv.get_u64_or("acs_lines", c.acs_lines);
  c.coils = kv.get_u64_or("coils", c.coils);
  c.coil_smoothness = kv.get_double_or("coil_smoothness", c.coil_smoothness);
  c.noise_sigma = kv.get_double_or("noise_sigma", c.noise_sigma);
  c.model = kv.get_or("model", c.model);
  c.method = parse_method(kv.get_or("method", to_string(c.method)));
  c.train_erasure = kv.get_double_or("train_p", c.train_erasure);
  c.train_acceleration = kv.get_double_or("train_R", c.train_acceleration);
  c.prior.components = kv.get_u64_or("prior_components", c.prior.components);
  c.prior.scale = kv.get_double_or("prior_scale", c.prior.scale);
  c.prior.variance = kv.get_double_or("prior_variance", c.prior.variance);
  c.prior.seed = kv.get_u64_or("prior_seed", c.prior.seed);
  c.dataset = kv.get_or("dataset", c.dataset);
  c.test_count = kv.get_u64_or("test_count", c.test_count);
  c.seed = kv.get_u64_or("seed", c.seed);
  c.out = kv.get_or("out", c.out);
  c.data_range = kv.get_double_or("data_range", c.data_range);
  c.sampler = SamplerConfig::from_config(kv);
  c.schedule = NoiseSchedule::from_config(kv);
  c.fista = FistaConfig::from_config(kv);
  c.axis = kv.get_or("axis", "");
  if (kv.contains("values") && !kv.get("values").empty()) c.values = kv.get_doubles("values");
  return c;
}

std::string ExperimentConfig::hash() const {
  KeyValues kv = to_kv();
  kv.erase("out");
  return kv.hash();
}

namespace {

std::size_t as_count(const std::string& axis, double value) {
  if (!(value >= 1.0) || value != std::floor(value))
    throw std::invalid_argument("axis " + axis + " needs positive integers, got " + format_double(value));
  return static_cast<std::size_t>(value);
}

}  // namespace

ExperimentConfig ExperimentConfig::at(const std::string& name, double value) const {
  ExperimentConfig c = *this;
  if (name == "m") {
    c.m = as_count(name, value);
  } else if (name == "factor") {
    c.factor = as_count(name, value);
  } else if (name == "p") {
    c.erasure = value;
  } else if (name == "R") {
    c.acceleration = value;
  } else if (name == "NFE") {
    c.sampler.steps = as_count(name, value);
  } else {
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
  }
  return c;
}

KeyValues load_config(const std::string& path, const std::vector<std::string>& overrides) {
  KeyValues kv = path.empty() ? KeyValues{} : KeyValues::load(path);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override '" + o + "' is not key=value");
    KeyValues one = KeyValues::parse(o.substr(0, eq) + " = " + o.substr(eq + 1));
    kv.merge(one);
  }
  return kv;
}

}  // namespace ambient
