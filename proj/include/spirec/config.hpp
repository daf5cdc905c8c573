#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spirec/core.hpp"
#include "spirec/phantom.hpp"
#include "spirec/sensing.hpp"

namespace spirec {

enum class Method { Pinv, DdimGap, DdimHqs, DdimFused, PnpHqs, PnpGap };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

enum class PriorKind { Smoothing, Gaussian };

std::string prior_kind_name(PriorKind kind);
PriorKind prior_kind_from_name(const std::string& name);

enum class DeltaSchedule { Ramp, Constant };

struct ExperimentConfig {
  // Image source: a file path, or generated phantoms when image_file is empty.
  std::string image_file;
  PhantomKind phantom_kind = PhantomKind::SmoothBumps;
  Index phantom_size = 64;
  int phantom_count = 1;
  std::uint64_t phantom_seed = 7;

  std::vector<double> cr_list = {0.01, 0.05, 0.10, 0.20};
  std::vector<Method> methods = {Method::Pinv, Method::DdimFused};
  std::vector<std::uint64_t> seeds = {1};

  PriorKind prior = PriorKind::Smoothing;
  double smoothing_sigma_cap = 0.8;
  double gaussian_mean = 0.5;
  double gaussian_variance = 0.25;

  int T = 100;
  double zeta = 0.0;
  double lambda = 0.1;
  DeltaSchedule delta_schedule = DeltaSchedule::Ramp;
  double delta_constant = 0.5;

  int pnp_iterations = 30;
  double pnp_gamma = 1.0;
  double pnp_sigma_max = 0.8;
  double pnp_sigma_min = 0.01;

  SensorKind sensor_kind = SensorKind::OrthonormalRandom;
  std::uint64_t sensor_seed = 42;

  std::string output_dir = "out";

  void validate() const;  // throws std::invalid_argument
};

// Parses the flat key = value format ('#' comments, comma-separated lists).
// Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical serialization (sorted keys, round-trip number formatting); equal
// configs serialize identically regardless of how they were written.
std::string canonical_config_text(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace spirec
