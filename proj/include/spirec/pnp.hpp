#pragma once

#include "spirec/consistency.hpp"
#include "spirec/priors.hpp"

#include <vector>

namespace spirec {

enum class PnpVariant { Hqs, Gap };

/// Classical alternating solve: K rounds of a consistency step followed by
/// the plug-in denoiser at sigma_schedule[k]. gamma is the HQS penalty; the
/// Gap variant projects exactly onto {x : H x = y} each round. Fixed K, no
/// early exit.
struct PnpConfig {
  int iterations = 30;
  double gamma = 1.0;
  std::vector<double> sigma_schedule;  // size == iterations, non-increasing
  PnpVariant variant = PnpVariant::Gap;

  void validate() const;
};

/// Geometric decay from sigma_max down to sigma_min over K entries.
std::vector<double> geometric_sigma_schedule(int iterations, double sigma_max = 0.2,
                                             double sigma_min = 0.01);

/// x_init defaults to the pseudoinverse image of y. The HQS consistency
/// step reuses the regularized solve with lambda = gamma.
Vector pnp_solve(const Vector& y, const DenseSensor& sensor, const DenoiserAdapter& denoiser,
                 const PnpConfig& cfg, const Vector* x_init = nullptr);
Matrix pnp_solve(const Matrix& Y, const SeparableSensor& sensor, const DenoiserAdapter& denoiser,
                 const PnpConfig& cfg, const Matrix* x_init = nullptr);

}  // namespace spirec
