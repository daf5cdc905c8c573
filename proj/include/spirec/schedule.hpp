#pragma once

#include <stdexcept>
#include <vector>

namespace spirec {

/// Discrete diffusion schedule. alpha_bar[t] is the cumulative noise-decay
/// product at timestep t (alpha_bar[0] = 1); sigma, w and delta are indexed
/// 1..T with slot 0 unused. zeta in [0, 1] sets the stochastic share of the
/// re-noising direction; sigma stores the equivalent per-step noise scale
/// sigma[t] = sqrt(zeta * (1 - alpha_bar[t-1])), so the one-line sampler
/// update and the staged one describe the same process.
struct DiffusionSchedule {
  int T = 0;
  std::vector<double> alpha_bar;  // size T+1
  std::vector<double> sigma;      // size T+1, [0] unused
  std::vector<double> w;          // size T+1, [0] unused
  std::vector<double> delta;      // size T+1, [0] unused
  double zeta = 0.0;

  void validate() const;
};

/// Linear beta schedule on [beta_min, beta_max] with
/// alpha_bar[t] = prod_{s<=t} (1 - beta_s). Deterministic mode (stochastic =
/// false) zeroes sigma and zeta and sets w to 1. The fusion weights delta
/// default to a linear ramp from 0 at t = T (hard projection early) to 1 at
/// t = 1 (soft consistency late).
DiffusionSchedule build_schedule(int T, double beta_min = 1e-3, double beta_max = 0.2,
                                 double zeta = 0.0, bool stochastic = false);

/// Step size sqrt((1 - alpha_bar[t-1] - sigma_t^2)(1 - alpha_bar[t]) / alpha_bar[t])
/// of the gradient-form consistency step. Exposed for inspection only; the
/// sampler applies full proximal updates instead of scaling by it.
double mu_step_size(const DiffusionSchedule& schedule, int t);

}  // namespace spirec
