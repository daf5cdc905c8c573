#pragma once

#include "spirec/consistency.hpp"
#include "spirec/priors.hpp"
#include "spirec/rng.hpp"
#include "spirec/schedule.hpp"

#include <cstdint>
#include <vector>

namespace spirec {

/// One completed guidance step: the raw denoised estimate, its corrected
/// version and the measurement residual ||y - H x0_corrected||.
struct TraceRow {
  int t = 0;
  double residual = 0.0;
  Vector x0;
  Vector x0_corrected;
};

struct SamplerState {
  Vector x;
  int t = 0;
  std::vector<TraceRow> trace;
};

/// Forward noising x_t = sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) z with
/// z standard normal from a generator seeded with rng_seed. t = 0 returns x0.
Vector forward_noise(const Vector& x0, int t, const DiffusionSchedule& schedule,
                     std::uint64_t rng_seed);

/// One reverse step from the corrected clean estimate:
///   eps_hat = (x_t - sqrt(alpha_bar_t) x0c) / sqrt(1 - alpha_bar_t)
///   x_{t-1} = sqrt(alpha_bar_{t-1}) x0c
///           + sqrt(1 - alpha_bar_{t-1}) (w_t sqrt(1-zeta) eps_hat + sqrt(zeta) eps)
/// eps is drawn from rng only when zeta > 0; with zeta = 0 and w = 1 the
/// update is deterministic. The state's trace is carried through unchanged.
SamplerState ddim_step(SamplerState state, const Vector& x0_corrected,
                       const DiffusionSchedule& schedule, Rng& rng);

/// Full guided sampling run: x_T ~ N(0, I) seeded by rng_seed, then for
/// t = T..1 denoise (Tweedie), correct (fused consistency; the mode in cfg
/// selects hard, soft or blended, with mode Fused following the schedule's
/// per-step delta), and re-noise. Latents evolve unclamped. Aborts when
/// ||x_t|| exceeds 1e6.
SamplerState reconstruct(const Vector& y, const DenseSensor& sensor, const ScorePrior& prior,
                         const DiffusionSchedule& schedule, const ConsistencyConfig& cfg,
                         std::uint64_t rng_seed, bool keep_trace = false);

/// Separable variant; the state vector is the row-major vec of the image.
/// Row-orthogonal sensors use the collapsed fused update; non-orthogonal
/// sensors are only valid in Gap mode (general back-projection).
SamplerState reconstruct(const Matrix& Y, const SeparableSensor& sensor, const ScorePrior& prior,
                         const DiffusionSchedule& schedule, const ConsistencyConfig& cfg,
                         std::uint64_t rng_seed, bool keep_trace = false);

}  // namespace spirec
