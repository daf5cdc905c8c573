#include "spirec/sampler.hpp"

#include <cmath>
#include <functional>

namespace spirec {

namespace {

constexpr double kDivergenceLimit = 1e6;

struct GuidanceOps {
  std::function<Vector(const Vector& x0, int t)> correct;
  std::function<double(const Vector& x0c)> residual;
};

double schedule_delta(const ConsistencyConfig& cfg, const DiffusionSchedule& schedule, int t) {
  switch (cfg.mode) {
    case ConsistencyMode::Gap: return 0.0;
    case ConsistencyMode::Hqs: return 1.0;
    case ConsistencyMode::Fused: return schedule.delta[static_cast<std::size_t>(t)];
  }
  throw std::logic_error("unknown consistency mode");
}

SamplerState run_guided(Index n, const GuidanceOps& ops, const ScorePrior& prior,
                        const DiffusionSchedule& schedule, std::uint64_t rng_seed,
                        bool keep_trace) {
  schedule.validate();
  Rng rng(rng_seed);
  SamplerState state;
  state.t = schedule.T;
  state.x = rng.normal_vector(n);
  if (keep_trace) state.trace.reserve(static_cast<std::size_t>(schedule.T));

  for (int t = schedule.T; t >= 1; --t) {
    if (state.x.norm() > kDivergenceLimit)
      throw std::runtime_error("reconstruct: sampler diverged (||x_t|| > 1e6)");
    Vector x0 = tweedie_denoise(prior, state.x, t, schedule);
    Vector x0c = ops.correct(x0, t);
    if (keep_trace) state.trace.push_back({t, ops.residual(x0c), x0, x0c});
    state = ddim_step(std::move(state), x0c, schedule, rng);
  }
  return state;
}

}  // namespace

Vector forward_noise(const Vector& x0, int t, const DiffusionSchedule& schedule,
                     std::uint64_t rng_seed) {
  schedule.validate();
  if (t < 0 || t > schedule.T) throw std::invalid_argument("forward_noise: t out of range");
  if (t == 0) return x0;
  const double a = schedule.alpha_bar[static_cast<std::size_t>(t)];
  Rng rng(rng_seed);
  return std::sqrt(a) * x0 + std::sqrt(1.0 - a) * rng.normal_vector(x0.size());
}

SamplerState ddim_step(SamplerState state, const Vector& x0_corrected,
                       const DiffusionSchedule& schedule, Rng& rng) {
  const int t = state.t;
  if (t < 1) throw std::invalid_argument("ddim_step: no step possible at t = 0");
  if (t > schedule.T) throw std::invalid_argument("ddim_step: t exceeds schedule length");
  if (x0_corrected.size() != state.x.size())
    throw std::invalid_argument("ddim_step: estimate length mismatch");

  const auto i = static_cast<std::size_t>(t);
  const double a = schedule.alpha_bar[i];
  const double a_prev = schedule.alpha_bar[i - 1];

  Vector eps_hat = (state.x - std::sqrt(a) * x0_corrected) / std::sqrt(1.0 - a);
  Vector direction = schedule.w[i] * std::sqrt(1.0 - schedule.zeta) * eps_hat;
  if (schedule.zeta > 0.0)
    direction += std::sqrt(schedule.zeta) * rng.normal_vector(state.x.size());

  state.x = std::sqrt(a_prev) * x0_corrected + std::sqrt(1.0 - a_prev) * direction;
  state.t = t - 1;
  return state;
}

SamplerState reconstruct(const Vector& y, const DenseSensor& sensor, const ScorePrior& prior,
                         const DiffusionSchedule& schedule, const ConsistencyConfig& cfg,
                         std::uint64_t rng_seed, bool keep_trace) {
  cfg.validate();
  if (y.size() != sensor.rows()) throw std::invalid_argument("reconstruct: measurement length mismatch");

  GuidanceOps ops;
  ops.correct = [&](const Vector& x0, int t) {
    ConsistencyConfig step = cfg;
    step.mode = ConsistencyMode::Fused;
    step.delta = schedule_delta(cfg, schedule, t);
    return fused_update(sensor, x0, y, step);
  };
  ops.residual = [&](const Vector& x0c) { return (y - sensor.apply(x0c)).norm(); };
  return run_guided(sensor.cols(), ops, prior, schedule, rng_seed, keep_trace);
}

SamplerState reconstruct(const Matrix& Y, const SeparableSensor& sensor, const ScorePrior& prior,
                         const DiffusionSchedule& schedule, const ConsistencyConfig& cfg,
                         std::uint64_t rng_seed, bool keep_trace) {
  cfg.validate();
  if (Y.rows() != sensor.sqrt_m() || Y.cols() != sensor.sqrt_m())
    throw std::invalid_argument("reconstruct: measurement shape mismatch");
  if (!sensor.orthogonal_rows() && cfg.mode != ConsistencyMode::Gap)
    throw std::invalid_argument(
        "reconstruct: non-orthogonal separable sensors support only Gap mode");

  const Index side = sensor.sqrt_n();
  GuidanceOps ops;
  ops.correct = [&](const Vector& x0, int t) {
    Matrix X0 = unvec(x0, side, side);
    Matrix X0c;
    if (sensor.orthogonal_rows()) {
      ConsistencyConfig step = cfg;
      step.mode = ConsistencyMode::Fused;
      step.delta = schedule_delta(cfg, schedule, t);
      X0c = fused_update_separable(sensor, X0, Y, step);
    } else {
      X0c = gap_update(sensor, X0, Y);
    }
    return vec(X0c);
  };
  ops.residual = [&](const Vector& x0c) {
    return (Y - sensor.apply(unvec(x0c, side, side))).norm();
  };
  return run_guided(side * side, ops, prior, schedule, rng_seed, keep_trace);
}

}  // namespace spirec
