#include "spirec/schedule.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace spirec {

void DiffusionSchedule::validate() const {
  if (T < 1) throw std::invalid_argument("DiffusionSchedule: T must be >= 1");
  const auto expected = static_cast<std::size_t>(T) + 1;
  if (alpha_bar.size() != expected || sigma.size() != expected || w.size() != expected ||
      delta.size() != expected)
    throw std::invalid_argument("DiffusionSchedule: sequence lengths must equal T + 1");
  if (alpha_bar[0] != 1.0) throw std::invalid_argument("DiffusionSchedule: alpha_bar[0] must be 1");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("DiffusionSchedule: zeta must lie in [0, 1]");
  for (int t = 1; t <= T; ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (!(alpha_bar[i] > 0.0 && alpha_bar[i] < alpha_bar[i - 1]))
      throw std::invalid_argument("DiffusionSchedule: alpha_bar must be strictly decreasing and positive");
    if (sigma[i] < 0.0) throw std::invalid_argument("DiffusionSchedule: sigma must be non-negative");
    if (1.0 - alpha_bar[i - 1] - sigma[i] * sigma[i] < -1e-12)
      throw std::invalid_argument("DiffusionSchedule: sigma[" + std::to_string(t) +
                                  "] exceeds the re-noising budget 1 - alpha_bar[t-1]");
    if (!(delta[i] >= 0.0 && delta[i] <= 1.0))
      throw std::invalid_argument("DiffusionSchedule: delta must lie in [0, 1]");
  }
}

DiffusionSchedule build_schedule(int T, double beta_min, double beta_max, double zeta,
                                 bool stochastic) {
  if (T < 1) throw std::invalid_argument("build_schedule: T must be >= 1");
  if (!(beta_min > 0.0 && beta_min <= beta_max && beta_max < 1.0))
    throw std::invalid_argument("build_schedule: need 0 < beta_min <= beta_max < 1");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("build_schedule: zeta must lie in [0, 1]");

  DiffusionSchedule s;
  s.T = T;
  s.zeta = stochastic ? zeta : 0.0;
  const auto len = static_cast<std::size_t>(T) + 1;
  s.alpha_bar.assign(len, 1.0);
  s.sigma.assign(len, 0.0);
  s.w.assign(len, 1.0);
  s.delta.assign(len, 0.0);

  for (int t = 1; t <= T; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const double beta =
        (T == 1) ? beta_min
                 : beta_min + (beta_max - beta_min) * static_cast<double>(t - 1) / static_cast<double>(T - 1);
    s.alpha_bar[i] = s.alpha_bar[i - 1] * (1.0 - beta);
    if (s.zeta > 0.0) s.sigma[i] = std::sqrt(s.zeta * (1.0 - s.alpha_bar[i - 1]));
    s.delta[i] = (T == 1) ? 0.0 : static_cast<double>(T - t) / static_cast<double>(T - 1);
  }
  s.validate();
  return s;
}

double mu_step_size(const DiffusionSchedule& schedule, int t) {
  schedule.validate();
  if (t < 1 || t > schedule.T) throw std::invalid_argument("mu_step_size: t out of range");
  const auto i = static_cast<std::size_t>(t);
  const double a_prev = schedule.alpha_bar[i - 1];
  const double a = schedule.alpha_bar[i];
  const double budget = std::max(0.0, 1.0 - a_prev - schedule.sigma[i] * schedule.sigma[i]);
  return std::sqrt(budget * (1.0 - a) / a);
}

}  // namespace spirec
