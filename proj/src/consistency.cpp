#include "spirec/consistency.hpp"

namespace spirec {

void ConsistencyConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("ConsistencyConfig: lambda must be positive");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("ConsistencyConfig: delta must lie in [0, 1]");
}

double ConsistencyConfig::effective_delta() const {
  switch (mode) {
    case ConsistencyMode::Gap: return 0.0;
    case ConsistencyMode::Hqs: return 1.0;
    case ConsistencyMode::Fused: return delta;
  }
  throw std::logic_error("ConsistencyConfig: unknown mode");
}

double fused_gain(double lambda, double delta) { return 1.0 - lambda * delta / (1.0 + lambda); }

Vector gap_update(const DenseSensor& sensor, const Vector& x0, const Vector& y) {
  return x0 + sensor.pinv_apply(y - sensor.apply(x0));
}

Matrix gap_update(const SeparableSensor& sensor, const Matrix& X0, const Matrix& Y) {
  return X0 + sensor.pinv_apply(Y - sensor.apply(X0));
}

Vector hqs_update(const DenseSensor& sensor, const Vector& x0, const Vector& y, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("hqs_update: lambda must be positive");
  const Matrix& H = sensor.matrix();
  const Index m = H.rows();
  const Index n = H.cols();
  Vector b = H.transpose() * y + lambda * x0;
  if (m < n) {
    // Woodbury: (H^T H + lambda I)^{-1} b = (b - H^T (H H^T + lambda I)^{-1} H b) / lambda
    return (b - sensor.apply_adjoint(sensor.gram_solve(H * b, lambda))) / lambda;
  }
  Matrix A = H.transpose() * H;
  A.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("hqs_update: normal matrix is not positive definite");
  return llt.solve(b);
}

Matrix hqs_update(const SeparableSensor& sensor, const Matrix& X0, const Matrix& Y, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("hqs_update: lambda must be positive");
  if (!sensor.orthogonal_rows())
    throw std::invalid_argument("hqs_update: separable form requires a row-orthogonal sensor");
  // With H H^T = I the solve collapses to x0 + H^T (y - H x0) / (1 + lambda).
  return X0 + sensor.adjoint(Y - sensor.apply(X0)) / (1.0 + lambda);
}

Vector fused_update(const DenseSensor& sensor, const Vector& x0, const Vector& y,
                    const ConsistencyConfig& cfg) {
  cfg.validate();
  const double d = cfg.effective_delta();
  if (d == 0.0) return gap_update(sensor, x0, y);
  if (d == 1.0) return hqs_update(sensor, x0, y, cfg.lambda);
  Vector g = gap_update(sensor, x0, y);
  Vector h = hqs_update(sensor, x0, y, cfg.lambda);
  return (1.0 - d) * g + d * h;
}

Matrix fused_update_separable(const SeparableSensor& sensor, const Matrix& X0, const Matrix& Y,
                              const ConsistencyConfig& cfg) {
  cfg.validate();
  if (!sensor.orthogonal_rows())
    throw std::invalid_argument("fused_update_separable: sensor is not row-orthogonal; the fast path is invalid");
  const double rho = fused_gain(cfg.lambda, cfg.effective_delta());
  return X0 + rho * sensor.adjoint(Y - sensor.apply(X0));
}

}  // namespace spirec
