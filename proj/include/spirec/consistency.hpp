#pragma once

#include "spirec/sensing.hpp"

namespace spirec {

enum class ConsistencyMode { Gap, Hqs, Fused };

/// Parameters of the data-consistency step applied to a denoised estimate.
/// lambda weighs the regularized least-squares (HQS) side; delta in [0, 1]
/// blends the hard back-projection (GAP, delta = 0) with it (HQS, delta = 1).
struct ConsistencyConfig {
  double lambda = 1.0;
  double delta = 0.0;
  ConsistencyMode mode = ConsistencyMode::Fused;

  void validate() const;

  /// Gap and Hqs modes pin the blend to their endpoint; Fused uses delta.
  double effective_delta() const;
};

/// Back-projection onto the affine constraint set {x : H x = y}:
///   x' = x0 + H^+ (y - H x0)
Vector gap_update(const DenseSensor& sensor, const Vector& x0, const Vector& y);
Matrix gap_update(const SeparableSensor& sensor, const Matrix& X0, const Matrix& Y);

/// Regularized least squares toward the measurements:
///   x' = (H^T H + lambda I)^{-1} (H^T y + lambda x0)
/// The dense solve runs in the m x m Gram form when m < n. The separable
/// form requires row-orthogonal sensors, where the solve collapses to a
/// residual back-projection with gain 1/(1+lambda).
Vector hqs_update(const DenseSensor& sensor, const Vector& x0, const Vector& y, double lambda);
Matrix hqs_update(const SeparableSensor& sensor, const Matrix& X0, const Matrix& Y, double lambda);

/// Convex combination (1-delta) * gap + delta * hqs. The endpoints reuse the
/// constituent updates verbatim.
Vector fused_update(const DenseSensor& sensor, const Vector& x0, const Vector& y,
                    const ConsistencyConfig& cfg);

/// Fast separable form of the fused update, valid only for row-orthogonal
/// sensors, where the blend collapses exactly to
///   X' = X0 + rho U^T (Y - U X0 V^T) V,   rho = 1 - lambda*delta/(1+lambda).
Matrix fused_update_separable(const SeparableSensor& sensor, const Matrix& X0, const Matrix& Y,
                              const ConsistencyConfig& cfg);

/// The back-projection gain of the separable fused update.
double fused_gain(double lambda, double delta);

}  // namespace spirec
