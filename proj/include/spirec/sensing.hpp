#pragma once

#include "spirec/core.hpp"

#include <Eigen/Cholesky>

#include <cstdint>

namespace spirec {

/// Explicit m x n forward operator. Construction factors the smaller Gram
/// matrix (H H^T when m <= n, H^T H otherwise) by Cholesky; a factorization
/// failure is reported as a rank error, so every live DenseSensor has full
/// rank and a usable pseudoinverse.
class DenseSensor {
 public:
  explicit DenseSensor(Matrix H);

  const Matrix& matrix() const { return H_; }
  Index rows() const { return H_.rows(); }
  Index cols() const { return H_.cols(); }

  /// y = H x
  Vector apply(const Vector& x) const;

  /// H^T y
  Vector apply_adjoint(const Vector& y) const;

  /// Moore-Penrose pseudoinverse image of y: H^T (H H^T)^{-1} y for a wide H,
  /// (H^T H)^{-1} H^T y for a tall one.
  Vector pinv_apply(const Vector& y) const;

  /// Solves (H H^T + shift I) w = r. shift = 0 reuses the cached factor and
  /// requires m <= n; positive shifts factor the regularized Gram matrix
  /// fresh, which is positive definite for any shape.
  Vector gram_solve(const Vector& r, double shift = 0.0) const;

 private:
  Matrix H_;
  Eigen::LLT<Matrix> gram_llt_;  // of the smaller Gram matrix
};

enum class SensorKind { OrthonormalRandom, ScrambledHadamard, Explicit };
enum class VecOrder { RowMajor, ColMajor };

/// Separable 2D sensor: measurements are Y = U X V^T, the implicit dense
/// operator being H = U kron V under the row-major vec convention of
/// core.hpp. U and V must have full row rank; pseudoinverse factors
/// U^T (U U^T)^{-1} and V^T (V V^T)^{-1} are cached at construction.
/// Immutable and safe to share across concurrent reconstructions.
class SeparableSensor {
 public:
  SeparableSensor(Matrix U, Matrix V, SensorKind kind = SensorKind::Explicit,
                  std::uint64_t seed = 0);

  const Matrix& U() const { return U_; }
  const Matrix& V() const { return V_; }
  Index sqrt_m() const { return U_.rows(); }
  Index sqrt_n() const { return U_.cols(); }
  SensorKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  /// True when ||U U^T - I||_max and ||V V^T - I||_max are both <= 1e-10.
  bool orthogonal_rows() const { return orthogonal_rows_; }

  /// M / N with M = sqrt_m^2, N = sqrt_n^2.
  double compression_ratio() const;

  /// Y = U X V^T
  Matrix apply(const Matrix& X) const;

  /// U^T Y V, the adjoint of apply under the Frobenius inner product.
  Matrix adjoint(const Matrix& Y) const;

  /// Pseudoinverse image of Y: U^+ Y (V^+)^T, i.e. unvec(H^+ vec(Y)).
  Matrix pinv_apply(const Matrix& Y) const;

 private:
  Matrix U_, V_;
  Matrix pinv_u_, pinv_v_;  // U^T (U U^T)^{-1}, V^T (V V^T)^{-1}
  SensorKind kind_;
  std::uint64_t seed_;
  bool orthogonal_rows_;
};

/// Builds a row-orthonormal separable sensor. orthonormal-random draws a
/// Gaussian matrix and orthonormalizes its rows; scrambled-hadamard takes a
/// random row subset of a Sylvester Hadamard matrix with permuted and
/// sign-flipped columns (entries +-1/sqrt(sqrt_n)), which requires sqrt_n to
/// be a power of two. Deterministic for a fixed seed.
SeparableSensor build_separable_sensor(Index sqrt_m, Index sqrt_n, SensorKind kind,
                                       std::uint64_t seed);

/// Expands the Kronecker operator explicitly: row-major order yields
/// H = U kron V with H vec(X) = vec(U X V^T); column-major order yields
/// V kron U, matching column-stacked vectorization. Guarded to sqrt_n <= 32.
DenseSensor densify(const SeparableSensor& sensor, VecOrder order = VecOrder::RowMajor);

}  // namespace spirec
