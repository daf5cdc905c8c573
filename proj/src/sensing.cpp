#include "spirec/sensing.hpp"

#include "spirec/rng.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace spirec {

namespace {

constexpr double kOrthogonalityTol = 1e-10;

bool rows_orthonormal(const Matrix& A) {
  Matrix G = A * A.transpose();
  G.diagonal().array() -= 1.0;
  return G.cwiseAbs().maxCoeff() <= kOrthogonalityTol;
}

// U^T (U U^T)^{-1}, with Cholesky failure reported as a rank error.
Matrix pinv_factor(const Matrix& A, const char* name) {
  Eigen::LLT<Matrix> llt(A * A.transpose());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(std::string(name) + " is rank deficient: Cholesky of the Gram matrix failed");
  Matrix rhs = A;  // solve (A A^T) W = A, then pinv = W^T
  return llt.solve(rhs).transpose();
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Sylvester-Hadamard row, entry (r, c) = parity of popcount(r & c).
double hadamard_entry(Index r, Index c) {
  return (__builtin_popcountll(static_cast<unsigned long long>(r & c)) & 1) ? -1.0 : 1.0;
}

Matrix build_orthonormal_random(Index sqrt_m, Index sqrt_n, Rng& rng) {
  Matrix G(sqrt_n, sqrt_m);
  for (Index j = 0; j < sqrt_m; ++j)
    for (Index i = 0; i < sqrt_n; ++i) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(sqrt_n, sqrt_m);
  return Q.transpose();  // rows orthonormal
}

Matrix build_scrambled_hadamard(Index sqrt_m, Index sqrt_n, Rng& rng) {
  std::vector<Index> rows(static_cast<std::size_t>(sqrt_n));
  std::iota(rows.begin(), rows.end(), Index{0});
  for (std::size_t i = rows.size() - 1; i > 0; --i)
    std::swap(rows[i], rows[rng.uniform_index(i + 1)]);

  std::vector<Index> cols(static_cast<std::size_t>(sqrt_n));
  std::iota(cols.begin(), cols.end(), Index{0});
  for (std::size_t i = cols.size() - 1; i > 0; --i)
    std::swap(cols[i], cols[rng.uniform_index(i + 1)]);

  std::vector<double> sign(static_cast<std::size_t>(sqrt_n));
  for (auto& s : sign) s = (rng.next_u64() & 1) ? -1.0 : 1.0;

  const double scale = 1.0 / std::sqrt(static_cast<double>(sqrt_n));
  Matrix A(sqrt_m, sqrt_n);
  for (Index i = 0; i < sqrt_m; ++i)
    for (Index j = 0; j < sqrt_n; ++j)
      A(i, j) = scale * sign[static_cast<std::size_t>(j)] *
                hadamard_entry(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  return A;
}

}  // namespace

DenseSensor::DenseSensor(Matrix H) : H_(std::move(H)) {
  if (H_.rows() == 0 || H_.cols() == 0) throw std::invalid_argument("DenseSensor: empty matrix");
  // Factor the smaller Gram matrix: H H^T when wide, H^T H when tall. Either
  // factorization failing means H lacks full rank.
  if (H_.rows() <= H_.cols())
    gram_llt_.compute(H_ * H_.transpose());
  else
    gram_llt_.compute(H_.transpose() * H_);
  if (gram_llt_.info() != Eigen::Success)
    throw std::runtime_error("DenseSensor: H is rank deficient: Cholesky of its Gram matrix failed");
}

Vector DenseSensor::apply(const Vector& x) const {
  if (x.size() != H_.cols()) throw std::invalid_argument("DenseSensor::apply: length mismatch");
  return H_ * x;
}

Vector DenseSensor::apply_adjoint(const Vector& y) const {
  if (y.size() != H_.rows()) throw std::invalid_argument("DenseSensor::apply_adjoint: length mismatch");
  return H_.transpose() * y;
}

Vector DenseSensor::pinv_apply(const Vector& y) const {
  if (y.size() != H_.rows()) throw std::invalid_argument("DenseSensor::pinv_apply: length mismatch");
  if (H_.rows() <= H_.cols()) return H_.transpose() * gram_llt_.solve(y);
  return gram_llt_.solve(H_.transpose() * y);  // least-squares inverse of a tall H
}

Vector DenseSensor::gram_solve(const Vector& r, double shift) const {
  if (r.size() != H_.rows()) throw std::invalid_argument("DenseSensor::gram_solve: length mismatch");
  if (shift == 0.0) {
    if (H_.rows() > H_.cols())
      throw std::runtime_error("DenseSensor::gram_solve: H H^T is singular for a tall H");
    return gram_llt_.solve(r);
  }
  Matrix G = H_ * H_.transpose();
  G.diagonal().array() += shift;
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("DenseSensor::gram_solve: shifted Gram matrix is not positive definite");
  return llt.solve(r);
}

SeparableSensor::SeparableSensor(Matrix U, Matrix V, SensorKind kind, std::uint64_t seed)
    : U_(std::move(U)), V_(std::move(V)), kind_(kind), seed_(seed) {
  if (U_.rows() != V_.rows() || U_.cols() != V_.cols())
    throw std::invalid_argument("SeparableSensor: U and V must share the same shape");
  if (U_.rows() > U_.cols())
    throw std::invalid_argument("SeparableSensor: more measurement rows than signal columns");
  pinv_u_ = pinv_factor(U_, "SeparableSensor: U");
  pinv_v_ = pinv_factor(V_, "SeparableSensor: V");
  orthogonal_rows_ = rows_orthonormal(U_) && rows_orthonormal(V_);
}

double SeparableSensor::compression_ratio() const {
  const double m = static_cast<double>(sqrt_m());
  const double n = static_cast<double>(sqrt_n());
  return (m * m) / (n * n);
}

Matrix SeparableSensor::apply(const Matrix& X) const {
  if (X.rows() != sqrt_n() || X.cols() != sqrt_n())
    throw std::invalid_argument("SeparableSensor::apply: X must be sqrt_n x sqrt_n");
  return U_ * X * V_.transpose();
}

Matrix SeparableSensor::adjoint(const Matrix& Y) const {
  if (Y.rows() != sqrt_m() || Y.cols() != sqrt_m())
    throw std::invalid_argument("SeparableSensor::adjoint: Y must be sqrt_m x sqrt_m");
  return U_.transpose() * Y * V_;
}

Matrix SeparableSensor::pinv_apply(const Matrix& Y) const {
  if (Y.rows() != sqrt_m() || Y.cols() != sqrt_m())
    throw std::invalid_argument("SeparableSensor::pinv_apply: Y must be sqrt_m x sqrt_m");
  return pinv_u_ * Y * pinv_v_.transpose();
}

SeparableSensor build_separable_sensor(Index sqrt_m, Index sqrt_n, SensorKind kind,
                                       std::uint64_t seed) {
  if (sqrt_m < 1 || sqrt_n < 1) throw std::invalid_argument("build_separable_sensor: dimensions must be positive");
  if (sqrt_m > sqrt_n) throw std::invalid_argument("build_separable_sensor: sqrt_m must not exceed sqrt_n");

  Rng rng(seed);
  Matrix U, V;
  switch (kind) {
    case SensorKind::OrthonormalRandom:
      U = build_orthonormal_random(sqrt_m, sqrt_n, rng);
      V = build_orthonormal_random(sqrt_m, sqrt_n, rng);
      break;
    case SensorKind::ScrambledHadamard:
      if (!is_power_of_two(sqrt_n))
        throw std::invalid_argument("build_separable_sensor: scrambled-hadamard requires sqrt_n to be a power of two");
      U = build_scrambled_hadamard(sqrt_m, sqrt_n, rng);
      V = build_scrambled_hadamard(sqrt_m, sqrt_n, rng);
      break;
    case SensorKind::Explicit:
      throw std::invalid_argument("build_separable_sensor: explicit sensors are constructed from matrices");
  }
  return SeparableSensor(std::move(U), std::move(V), kind, seed);
}

DenseSensor densify(const SeparableSensor& sensor, VecOrder order) {
  if (sensor.sqrt_n() > 32)
    throw std::invalid_argument("densify: sqrt_n exceeds the 32 densification guard; use the separable path");
  Matrix H = (order == VecOrder::RowMajor) ? kron(sensor.U(), sensor.V())
                                           : kron(sensor.V(), sensor.U());
  return DenseSensor(std::move(H));
}

}  // namespace spirec
