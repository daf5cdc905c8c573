#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace spirec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Row-major vectorization: vec(X) stacks the rows of X, so that
/// vec(U X V^T) = (U kron V) vec(X). Every flat-vector view of a 2D
/// signal in this library uses this ordering.
inline Vector vec(const Matrix& X) {
  Vector x(X.size());
  Index k = 0;
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) x[k++] = X(i, j);
  return x;
}

inline Matrix unvec(const Vector& x, Index rows, Index cols) {
  if (x.size() != rows * cols)
    throw std::invalid_argument("unvec: vector length does not match target shape");
  Matrix X(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) X(i, j) = x[k++];
  return X;
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

inline bool all_finite(const Matrix& X) { return X.allFinite(); }
inline bool all_finite(const Vector& x) { return x.allFinite(); }

}  // namespace spirec
