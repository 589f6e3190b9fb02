#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace fshadow {

/// Pfaffian of an antisymmetric matrix by Parlett-Reid elimination with partial pivoting,
/// O(d^3). The sign is exact (no square root of a determinant). Odd dimension gives 0.
/// The argument is taken by value and used as workspace.
template <typename Scalar>
Scalar pfaffian(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("pfaffian: matrix must be square");
  if (n % 2) return Scalar(0);
  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      pf = -pf;
    }
    if (A(k + 1, k) == Scalar(0)) return Scalar(0);
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = A.row(k).tail(r).transpose() / A(k, k + 1);
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = A.col(k + 1).tail(r);
      A.bottomRightCorner(r, r).noalias() += tau * col.transpose();
      A.bottomRightCorner(r, r).noalias() -= col * tau.transpose();
    }
  }
  return pf;
}

inline double pfaffian(const Eigen::MatrixXd& A) { return pfaffian<double>(A); }
inline std::complex<double> pfaffian(const Eigen::MatrixXcd& A) {
  return pfaffian<std::complex<double>>(A);
}

}  // namespace fshadow
