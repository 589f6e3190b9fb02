#pragma once

// Brute-force 2^m-dimensional reference implementation under the Jordan-Wigner encoding
//   gamma_{2i-1} = Z^{(x)(i-1)} X I..., gamma_{2i} = Z^{(x)(i-1)} Y I...
// Mode 1 is the most significant bit of a basis index. Intended for tests and the verify
// subcommand; every entry point enforces a hard mode-count guard.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "fshadow/gaussian.hpp"
#include "fshadow/majorana.hpp"
#include "fshadow/rng.hpp"

namespace fshadow::dense {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr int kMaxGammaModes = 10;
constexpr int kMaxUnitaryModes = 6;
constexpr int kMaxFullChannelModes = 3;
constexpr int kMaxMatchingChannelModes = 4;

std::size_t basis_index(const Bits& b);
Bits bits_of_index(std::size_t index, int m);

Matrix majorana(int m, int j);
Matrix gamma_dense(int m, const IndexSeq& mu);
/// (-i)^{k(k-1)/2} gamma_{raw_1} ... gamma_{raw_k} in the given order.
Matrix gamma_raw_dense(int m, std::span<const int> raw);
Matrix annihilation(int m, int mode);
Matrix parity(int m);
Matrix basis_projector(const Bits& b);
/// diag(1,z_1) (x) ... (x) diag(1,z_m)
Matrix diag_operator(std::span<const std::complex<double>> z);
/// (|0><1|)^{n} (x) B_{n+1} (x) ... (x) B_m with B_i = diag(1, z_i).
Matrix xtype_operator(int m, int n, std::span<const std::complex<double>> z);

/// A unitary with U gamma_j U^dag = gamma_{p(j)}, as a product of Majorana reflections.
Matrix unitary_of_permutation_dense(const MajoranaPermutation& p);

/// Measure-and-reprepare channel averaged over an explicit list of bases U(p).
class Channel {
 public:
  Channel(int m, std::vector<MajoranaPermutation> bases);
  static Channel full(int m);       ///< all (2m)! permutations, m <= 3
  static Channel matchings(int m);  ///< one representative per matching, m <= 4

  int m() const { return m_; }
  std::size_t ensemble_size() const { return unitaries_.size(); }
  Matrix apply(const Matrix& A) const;
  /// Pseudo-inverse of the superoperator applied to A.
  Matrix apply_inverse(const Matrix& A) const;
  const Matrix& superoperator() const { return super_; }
  /// U(p)^dag |b><b| U(p) for the i-th basis.
  Matrix snapshot(std::size_t basis, const Bits& b) const;
  const Matrix& unitary(std::size_t basis) const { return unitaries_[basis]; }
  /// E[(Tr[M^{-1}(H) snapshot])^2] under rho, summed exactly over bases and outcomes.
  double second_moment(const Matrix& H, const Matrix& rho) const;

 private:
  int m_;
  std::vector<Matrix> unitaries_;
  Matrix super_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
};

/// Second moment under the full permutation ensemble, m <= 3.
double second_moment_dense(int m, const Matrix& H, const Matrix& rho);

Matrix operator_of(const CoefficientMap& c);
/// Real parts of 2^{-m} Tr[Gamma_mu A] above `tol`, for Hermitian A. m <= 8.
CoefficientMap coefficients_of(const Matrix& A, double tol = 1e-14);
/// Complex coefficients 2^{-m} Tr[Gamma_mu A] above `tol`. m <= 8.
std::map<IndexSeq, std::complex<double>> complex_coefficients_of(const Matrix& A, double tol = 1e-14);

/// M_jk = Tr[rho Gamma_(j,k)].
Eigen::MatrixXd covariance_from_dense(const Matrix& rho);
/// exp(sum_{a<b} theta_ab gamma_a gamma_b / 2) with random real theta.
Matrix random_gaussian_unitary(int m, Rng& rng);
/// Random Gaussian state W rho_0 W^dag, rho_0 a pure basis state or a product of random
/// diagonal single-mode states.
Matrix random_gaussian_state(int m, Rng& rng, bool pure);
Vector slater_state(const SlaterDescriptor& s);
Eigen::VectorXd born_distribution(const Matrix& rho);
/// Random Hermitian operator with support on even Majorana monomials.
Matrix random_even_hermitian(int m, Rng& rng);

}  // namespace fshadow::dense
