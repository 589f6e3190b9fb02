#pragma once

// Fermionic Gaussian states in the Majorana covariance representation
//   M_jk = Tr[rho Gamma_(j,k)] = -i <gamma_j gamma_k>   (j != k),
// so an empty mode i has M_{2i-1,2i} = +1 and an occupied one -1, and
// p(n_i = 0) = (1 + M_{2i-1,2i}) / 2. For even mu, Tr[rho Gamma_mu] = Pf(M[mu, mu]).

#include <complex>
#include <span>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "fshadow/majorana.hpp"
#include "fshadow/rng.hpp"

namespace fshadow {

class CovarianceState {
 public:
  /// Throws std::invalid_argument unless square, even-sized and antisymmetric to `tol`.
  explicit CovarianceState(Eigen::MatrixXd M, double tol = 1e-10);

  static CovarianceState vacuum(int m);
  static CovarianceState basis_state(const Bits& x);

  int m() const { return static_cast<int>(M_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return M_; }
  /// 1-based entry.
  double operator()(int j, int k) const { return M_(j - 1, k - 1); }
  bool is_pure(double tol = 1e-10) const;
  /// Largest singular value at most 1 + tol.
  bool is_physical(double tol = 1e-10) const;

 private:
  Eigen::MatrixXd M_;
};

/// n-electron Slater determinant b_1^dag ... b_n^dag |0>, b_i = sum_j U_ij a_j.
class SlaterDescriptor {
 public:
  /// Throws std::invalid_argument unless U is m x m unitary to 1e-10 and 0 <= n <= m.
  SlaterDescriptor(int n, Eigen::MatrixXcd U);

  int m() const { return static_cast<int>(U_.rows()); }
  int n() const { return n_; }
  const Eigen::MatrixXcd& U() const { return U_; }

 private:
  int n_;
  Eigen::MatrixXcd U_;
};

/// {"m", "n", "U": row-major list of [re, im]}.
nlohmann::json to_json(const SlaterDescriptor& s);
SlaterDescriptor slater_from_json(const nlohmann::json& j);

/// Orthogonal Q with V gamma_a V^dag = sum_c Q_ac gamma_c for the orbital rotation
/// V a_i V^dag = sum_j U_ij a_j.
Eigen::MatrixXd majorana_rotation(const Eigen::MatrixXcd& U);

/// Covariance of W rho W^dag for a Gaussian unitary with W gamma_a W^dag = sum_c R_ac gamma_c.
CovarianceState rotate(const CovarianceState& st, const Eigen::MatrixXd& R);

CovarianceState covariance_of_slater(const SlaterDescriptor& s);

/// Correlation matrix C(j,i) = <a_i^dag a_j> (0-based storage), which is U^dag Pi U for a
/// Slater determinant.
Eigen::MatrixXcd correlation_matrix(const CovarianceState& st);

/// U(p) rho U(p)^dag.
CovarianceState apply_permutation(const CovarianceState& st, const MajoranaPermutation& p);

/// Orthogonal R with R^T M_vac R = M for a pure state M, i.e. the state is W|0> for the
/// Gaussian unitary W gamma_a W^dag = sum_c R_ac gamma_c. Built by an M-adapted Gram-Schmidt.
Eigen::MatrixXd reference_rotation(const CovarianceState& pure_state);

/// Projects mode `mode` (1-based) onto occupation `bit` in place. Returns the outcome
/// probability (clamped to [0,1] within 1e-9; NumericalError beyond that). A zero-probability
/// outcome leaves the remaining entries unspecified.
double condition_on_mode(Eigen::MatrixXd& M, int mode, int bit);

struct Conditioned {
  double probability;
  CovarianceState state;
};
Conditioned condition_on_mode(const CovarianceState& st, int mode, int bit);

/// Computational-basis measurement, O(m^3).
Bits sample_bits(const CovarianceState& st, Rng& rng);

/// Born probability <x|rho|x>.
double basis_probability(const CovarianceState& st, const Bits& x);

/// Tr[(diag(1,z_1) (x) ... (x) diag(1,z_m)) rho].
std::complex<double> expect_diag_gaussian_op(const CovarianceState& st,
                                             std::span<const std::complex<double>> z);

/// Tr[((|0><1|)^{n} (x) diag(1,z_{n+1}) (x) ... (x) diag(1,z_m)) rho] for even n; z holds the
/// m-n trailing entries.
std::complex<double> expect_xtype_gaussian_op(const CovarianceState& st, int n,
                                              std::span<const std::complex<double>> z);

/// |<psi_1|psi_2>|^2.
double fidelity_slaters(const SlaterDescriptor& s1, const SlaterDescriptor& s2);

/// Majorana coefficients rho = sum_mu g_mu Gamma_mu, g_mu = 2^{-m} Pf(M[mu,mu]). m <= 8.
CoefficientMap coefficients_of_gaussian(const CovarianceState& st);

/// Haar-random m x m unitary (QR of a complex Gaussian matrix with phase fix).
Eigen::MatrixXcd random_unitary(int m, Rng& rng);
/// Haar-random orthogonal matrix; in Majorana form a random Gaussian unitary.
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng);

}  // namespace fshadow
