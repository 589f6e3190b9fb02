#pragma once

// Exact combinatorial scalars of the affine-matchgate shadow channel.

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace fshadow {

mpz_class binomial(unsigned long n, unsigned long k);

/// Channel eigenvalue on degree-2k monomials: C(m,k)/C(2m,2k). Throws std::domain_error
/// unless 0 <= k <= m.
mpq_class lambda(int m, int k);
/// Same, indexed by the monomial degree; odd degrees give 0.
mpq_class lambda_of_degree(int m, int degree);

/// Probability that a uniformly random permutation maps two fixed sequences of degrees 2k, 2k'
/// overlapping in 2a indices both onto diagonal sequences. Zero outside the valid range of a.
mpq_class lambda_joint(int m, int k, int kp, int a);

/// lambda_joint / (lambda(m,k) lambda(m,kp)); zero where lambda_joint vanishes.
mpq_class moment_weight(int m, int k, int kp, int a);
/// Weight for sequences of the given degrees and overlap; zero if any of them is odd.
mpq_class moment_weight_of_degrees(int m, int deg, int deg_p, int overlap);

/// Exact rational to the nearest double (within a couple of ulps) without reducing it.
double to_double(const mpq_class& q);

/// moment_weight(m,k,k',a) as doubles for all 0 <= k,k',a <= m, computed from exact integers.
class MomentWeightTable {
 public:
  explicit MomentWeightTable(int m);
  int m() const { return m_; }
  double operator()(int k, int kp, int a) const {
    return w_[(static_cast<std::size_t>(k) * (m_ + 1) + kp) * (m_ + 1) + a];
  }

 private:
  int m_;
  std::vector<double> w_;
};

/// M^{-1}(|0><0|) = sum_b f_{|b|} |b><b| = sum_j c_j diag(1, w^{-j})^{tensor m}, w = e^{2 pi i/(m+1)}.
struct InverseDiagDecomposition {
  int m = 0;
  std::vector<mpq_class> f_exact;
  std::vector<double> f;
  std::vector<std::complex<double>> c;
  std::complex<double> omega;
};

InverseDiagDecomposition inverse_diag_decomposition(int m);

/// M^{-1}((|0><1|)^{n} (x) (|0><0|)^{m-n}) = sum_j c_j (|0><1|)^{n} (x) diag(1, w^{-j})^{m-n},
/// w of order m-n+1. `g` holds the weights on the trailing diagonal by Hamming weight.
struct XTypeDecomposition {
  int m = 0;
  int n = 0;
  std::vector<mpq_class> g_exact;
  std::vector<double> g;
  std::vector<std::complex<double>> c;
  std::complex<double> omega;
};

/// Requires n even and 0 <= n <= m (std::invalid_argument otherwise).
XTypeDecomposition xtype_decomposition(int m, int n);

/// Squared shadow-norm bound of (|0><1|)^{n}(|1><1|)^{m-n} summed over Majorana weight
/// classes. Equals the projector bound at n = 0.
double xtype_norm_bound(int m, int n);
/// The same quadruple sum with an extra factor 1/2 in front.
double xtype_norm_bound_printed(int m, int n);
/// Squared shadow-norm bound of |0><0|: 2^{-2m} sum over pairs of diagonal sequences of their weight.
double projector_norm_bound(int m);

/// Exact rational form of projector_norm_bound (slow for large m).
mpq_class projector_norm_bound_exact(int m);

/// Long-format table with columns table,m,k,exact,value covering lambda, the inverse-projector
/// weights f, the projector bound and the x-type bounds for m_lo <= m <= m_hi.
void write_coefficients_csv(std::ostream& os, int m_lo, int m_hi);

struct NormScanRow {
  int m, n;
  double f, f_printed, F0, F1;
  bool monotone_ok;  ///< f(m,n) <= f(m,n-2); true at n = 0
};
/// Rows for 1 <= m <= m_max and even n <= m.
std::vector<NormScanRow> norm_scan(int m_max);
void write_norm_scan_csv(std::ostream& os, const std::vector<NormScanRow>& rows);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace fshadow
