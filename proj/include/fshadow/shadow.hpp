#pragma once

// Classical shadows in random affine-matchgate bases: sampling, the channel on coefficient
// maps, single-shot estimators and the exact second-moment predictor.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fshadow/coefficients.hpp"
#include "fshadow/ensembles.hpp"
#include "fshadow/gaussian.hpp"
#include "fshadow/majorana.hpp"

namespace fshadow {

/// One record: measure U(perm) rho U(perm)^dag in the computational basis, observe `bits`.
struct ShadowSample {
  MajoranaPermutation perm;
  Bits bits;

  ShadowSample(MajoranaPermutation p, Bits b);
  int m() const { return perm.m(); }
  bool operator==(const ShadowSample&) const = default;
};

/// A shadow observed `count` times.
struct WeightedShadow {
  ShadowSample sample;
  std::uint64_t count;
};

/// Scales degree-2k coefficients by lambda(m,k); odd-degree terms vanish.
CoefficientMap apply_channel(const CoefficientMap& A);
/// Inverse on the even sector. Throws NotInvertible if A has nonzero odd-degree terms.
CoefficientMap apply_inverse(const CoefficientMap& A);

/// Covariance of the snapshot U(p)^dag |b><b| U(p).
CovarianceState snapshot_covariance(const ShadowSample& s);

ShadowSample draw_shadow(const CovarianceState& st, Ensemble ensemble, Rng& rng);

/// Sample i uses its own generator seeded with derive_seed(seed, i), so the output does
/// not depend on `threads`.
std::vector<ShadowSample> collect_shadows(const CovarianceState& st, std::size_t count, Ensemble ensemble,
                                          std::uint64_t seed, int threads = 1);

constexpr int kMaxHistogramModes = 7;

/// Draws `count` shadows from the matching ensemble and returns only the multiplicities of
/// the distinct outcomes. The multinomial over (matching, bits) is generated exactly by
/// splitting counts with binomials, first across matchings and then bit by bit using the
/// conditional covariance. Cost is independent of `count`; m <= 7.
std::vector<WeightedShadow> collect_shadow_counts(const CovarianceState& st, std::uint64_t count,
                                                  std::uint64_t seed);

/// lambda^{-1} <b| U Gamma_mu U^dag |b> for even mu: 0 unless permute(p, mu) is diagonal.
double estimate_gamma(const ShadowSample& s, const IndexSeq& mu);

/// estimate_gamma with the inverse eigenvalues cached for a fixed m.
class GammaEstimator {
 public:
  explicit GammaEstimator(int m);
  double operator()(const ShadowSample& s, const IndexSeq& mu) const;
  double inverse_lambda(int k) const { return inv_lambda_.at(k); }

 private:
  int m_;
  std::vector<double> inv_lambda_;
};

/// Pure Gaussian target W|reference>, with W gamma_a W^dag = sum_c R_ac gamma_c.
struct GaussianTarget {
  Eigen::MatrixXd R;
  Bits reference;

  static GaussianTarget from_slater(const SlaterDescriptor& s);
  /// Throws std::invalid_argument if the state is not pure.
  static GaussianTarget from_covariance(const CovarianceState& pure_state);
  int m() const { return static_cast<int>(reference.size()); }
};

/// Tr[M^{-1}(|psi><psi|) snapshot] via m+1 Pfaffians.
class FidelityEstimator {
 public:
  explicit FidelityEstimator(GaussianTarget target);
  double operator()(const ShadowSample& s) const;
  int m() const { return target_.m(); }

 private:
  GaussianTarget target_;
  InverseDiagDecomposition dec_;
};

double estimate_fidelity(const ShadowSample& s, const SlaterDescriptor& psi);
double estimate_fidelity(const ShadowSample& s, const CovarianceState& pure_psi);

/// Tr[M^{-1}(|0><psi|) snapshot] for a Slater determinant with an even number of electrons.
class XTypeEstimator {
 public:
  /// Throws std::invalid_argument for odd n.
  explicit XTypeEstimator(const SlaterDescriptor& psi);
  std::complex<double> operator()(const ShadowSample& s) const;
  int m() const { return m_; }

 private:
  int m_, n_;
  Eigen::MatrixXd Q_;
  XTypeDecomposition dec_;
};

std::complex<double> estimate_xtype(const ShadowSample& s, const SlaterDescriptor& psi);

enum class Aggregation { mean, median_of_means };

std::string to_string(Aggregation a);
/// "mean" or "medians".
Aggregation parse_aggregation(const std::string& s);

struct EstimatorConfig {
  Aggregation aggregation = Aggregation::mean;
  int batches = 1;

  /// 2 ceil(ln(2/delta)) + 1.
  static int default_batches(double delta);
  /// Throws std::invalid_argument on batches < 1 or an even batch count for median-of-means.
  void validate() const;
};

struct Estimate {
  double value;
  double std_error;  ///< standard error of the sample mean; NaN for fewer than two samples
  std::size_t n_samples;
  Aggregation aggregation;
  int batches;
};

/// Sample mean, or the median of `batches` contiguous batch means (sizes differ by at most one).
double aggregate(std::span<const double> values, const EstimatorConfig& cfg);
Estimate summarize(std::span<const double> values, const EstimatorConfig& cfg);

constexpr int kMaxPredictorModes = 6;

/// 2^m sum over even mu, mu' with even overlap of w h_mu h_mu' g_{mu mu'}.
double predicted_second_moment(const CoefficientMap& H, const CoefficientMap& rho);
/// sum over even mu, mu' with even overlap of w |h_mu| |h_mu'|.
double shadow_norm_bound(const CoefficientMap& H);

}  // namespace fshadow
