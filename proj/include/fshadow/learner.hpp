#pragma once

// Learning a Slater determinant from shadows: estimate the one-body matrix
// R_{j,i} = <a_i^dag a_j> (equal to U^dag Pi U for the state), take its top-n eigenvectors and
// certify the result with a Gershgorin argument.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "fshadow/ensembles.hpp"
#include "fshadow/gaussian.hpp"
#include "fshadow/shadow.hpp"

namespace fshadow {

struct RdmEstimate {
  int m = 0;
  Eigen::MatrixXcd R;          ///< Hermitian
  Eigen::MatrixXcd std_error;  ///< standard errors of the real and imaginary parts, entrywise
  std::uint64_t n_samples = 0;
  double delta = 0.05;
  /// Hoeffding bound on max_ij |R_hat - R| holding with probability >= 1 - delta.
  double max_error_bound = 0;
};

/// max-entry error bound sqrt(2) (2m-1) sqrt(ln(4 m^2 / delta) / (2N)): each real or
/// imaginary part of a single-shot entry ranges over an interval of width 2m-1.
double hoeffding_max_entry_bound(int m, std::uint64_t n_samples, double delta);

/// Streams shadows into per-entry sums. Each shadow touches O(m) entries.
class RdmAccumulator {
 public:
  explicit RdmAccumulator(int m);
  void add(const ShadowSample& s, std::uint64_t weight = 1);
  std::uint64_t count() const { return n_; }
  /// Throws std::invalid_argument when nothing was added.
  RdmEstimate finish(double delta = 0.05) const;

 private:
  int m_;
  double inv_lambda1_;
  std::uint64_t n_ = 0;
  Eigen::MatrixXcd sum_;
  Eigen::MatrixXd sum_sq_re_, sum_sq_im_;
};

RdmEstimate estimate_R(std::span<const ShadowSample> samples, double delta = 0.05);
RdmEstimate estimate_R(std::span<const WeightedShadow> samples, double delta = 0.05);
/// The exact matrix of a covariance state, as an estimate with zero error.
RdmEstimate exact_R(const CovarianceState& st);

struct GershgorinReport {
  double eps_ev;
  std::array<double, 2> occupied;  ///< [1 - eps, 1 + eps]
  std::array<double, 2> empty;     ///< [-eps, eps]
  bool disjoint;                   ///< eps < 1/2
};

/// Intervals with eps_EV = m^3 * max_error_bound.
GershgorinReport gershgorin_intervals(const RdmEstimate& est, int n);

struct LearnReport {
  SlaterDescriptor learned;
  Eigen::VectorXd eigenvalues;  ///< descending
  double eps_shdw = 0;          ///< max-entry error bound used for certification
  double eps_ev = 0;
  bool certified = false;
  double certified_bound = 0;   ///< 1 - 2 n m^3 eps_shdw when certified; 0 otherwise
  std::uint64_t n_samples = 0;
  std::optional<double> fidelity_vs_truth = std::nullopt;
};

/// Eigenvectors sorted by eigenvalue (descending); near-equal eigenvalues (within 1e-12
/// relative) are ordered by their phase-canonical vectors, compared lexicographically. Each
/// vector is rotated so its largest-magnitude entry is real positive. The learned U has the
/// conjugate-transposed vectors as rows.
LearnReport learn_slater(const RdmEstimate& est, int n);

struct SampleRequirement {
  double eps_shdw;
  std::uint64_t samples;
};

constexpr double kDefaultSampleConstant = 34.0;

/// eps_shdw = eps_fid / (3 n m^3), samples = ceil(C m ln(m/delta) / eps_shdw^2).
/// Requires 0 < eps_fid <= n/m and 0 < delta < 1.
SampleRequirement required_samples(int m, int n, double eps_fid, double delta,
                                   double C = kDefaultSampleConstant);

struct LearnOptions {
  double sample_constant = kDefaultSampleConstant;
  std::optional<std::uint64_t> samples;  ///< overrides required_samples
  Ensemble ensemble = Ensemble::matchings;
  int threads = 1;
  /// Above this many samples the aggregated matching-ensemble collector is used.
  std::uint64_t max_individual_samples = 2'000'000;
};

LearnReport end_to_end_learn(const SlaterDescriptor& truth, double eps_fid, double delta, std::uint64_t seed,
                             const LearnOptions& options = {});

nlohmann::json to_json(const LearnReport& r);
nlohmann::json to_json(const RdmEstimate& r);

}  // namespace fshadow
