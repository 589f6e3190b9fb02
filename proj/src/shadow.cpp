#include "fshadow/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "fshadow/errors.hpp"

namespace fshadow {

using cplx = std::complex<double>;

ShadowSample::ShadowSample(MajoranaPermutation p, Bits b) : perm(std::move(p)), bits(std::move(b)) {
  if (static_cast<int>(bits.size()) != perm.m())
    throw std::invalid_argument("shadow record: bitstring length must equal m");
}

CoefficientMap apply_channel(const CoefficientMap& A) {
  CoefficientMap out(A.m());
  for (const auto& [mu, v] : A.entries())
    if (mu.even()) out.set(mu, v * to_double(lambda(A.m(), mu.degree() / 2)));
  return out;
}

CoefficientMap apply_inverse(const CoefficientMap& A) {
  CoefficientMap out(A.m());
  for (const auto& [mu, v] : A.entries()) {
    if (!mu.even()) {
      if (v != 0.0) throw NotInvertible("channel is not invertible on odd-degree term " + mu.str());
      continue;
    }
    out.set(mu, v / to_double(lambda(A.m(), mu.degree() / 2)));
  }
  return out;
}

CovarianceState snapshot_covariance(const ShadowSample& s) {
  // U(p)^dag = U(p^{-1}) up to phase.
  return apply_permutation(CovarianceState::basis_state(s.bits), s.perm.inverse());
}

ShadowSample draw_shadow(const CovarianceState& st, Ensemble ensemble, Rng& rng) {
  MajoranaPermutation p = sample_basis(st.m(), ensemble, rng);
  Bits b = sample_bits(apply_permutation(st, p), rng);
  return ShadowSample(std::move(p), std::move(b));
}

std::vector<ShadowSample> collect_shadows(const CovarianceState& st, std::size_t count, Ensemble ensemble,
                                          std::uint64_t seed, int threads) {
  if (threads < 1) throw std::invalid_argument("collect_shadows: threads must be positive");
  std::vector<ShadowSample> out(count, ShadowSample(MajoranaPermutation::identity(st.m()), Bits(st.m(), 0)));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      out[i] = draw_shadow(st, ensemble, rng);
    }
  };
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    work(0, count);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& t : pool) t.join();
  return out;
}

namespace {

std::uint64_t draw_binomial(std::uint64_t n, double p, std::mt19937_64& eng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::int64_t> dist(static_cast<std::int64_t>(n), p);
  return static_cast<std::uint64_t>(dist(eng));
}

void split_bits(Eigen::MatrixXd& M, int mode, std::uint64_t count, Bits& prefix, const MajoranaPermutation& perm,
                std::mt19937_64& eng, std::vector<WeightedShadow>& out) {
  const int m = static_cast<int>(prefix.size());
  const double p0 = std::clamp((1 + M(2 * mode - 2, 2 * mode - 1)) / 2, 0.0, 1.0);
  const std::uint64_t n0 = draw_binomial(count, p0, eng);
  const std::uint64_t counts[2] = {n0, count - n0};
  for (int bit = 0; bit < 2; ++bit) {
    if (counts[bit] == 0) continue;
    prefix[mode - 1] = static_cast<std::uint8_t>(bit);
    if (mode == m) {
      out.push_back({ShadowSample(perm, prefix), counts[bit]});
      continue;
    }
    Eigen::MatrixXd child = M;
    condition_on_mode(child, mode, bit);
    split_bits(child, mode + 1, counts[bit], prefix, perm, eng, out);
  }
}

}  // namespace

std::vector<WeightedShadow> collect_shadow_counts(const CovarianceState& st, std::uint64_t count,
                                                  std::uint64_t seed) {
  const int m = st.m();
  require_guard(m, kMaxHistogramModes, "collect_shadow_counts");
  if (m < 1) throw std::invalid_argument("collect_shadow_counts: m >= 1 required");
  std::mt19937_64 eng(seed);
  const auto matchings = enumerate_matchings(m);
  std::vector<WeightedShadow> out;
  std::uint64_t remaining = count;
  for (std::size_t idx = 0; idx < matchings.size() && remaining > 0; ++idx) {
    const std::size_t left = matchings.size() - idx;
    const std::uint64_t here = left == 1 ? remaining : draw_binomial(remaining, 1.0 / static_cast<double>(left), eng);
    remaining -= here;
    if (here == 0) continue;
    const MajoranaPermutation p = matchings[idx].representative();
    Eigen::MatrixXd M = apply_permutation(st, p).matrix();
    Bits prefix(m, 0);
    split_bits(M, 1, here, prefix, p, eng, out);
  }
  return out;
}

GammaEstimator::GammaEstimator(int m) : m_(m) {
  for (int k = 0; k <= m; ++k) inv_lambda_.push_back(to_double(1 / lambda(m, k)));
}

double GammaEstimator::operator()(const ShadowSample& s, const IndexSeq& mu) const {
  if (s.m() != m_) throw std::invalid_argument("estimate_gamma: sample has wrong mode count");
  if (!mu.even()) throw std::invalid_argument("estimate_gamma: odd-degree sequence " + mu.str());
  const SignedSeq img = permute(s.perm, mu);
  if (!is_diagonal(img.seq)) return 0.0;
  return inv_lambda_[mu.degree() / 2] * img.sign * diag_matrix_element(img.seq, s.bits);
}

double estimate_gamma(const ShadowSample& s, const IndexSeq& mu) {
  if (!mu.even()) throw std::invalid_argument("estimate_gamma: odd-degree sequence " + mu.str());
  const SignedSeq img = permute(s.perm, mu);
  if (!is_diagonal(img.seq)) return 0.0;
  return to_double(1 / lambda(s.m(), mu.degree() / 2)) * img.sign * diag_matrix_element(img.seq, s.bits);
}

GaussianTarget GaussianTarget::from_slater(const SlaterDescriptor& s) {
  Bits x(s.m(), 0);
  std::fill(x.begin(), x.begin() + s.n(), 1);
  return {majorana_rotation(s.U()), std::move(x)};
}

GaussianTarget GaussianTarget::from_covariance(const CovarianceState& pure_state) {
  if (!pure_state.is_pure(1e-8)) throw std::invalid_argument("fidelity target must be a pure Gaussian state");
  return {reference_rotation(pure_state), Bits(pure_state.m(), 0)};
}

namespace {

// Covariance of W^dag sigma W for the snapshot sigma of s.
Eigen::MatrixXd rotated_snapshot(const ShadowSample& s, const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd sigma = snapshot_covariance(s).matrix();
  return R * sigma * R.transpose();
}

std::complex<double> root(int j, int order) {
  return std::polar(1.0, 2.0 * 3.14159265358979323846 * static_cast<double>(j % order) / order);
}

}  // namespace

FidelityEstimator::FidelityEstimator(GaussianTarget target)
    : target_(std::move(target)), dec_(inverse_diag_decomposition(target_.m())) {}

double FidelityEstimator::operator()(const ShadowSample& s) const {
  const int m = target_.m();
  if (s.m() != m) throw std::invalid_argument("estimate_fidelity: sample has wrong mode count");
  const CovarianceState tau(rotated_snapshot(s, target_.R), 1e-8);
  const int order = m + 1;
  const int hw = weight(target_.reference);
  std::vector<cplx> z(m);
  cplx total = 0;
  double scale = 0;
  for (int j = 0; j < order; ++j) {
    // diag(w^{-j x}, w^{-j(1-x)}) = w^{-j x} diag(1, w^{-j(1-2x)})
    for (int i = 0; i < m; ++i) z[i] = root(target_.reference[i] ? j : order - j, order);
    const cplx term = dec_.c[j] * root(order - (j * hw) % order, order) * expect_diag_gaussian_op(tau, z);
    total += term;
    scale += std::abs(term);
  }
  if (std::abs(total.imag()) > 1e-9 * std::max(1.0, scale))
    throw NumericalError("fidelity estimate has imaginary residue " + std::to_string(total.imag()));
  return total.real();
}

double estimate_fidelity(const ShadowSample& s, const SlaterDescriptor& psi) {
  return FidelityEstimator(GaussianTarget::from_slater(psi))(s);
}

double estimate_fidelity(const ShadowSample& s, const CovarianceState& pure_psi) {
  return FidelityEstimator(GaussianTarget::from_covariance(pure_psi))(s);
}

XTypeEstimator::XTypeEstimator(const SlaterDescriptor& psi)
    : m_(psi.m()), n_(psi.n()), Q_(majorana_rotation(psi.U())), dec_(xtype_decomposition(psi.m(), psi.n())) {}

std::complex<double> XTypeEstimator::operator()(const ShadowSample& s) const {
  if (s.m() != m_) throw std::invalid_argument("estimate_xtype: sample has wrong mode count");
  const CovarianceState tau(rotated_snapshot(s, Q_), 1e-8);
  const int order = m_ - n_ + 1;
  std::vector<cplx> z(m_ - n_);
  cplx total = 0;
  for (int j = 0; j < order; ++j) {
    std::fill(z.begin(), z.end(), root(order - j, order));
    total += dec_.c[j] * expect_xtype_gaussian_op(tau, n_, z);
  }
  return total;
}

std::complex<double> estimate_xtype(const ShadowSample& s, const SlaterDescriptor& psi) {
  return XTypeEstimator(psi)(s);
}

std::string to_string(Aggregation a) { return a == Aggregation::mean ? "mean" : "medians"; }

Aggregation parse_aggregation(const std::string& s) {
  if (s == "mean") return Aggregation::mean;
  if (s == "medians" || s == "median-of-means") return Aggregation::median_of_means;
  throw std::invalid_argument("unknown aggregation '" + s + "' (expected mean or medians)");
}

int EstimatorConfig::default_batches(double delta) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
  return 2 * static_cast<int>(std::ceil(std::log(2.0 / delta))) + 1;
}

void EstimatorConfig::validate() const {
  if (batches < 1) throw std::invalid_argument("batch count must be positive");
  if (aggregation == Aggregation::median_of_means && batches % 2 == 0)
    throw std::invalid_argument("median-of-means needs an odd batch count");
}

double aggregate(std::span<const double> values, const EstimatorConfig& cfg) {
  cfg.validate();
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty sample");
  if (cfg.aggregation == Aggregation::mean)
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  const std::size_t K = static_cast<std::size_t>(cfg.batches);
  if (K > values.size()) throw std::invalid_argument("more batches than samples");
  std::vector<double> means;
  const std::size_t base = values.size() / K, extra = values.size() % K;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    means.push_back(std::accumulate(values.begin() + pos, values.begin() + pos + len, 0.0) / static_cast<double>(len));
    pos += len;
  }
  std::nth_element(means.begin(), means.begin() + K / 2, means.end());
  return means[K / 2];
}

Estimate summarize(std::span<const double> values, const EstimatorConfig& cfg) {
  Estimate e{aggregate(values, cfg), std::numeric_limits<double>::quiet_NaN(), values.size(), cfg.aggregation,
             cfg.batches};
  if (values.size() >= 2) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    e.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return e;
}

namespace {
void check_even(const CoefficientMap& H) {
  for (const auto& [mu, v] : H.entries())
    if (!mu.even() && v != 0.0) throw std::invalid_argument("observable must have even-degree support only");
}
}  // namespace

double predicted_second_moment(const CoefficientMap& H, const CoefficientMap& rho) {
  const int m = H.m();
  if (rho.m() != m) throw std::invalid_argument("predicted_second_moment: mode count mismatch");
  require_guard(m, kMaxPredictorModes, "predicted_second_moment");
  check_even(H);
  const MomentWeightTable w(m);
  long double total = 0;
  for (const auto& [mu, h] : H.entries())
    for (const auto& [nu, hp] : H.entries()) {
      const int overlap = intersection_size(mu, nu);
      if (overlap % 2) continue;
      total += static_cast<long double>(w(mu.degree() / 2, nu.degree() / 2, overlap / 2)) * h * hp *
               coefficient_at_product(rho, mu, nu);
    }
  return static_cast<double>(std::ldexp(total, m));
}

double shadow_norm_bound(const CoefficientMap& H) {
  const int m = H.m();
  require_guard(m, kMaxPredictorModes, "shadow_norm_bound");
  check_even(H);
  const MomentWeightTable w(m);
  long double total = 0;
  for (const auto& [mu, h] : H.entries())
    for (const auto& [nu, hp] : H.entries()) {
      const int overlap = intersection_size(mu, nu);
      if (overlap % 2) continue;
      total += static_cast<long double>(w(mu.degree() / 2, nu.degree() / 2, overlap / 2)) * std::abs(h) * std::abs(hp);
    }
  return static_cast<double>(total);
}

}  // namespace fshadow
