#include "fshadow/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fshadow/coefficients.hpp"

namespace fshadow {

using cplx = std::complex<double>;

double hoeffding_max_entry_bound(int m, std::uint64_t n_samples, double delta) {
  if (n_samples == 0) return std::numeric_limits<double>::infinity();
  const double width = 2.0 * m - 1.0;
  return std::sqrt(2.0) * width *
         std::sqrt(std::log(4.0 * m * m / delta) / (2.0 * static_cast<double>(n_samples)));
}

RdmAccumulator::RdmAccumulator(int m)
    : m_(m),
      inv_lambda1_(m >= 1 ? to_double(1 / lambda(m, 1)) : 0.0),
      sum_(Eigen::MatrixXcd::Zero(m, m)),
      sum_sq_re_(Eigen::MatrixXd::Zero(m, m)),
      sum_sq_im_(Eigen::MatrixXd::Zero(m, m)) {
  if (m < 1) throw std::invalid_argument("RdmAccumulator: m >= 1 required");
}

namespace {

struct Contribution {
  int row, col;
  cplx value;
};

// Weight of Gamma_(x,y) in R_{mode(y), mode(x)}, by parity of x and y (true = odd index).
cplx pair_coefficient(bool x_odd, bool y_odd) {
  if (x_odd == y_odd) return {0, 0.25};
  return x_odd ? cplx(-0.25, 0) : cplx(0.25, 0);
}

}  // namespace

void RdmAccumulator::add(const ShadowSample& s, std::uint64_t weight) {
  if (s.m() != m_) throw std::invalid_argument("estimate_R: samples have inconsistent mode counts");
  if (weight == 0) return;
  const MajoranaPermutation inv = s.perm.inverse();
  std::vector<Contribution> c;
  c.reserve(2 * m_);
  for (int l = 1; l <= m_; ++l) {
    // Gamma_(x,y) is mapped onto Gamma_(2l-1,2l); every other degree-2 estimate is zero.
    const int x = inv(2 * l - 1), y = inv(2 * l);
    const double e = inv_lambda1_ * (s.bits[l - 1] ? -1.0 : 1.0);
    const int ix = (x - 1) / 2, iy = (y - 1) / 2;
    c.push_back({iy, ix, pair_coefficient(x % 2, y % 2) * e});
    c.push_back({ix, iy, pair_coefficient(y % 2, x % 2) * -e});
  }
  std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  const double w = static_cast<double>(weight);
  std::vector<char> diag_touched(m_, 0);
  for (std::size_t i = 0; i < c.size();) {
    cplx v = 0;
    const int r = c[i].row, col = c[i].col;
    for (; i < c.size() && c[i].row == r && c[i].col == col; ++i) v += c[i].value;
    if (r == col) {
      v += 0.5;
      diag_touched[r] = 1;
    }
    sum_(r, col) += w * v;
    sum_sq_re_(r, col) += w * v.real() * v.real();
    sum_sq_im_(r, col) += w * v.imag() * v.imag();
  }
  for (int i = 0; i < m_; ++i)
    if (!diag_touched[i]) {
      sum_(i, i) += w * 0.5;
      sum_sq_re_(i, i) += w * 0.25;
    }
  n_ += weight;
}

RdmEstimate RdmAccumulator::finish(double delta) const {
  if (n_ == 0) throw std::invalid_argument("estimate_R: no samples");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("estimate_R: delta must lie in (0,1)");
  RdmEstimate e;
  e.m = m_;
  e.n_samples = n_;
  e.delta = delta;
  const double N = static_cast<double>(n_);
  const Eigen::MatrixXcd mean = sum_ / N;
  e.R = (mean + mean.adjoint()) / 2.0;
  e.std_error = Eigen::MatrixXcd::Constant(m_, m_, cplx(std::numeric_limits<double>::quiet_NaN(), 0));
  if (n_ >= 2)
    for (int r = 0; r < m_; ++r)
      for (int c = 0; c < m_; ++c) {
        const double vr = std::max(0.0, (sum_sq_re_(r, c) - N * std::norm(mean(r, c).real())) / (N - 1));
        const double vi = std::max(0.0, (sum_sq_im_(r, c) - N * std::norm(mean(r, c).imag())) / (N - 1));
        e.std_error(r, c) = cplx(std::sqrt(vr / N), std::sqrt(vi / N));
      }
  e.max_error_bound = hoeffding_max_entry_bound(m_, n_, delta);
  return e;
}

RdmEstimate estimate_R(std::span<const ShadowSample> samples, double delta) {
  if (samples.empty()) throw std::invalid_argument("estimate_R: no samples");
  RdmAccumulator acc(samples.front().m());
  for (const auto& s : samples) acc.add(s);
  return acc.finish(delta);
}

RdmEstimate estimate_R(std::span<const WeightedShadow> samples, double delta) {
  if (samples.empty()) throw std::invalid_argument("estimate_R: no samples");
  RdmAccumulator acc(samples.front().sample.m());
  for (const auto& s : samples) acc.add(s.sample, s.count);
  return acc.finish(delta);
}

RdmEstimate exact_R(const CovarianceState& st) {
  RdmEstimate e;
  e.m = st.m();
  e.R = correlation_matrix(st);
  e.R = (e.R + e.R.adjoint()) / 2.0;
  e.std_error = Eigen::MatrixXcd::Zero(e.m, e.m);
  return e;
}

GershgorinReport gershgorin_intervals(const RdmEstimate& est, int n) {
  if (n < 0 || n > est.m) throw std::invalid_argument("gershgorin_intervals: n out of range");
  const double eps = std::pow(static_cast<double>(est.m), 3) * est.max_error_bound;
  return {eps, {1 - eps, 1 + eps}, {-eps, eps}, eps < 0.5};
}

namespace {

Eigen::VectorXcd canonical_phase(Eigen::VectorXcd v) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= top * (1 - 1e-12)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  return v;
}

bool lex_greater(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() > b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() > b(i).imag();
  }
  return false;
}

}  // namespace

LearnReport learn_slater(const RdmEstimate& est, int n) {
  const int m = est.m;
  if (n < 0 || n > m) throw std::invalid_argument("learn_slater: n must lie in [0, m]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(est.R);
  if (es.info() != Eigen::Success) throw std::runtime_error("learn_slater: eigensolver failed");
  struct Item {
    double value;
    Eigen::VectorXcd vec;
  };
  std::vector<Item> items;
  for (int k = 0; k < m; ++k) items.push_back({es.eigenvalues()(k), canonical_phase(es.eigenvectors().col(k))});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.value > b.value; });
  for (std::size_t s = 0; s < items.size();) {
    std::size_t e = s + 1;
    while (e < items.size() &&
           items[e - 1].value - items[e].value <= 1e-12 * std::max(1.0, std::abs(items[e - 1].value)))
      ++e;
    std::stable_sort(items.begin() + s, items.begin() + e,
                     [](const Item& a, const Item& b) { return lex_greater(a.vec, b.vec); });
    s = e;
  }
  Eigen::MatrixXcd U(m, m);
  Eigen::VectorXd values(m);
  for (int k = 0; k < m; ++k) {
    U.row(k) = items[k].vec.adjoint();
    values(k) = items[k].value;
  }
  LearnReport r{.learned = SlaterDescriptor(n, std::move(U)), .eigenvalues = values};
  const GershgorinReport g = gershgorin_intervals(est, n);
  r.eps_shdw = est.max_error_bound;
  r.eps_ev = g.eps_ev;
  r.n_samples = est.n_samples;
  const double bound = 1.0 - 2.0 * n * std::pow(static_cast<double>(m), 3) * est.max_error_bound;
  r.certified = g.disjoint && bound >= 0.0;
  r.certified_bound = r.certified ? bound : 0.0;
  return r;
}

SampleRequirement required_samples(int m, int n, double eps_fid, double delta, double C) {
  if (m < 1 || n < 1 || n > m) throw std::invalid_argument("required_samples: need 1 <= n <= m");
  if (!(eps_fid > 0) || eps_fid > static_cast<double>(n) / m)
    throw std::invalid_argument("required_samples: eps_fid must lie in (0, n/m]");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("required_samples: delta must lie in (0,1)");
  if (!(C > 0)) throw std::invalid_argument("required_samples: constant must be positive");
  const double eps = eps_fid / (3.0 * n * std::pow(static_cast<double>(m), 3));
  const double N = std::ceil(C * m * std::log(m / delta) / (eps * eps));
  if (!(N < 1.8e19)) throw std::overflow_error("required_samples: sample count overflows 64 bits");
  return {eps, static_cast<std::uint64_t>(N)};
}

LearnReport end_to_end_learn(const SlaterDescriptor& truth, double eps_fid, double delta, std::uint64_t seed,
                             const LearnOptions& options) {
  const int m = truth.m(), n = truth.n();
  if (n == 0) {
    LearnReport r{.learned = SlaterDescriptor(0, Eigen::MatrixXcd::Identity(m, m)), .eigenvalues = Eigen::VectorXd::Zero(m)};
    r.certified = true;
    r.certified_bound = 1.0;
    r.fidelity_vs_truth = 1.0;
    return r;
  }
  const std::uint64_t N =
      options.samples ? *options.samples : required_samples(m, n, eps_fid, delta, options.sample_constant).samples;
  if (N == 0) throw std::invalid_argument("end_to_end_learn: zero samples requested");
  const CovarianceState st = covariance_of_slater(truth);
  RdmEstimate est;
  if (N <= options.max_individual_samples) {
    const auto shadows = collect_shadows(st, N, options.ensemble, seed, options.threads);
    est = estimate_R(shadows, delta);
  } else {
    const auto counts = collect_shadow_counts(st, N, seed);
    est = estimate_R(counts, delta);
  }
  LearnReport r = learn_slater(est, n);
  r.fidelity_vs_truth = fidelity_slaters(r.learned, truth);
  return r;
}

namespace {
nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }
}  // namespace

nlohmann::json to_json(const LearnReport& r) {
  nlohmann::json j;
  j["schema"] = "fshadow.learn.v1";
  j["learned"] = to_json(r.learned);
  j["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  j["eps_shdw"] = number_or_null(r.eps_shdw);
  j["eps_EV"] = number_or_null(r.eps_ev);
  j["certified"] = r.certified;
  j["certified_bound"] = r.certified ? nlohmann::json(r.certified_bound) : nlohmann::json(nullptr);
  j["n_samples"] = r.n_samples;
  if (r.fidelity_vs_truth) j["fidelity_vs_truth"] = *r.fidelity_vs_truth;
  return j;
}

nlohmann::json to_json(const RdmEstimate& r) {
  nlohmann::json rows = nlohmann::json::array(), errs = nlohmann::json::array();
  for (int i = 0; i < r.m; ++i) {
    nlohmann::json row = nlohmann::json::array(), erow = nlohmann::json::array();
    for (int k = 0; k < r.m; ++k) {
      row.push_back({r.R(i, k).real(), r.R(i, k).imag()});
      erow.push_back({number_or_null(r.std_error(i, k).real()), number_or_null(r.std_error(i, k).imag())});
    }
    rows.push_back(row);
    errs.push_back(erow);
  }
  return {{"schema", "fshadow.rdm.v1"}, {"m", r.m},           {"R", rows},
          {"std_error", errs},          {"n_samples", r.n_samples}, {"delta", r.delta},
          {"max_error_bound", number_or_null(r.max_error_bound)}};
}

}  // namespace fshadow
