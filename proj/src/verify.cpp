#include "fshadow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fshadow/coefficients.hpp"
#include "fshadow/dense_oracle.hpp"
#include "fshadow/ensembles.hpp"
#include "fshadow/shadow.hpp"

namespace fshadow {

using cplx = std::complex<double>;

VerifyLevel parse_verify_level(const std::string& s) {
  if (s == "fast") return VerifyLevel::fast;
  if (s == "full") return VerifyLevel::full;
  throw std::invalid_argument("unknown verify level '" + s + "' (expected fast or full)");
}

namespace {

CheckResult check(std::string name, double err, double tol, int max_m) {
  return {std::move(name), err <= tol, err, "m <= " + std::to_string(max_m) + ", tolerance " + format_double(tol)};
}

double channel_eigenvalue_error(int max_m, bool fault) {
  double err = 0;
  for (int m = 1; m <= max_m; ++m) {
    const auto ch = dense::Channel::full(m);
    for (const auto& mu : all_sequences(m)) {
      int k = mu.degree() / 2;
      if (fault && mu.even()) k = k < m ? k + 1 : k - 1;
      const double lam = mu.even() ? to_double(lambda(m, k)) : 0.0;
      const auto G = dense::gamma_dense(m, mu);
      err = std::max(err, (ch.apply(G) - lam * G).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

double matching_channel_error(int max_m) {
  double err = 0;
  for (int m = 1; m <= max_m; ++m)
    err = std::max(err, (dense::Channel::full(m).superoperator() - dense::Channel::matchings(m).superoperator())
                            .cwiseAbs()
                            .maxCoeff());
  return err;
}

double second_moment_error(int max_m, Rng& rng) {
  double err = 0;
  for (int m = 1; m <= max_m; ++m) {
    const auto ch = dense::Channel::full(m);
    for (int t = 0; t < 5; ++t) {
      const auto H = dense::random_even_hermitian(m, rng);
      const auto rho = dense::random_gaussian_state(m, rng, t % 2 == 0);
      const double want = ch.second_moment(H, rho);
      const double got = predicted_second_moment(dense::coefficients_of(H), dense::coefficients_of(rho));
      err = std::max(err, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
  }
  return err;
}

// Compares a structured single-shot estimator with Tr[M^{-1}(target) snapshot] over every
// matching basis and outcome.
template <class Estimator>
double single_shot_error(int m, const dense::Matrix& target, const Estimator& est) {
  const auto ch = dense::Channel::matchings(m);
  const dense::Matrix inv = ch.apply_inverse(target);
  double err = 0;
  const auto matchings = enumerate_matchings(m);
  for (const auto& pm : matchings) {
    const MajoranaPermutation p = pm.representative();
    const dense::Matrix U = dense::unitary_of_permutation_dense(p);
    for (std::size_t idx = 0; idx < (std::size_t{1} << m); ++idx) {
      const Bits b = dense::bits_of_index(idx, m);
      const cplx want = (inv * U.adjoint() * dense::basis_projector(b) * U).trace();
      const cplx got = est(ShadowSample(p, b));
      err = std::max(err, std::abs(got - want));
    }
  }
  return err;
}

SlaterDescriptor random_slater(int m, int n, Rng& rng) { return SlaterDescriptor(n, random_unitary(m, rng)); }

double fidelity_estimator_error(int max_m, Rng& rng) {
  double err = 0;
  for (int m = 1; m <= max_m; ++m)
    for (int n = 0; n <= m; ++n) {
      const auto psi = random_slater(m, n, rng);
      const dense::Vector v = dense::slater_state(psi);
      const FidelityEstimator est(GaussianTarget::from_slater(psi));
      err = std::max(err, single_shot_error(m, v * v.adjoint(), [&](const ShadowSample& s) { return cplx(est(s)); }));
    }
  return err;
}

double xtype_estimator_error(int max_m, Rng& rng) {
  double err = 0;
  for (int m = 2; m <= max_m; ++m)
    for (int n = 2; n <= m; n += 2) {
      const auto psi = random_slater(m, n, rng);
      const dense::Vector v = dense::slater_state(psi);
      dense::Vector zero = dense::Vector::Zero(v.size());
      zero(0) = 1;
      const XTypeEstimator est(psi);
      err = std::max(err, single_shot_error(m, zero * v.adjoint(), est));
    }
  return err;
}

double inverse_projector_error(int max_m) {
  double err = 0;
  for (int m = 1; m <= max_m; ++m) {
    const auto dec = inverse_diag_decomposition(m);
    const auto inv = dense::Channel::matchings(m).apply_inverse(dense::basis_projector(Bits(m, 0)));
    for (Eigen::Index r = 0; r < inv.rows(); ++r)
      for (Eigen::Index c = 0; c < inv.cols(); ++c) {
        const double want = r == c ? dec.f[weight(dense::bits_of_index(r, m))] : 0.0;
        err = std::max(err, std::abs(inv(r, c) - want));
      }
  }
  return err;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  const bool full = options.level == VerifyLevel::full;
  const int m_small = full ? 3 : 2;
  const int m_diag = full ? 4 : 2;
  Rng rng(derive_seed(20240917, 0));
  std::vector<CheckResult> out;
  out.push_back(check("channel-eigenvalue", channel_eigenvalue_error(m_small, options.inject_lambda_fault), 1e-12, m_small));
  out.push_back(check("matching-channel", matching_channel_error(m_small), 1e-12, m_small));
  out.push_back(check("second-moment", second_moment_error(m_small, rng), 1e-9, m_small));
  out.push_back(check("fidelity-estimator", fidelity_estimator_error(m_small, rng), 1e-9, m_small));
  out.push_back(check("xtype-estimator", xtype_estimator_error(m_small, rng), 1e-9, m_small));
  out.push_back(check("inverse-projector-diagonal", inverse_projector_error(m_diag), 1e-10, m_diag));
  return out;
}

}  // namespace fshadow
