#include "fshadow/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fshadow/errors.hpp"
#include "fshadow/pfaffian.hpp"

namespace fshadow {

using cplx = std::complex<double>;

CovarianceState::CovarianceState(Eigen::MatrixXd M, double tol) : M_(std::move(M)) {
  if (M_.rows() != M_.cols() || M_.rows() % 2)
    throw std::invalid_argument("covariance matrix must be square with even dimension");
  const double asym = (M_ + M_.transpose()).cwiseAbs().maxCoeff();
  if (M_.size() && asym > tol) throw std::invalid_argument("covariance matrix is not antisymmetric");
  M_ = (M_ - M_.transpose()) / 2;
}

CovarianceState CovarianceState::vacuum(int m) { return basis_state(Bits(m, 0)); }

CovarianceState CovarianceState::basis_state(const Bits& x) {
  const int m = static_cast<int>(x.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    const double s = x[i] ? -1.0 : 1.0;
    M(2 * i, 2 * i + 1) = s;
    M(2 * i + 1, 2 * i) = -s;
  }
  return CovarianceState(std::move(M));
}

bool CovarianceState::is_pure(double tol) const {
  const auto I = Eigen::MatrixXd::Identity(M_.rows(), M_.cols());
  return (M_ * M_.transpose() - I).cwiseAbs().maxCoeff() <= tol;
}

bool CovarianceState::is_physical(double tol) const {
  if (M_.size() == 0) return true;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M_);
  return svd.singularValues()(0) <= 1 + tol;
}

SlaterDescriptor::SlaterDescriptor(int n, Eigen::MatrixXcd U) : n_(n), U_(std::move(U)) {
  if (U_.rows() != U_.cols()) throw std::invalid_argument("orbital matrix must be square");
  if (n_ < 0 || n_ > U_.rows()) throw std::invalid_argument("electron count must lie in [0, m]");
  const auto I = Eigen::MatrixXcd::Identity(U_.rows(), U_.cols());
  if (U_.size() && (U_ * U_.adjoint() - I).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("orbital matrix is not unitary to 1e-10");
}

nlohmann::json to_json(const SlaterDescriptor& s) {
  nlohmann::json u = nlohmann::json::array();
  for (int i = 0; i < s.m(); ++i)
    for (int j = 0; j < s.m(); ++j) u.push_back({s.U()(i, j).real(), s.U()(i, j).imag()});
  return {{"m", s.m()}, {"n", s.n()}, {"U", u}};
}

SlaterDescriptor slater_from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    if (m < 1) throw ParseError("m must be positive");
    const auto& u = j.at("U");
    // Accept the flat row-major list of pairs and also a nested list of rows.
    std::vector<nlohmann::json> pairs;
    if (u.size() == static_cast<std::size_t>(m) && m > 0 && u[0].is_array() && u[0].size() == static_cast<std::size_t>(m) &&
        u[0][0].is_array()) {
      for (const auto& row : u)
        for (const auto& e : row) pairs.push_back(e);
    } else {
      for (const auto& e : u) pairs.push_back(e);
    }
    if (pairs.size() != static_cast<std::size_t>(m) * m)
      throw ParseError("U must hold m*m complex entries");
    Eigen::MatrixXcd U(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        const auto& e = pairs[r * m + c];
        if (!e.is_array() || e.size() != 2) throw ParseError("U entries must be [re, im] pairs");
        U(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    return SlaterDescriptor(n, std::move(U));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad Slater descriptor: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad Slater descriptor: ") + e.what());
  }
}

Eigen::MatrixXd majorana_rotation(const Eigen::MatrixXcd& U) {
  const Eigen::Index m = U.rows();
  Eigen::MatrixXd Q(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double re = U(i, j).real(), im = U(i, j).imag();
      Q(2 * i, 2 * j) = re;
      Q(2 * i, 2 * j + 1) = -im;
      Q(2 * i + 1, 2 * j) = im;
      Q(2 * i + 1, 2 * j + 1) = re;
    }
  return Q;
}

CovarianceState rotate(const CovarianceState& st, const Eigen::MatrixXd& R) {
  return CovarianceState(R.transpose() * st.matrix() * R);
}

CovarianceState covariance_of_slater(const SlaterDescriptor& s) {
  Bits x(s.m(), 0);
  std::fill(x.begin(), x.begin() + s.n(), 1);
  return rotate(CovarianceState::basis_state(x), majorana_rotation(s.U()));
}

Eigen::MatrixXcd correlation_matrix(const CovarianceState& st) {
  const int m = st.m();
  const auto& M = st.matrix();
  Eigen::MatrixXcd C(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double re = (i == j ? 2.0 : 0.0) - M(2 * i, 2 * j + 1) + M(2 * i + 1, 2 * j);
      const double im = M(2 * i, 2 * j) + M(2 * i + 1, 2 * j + 1);
      C(j, i) = cplx(re, im) / 4.0;
    }
  return C;
}

CovarianceState apply_permutation(const CovarianceState& st, const MajoranaPermutation& p) {
  if (p.m() != st.m()) throw std::invalid_argument("apply_permutation: mode count mismatch");
  const int d = 2 * st.m();
  Eigen::MatrixXd out(d, d);
  // M'_{p(j) p(k)} = M_{jk}
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out(p(j + 1) - 1, p(k + 1) - 1) = st.matrix()(j, k);
  return CovarianceState(std::move(out));
}

Eigen::MatrixXd reference_rotation(const CovarianceState& pure_state) {
  if (!pure_state.is_pure(1e-8)) throw std::invalid_argument("reference_rotation: state is not pure");
  const Eigen::MatrixXd& M = pure_state.matrix();
  const Eigen::Index d = M.rows();
  Eigen::MatrixXd R(d, d);
  Eigen::Index filled = 0;
  for (Eigen::Index e = 0; e < d && filled < d; ++e) {
    Eigen::VectorXd u = Eigen::VectorXd::Unit(d, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index r = 0; r < filled; ++r) u -= R.row(r).dot(u) * R.row(r).transpose();
    const double norm = u.norm();
    if (norm < 1e-6) continue;
    u /= norm;
    Eigen::VectorXd w = -M * u;
    w.normalize();
    R.row(filled) = u.transpose();
    R.row(filled + 1) = w.transpose();
    filled += 2;
  }
  if (filled != d) throw NumericalError("reference_rotation: failed to complete the basis");
  return R;
}

namespace {
double clamp_probability(double p) {
  if (p < -1e-9 || p > 1 + 1e-9)
    throw NumericalError("outcome probability " + std::to_string(p) + " outside [0,1]");
  return std::clamp(p, 0.0, 1.0);
}
}  // namespace

double condition_on_mode(Eigen::MatrixXd& M, int mode, int bit) {
  const Eigen::Index a = 2 * (mode - 1), b = a + 1;
  const double s = bit ? -1.0 : 1.0;
  const double p = clamp_probability((1 + s * M(a, b)) / 2);
  const double denom = 2 * p;
  if (denom > 1e-300) {
    const Eigen::VectorXd ca = M.col(a), cb = M.col(b);
    M.noalias() += (s / denom) * (cb * ca.transpose() - ca * cb.transpose());
  }
  M.row(a).setZero();
  M.row(b).setZero();
  M.col(a).setZero();
  M.col(b).setZero();
  M(a, b) = s;
  M(b, a) = -s;
  return p;
}

Conditioned condition_on_mode(const CovarianceState& st, int mode, int bit) {
  if (mode < 1 || mode > st.m()) throw std::out_of_range("condition_on_mode: mode out of range");
  Eigen::MatrixXd M = st.matrix();
  const double p = condition_on_mode(M, mode, bit);
  return {p, CovarianceState(std::move(M), 1e-6)};
}

Bits sample_bits(const CovarianceState& st, Rng& rng) {
  Eigen::MatrixXd M = st.matrix();
  Bits b(st.m());
  for (int i = 0; i < st.m(); ++i) {
    const double p0 = clamp_probability((1 + M(2 * i, 2 * i + 1)) / 2);
    b[i] = rng.uniform() < p0 ? 0 : 1;
    if (i + 1 < st.m()) condition_on_mode(M, i + 1, b[i]);
  }
  return b;
}

double basis_probability(const CovarianceState& st, const Bits& x) {
  if (static_cast<int>(x.size()) != st.m()) throw std::invalid_argument("basis_probability: length mismatch");
  Eigen::MatrixXd M = st.matrix();
  double p = 1;
  for (int i = 0; i < st.m() && p > 0; ++i) p *= condition_on_mode(M, i + 1, x[i]);
  return p;
}

std::complex<double> expect_diag_gaussian_op(const CovarianceState& st, std::span<const cplx> z) {
  const int m = st.m();
  if (static_cast<int>(z.size()) != m) throw std::invalid_argument("expect_diag_gaussian_op: need one z per mode");
  // diag(1, z) = alpha + beta Z_i with Z_i = Gamma_(2i-1,2i).
  Eigen::VectorXcd delta(2 * m);
  Eigen::MatrixXcd N(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    delta(2 * i) = (1.0 - z[i]) / 2.0;
    delta(2 * i + 1) = 1.0;
  }
  N = delta.asDiagonal() * st.matrix().cast<cplx>() * delta.asDiagonal();
  for (int i = 0; i < m; ++i) {
    const cplx alpha = (1.0 + z[i]) / 2.0;
    N(2 * i, 2 * i + 1) += alpha;
    N(2 * i + 1, 2 * i) -= alpha;
  }
  return pfaffian(N);
}

std::complex<double> expect_xtype_gaussian_op(const CovarianceState& st, int n, std::span<const cplx> z) {
  const int m = st.m();
  if (n % 2) throw std::invalid_argument("expect_xtype_gaussian_op: n must be even");
  if (n < 0 || n > m) throw std::invalid_argument("expect_xtype_gaussian_op: need 0 <= n <= m");
  if (static_cast<int>(z.size()) != m - n)
    throw std::invalid_argument("expect_xtype_gaussian_op: need one z per trailing mode");
  const cplx I(0, 1);
  const int dim = n + 2 * (m - n);
  // Columns: a_n, ..., a_1 (|0><1|^{n} = a_n ... a_1 under Jordan-Wigner), then the
  // Majoranas of the trailing modes.
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2 * m, dim);
  for (int u = 0; u < n; ++u) {
    const int k = n - u;  // mode of a_k, 1-based
    X(2 * k - 2, u) = 0.5;
    X(2 * k - 1, u) = 0.5 * I;
  }
  for (int r = 0; r < 2 * (m - n); ++r) X(2 * n + r, n + r) = 1.0;
  // Two-point contractions <x_u x_v> = i x_u^T M x_v (supports are disjoint).
  Eigen::MatrixXcd K = X.transpose() * (I * st.matrix().cast<cplx>()) * X;
  Eigen::VectorXcd delta = Eigen::VectorXcd::Ones(dim);
  for (int i = 0; i < m - n; ++i) delta(n + 2 * i) = -I * (1.0 - z[i]) / 2.0;
  Eigen::MatrixXcd N = delta.asDiagonal() * K * delta.asDiagonal();
  for (int i = 0; i < m - n; ++i) {
    const cplx alpha = (1.0 + z[i]) / 2.0;
    N(n + 2 * i, n + 2 * i + 1) += alpha;
    N(n + 2 * i + 1, n + 2 * i) -= alpha;
  }
  return pfaffian(N);
}

double fidelity_slaters(const SlaterDescriptor& s1, const SlaterDescriptor& s2) {
  if (s1.m() != s2.m()) throw std::invalid_argument("fidelity_slaters: mode count mismatch");
  if (s1.n() != s2.n()) throw std::invalid_argument("fidelity_slaters: electron count mismatch");
  const int n = s1.n();
  if (n == 0) return 1.0;
  const Eigen::MatrixXcd overlap = s1.U().topRows(n) * s2.U().topRows(n).adjoint();
  return std::norm(overlap.determinant());
}

CoefficientMap coefficients_of_gaussian(const CovarianceState& st) {
  const int m = st.m();
  require_guard(m, kMaxEnumerationModes, "coefficients_of_gaussian");
  CoefficientMap out(m);
  const double scale = std::ldexp(1.0, -m);
  for (const auto& mu : even_sequences(m)) {
    const int k = mu.degree();
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = st.matrix()(mu[r] - 1, mu[c] - 1);
    const double v = scale * pfaffian(sub);
    if (v != 0.0) out.set(mu, v);
  }
  return out;
}

Eigen::MatrixXcd random_unitary(int m, Rng& rng) {
  Eigen::MatrixXcd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
  const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const double a = std::abs(R(j, j));
    if (a > 0) Q.col(j) *= R(j, j) / a;
  }
  return Q;
}

Eigen::MatrixXd random_orthogonal(int dim, Rng& rng) {
  Eigen::MatrixXd G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

}  // namespace fshadow
