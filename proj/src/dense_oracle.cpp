#include "fshadow/dense_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "fshadow/ensembles.hpp"
#include "fshadow/errors.hpp"

namespace fshadow::dense {

using cplx = std::complex<double>;

std::size_t basis_index(const Bits& b) {
  std::size_t idx = 0;
  for (auto bit : b) idx = (idx << 1) | bit;
  return idx;
}

Bits bits_of_index(std::size_t index, int m) {
  Bits b(m);
  for (int i = m - 1; i >= 0; --i, index >>= 1) b[i] = index & 1;
  return b;
}

namespace {

// gamma_j |idx> = phase |idx'>, Jordan-Wigner with mode 1 as most significant bit.
void apply_gamma(int m, int j, std::size_t& idx, cplx& phase) {
  const int mode = (j - 1) / 2;  // 0-based
  const std::size_t mask = std::size_t{1} << (m - 1 - mode);
  const std::size_t higher = idx >> (m - mode);  // bits of modes before `mode`
  if (__builtin_popcountll(higher) % 2) phase = -phase;
  const bool occupied = idx & mask;
  if (j % 2 == 0) phase *= occupied ? cplx(0, -1) : cplx(0, 1);
  idx ^= mask;
}

Matrix monomial(int m, std::span<const int> raw, cplx prefactor) {
  require_guard(m, kMaxGammaModes, "dense Majorana matrices");
  for (int j : raw)
    if (j < 1 || j > 2 * m) throw InvalidSequence("Majorana index out of range");
  const std::size_t dim = std::size_t{1} << m;
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t idx = col;
    cplx phase = prefactor;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) apply_gamma(m, *it, idx, phase);
    out(idx, col) = phase;
  }
  return out;
}

cplx normalization(std::size_t k) {
  // (-i)^{k(k-1)/2}
  static constexpr cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return table[(k * (k - 1) / 2) % 4];
}

}  // namespace

Matrix majorana(int m, int j) {
  const int raw[1] = {j};
  return monomial(m, raw, 1.0);
}

Matrix gamma_dense(int m, const IndexSeq& mu) {
  return monomial(m, mu.indices(), normalization(mu.indices().size()));
}

Matrix gamma_raw_dense(int m, std::span<const int> raw) {
  return monomial(m, raw, normalization(raw.size()));
}

Matrix annihilation(int m, int mode) {
  return (majorana(m, 2 * mode - 1) + cplx(0, 1) * majorana(m, 2 * mode)) / 2.0;
}

Matrix parity(int m) {
  require_guard(m, kMaxGammaModes, "parity");
  const std::size_t dim = std::size_t{1} << m;
  Matrix P = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) P(i, i) = __builtin_popcountll(i) % 2 ? -1.0 : 1.0;
  return P;
}

Matrix basis_projector(const Bits& b) {
  const int m = static_cast<int>(b.size());
  require_guard(m, kMaxGammaModes, "basis_projector");
  const std::size_t dim = std::size_t{1} << m;
  Matrix P = Matrix::Zero(dim, dim);
  const auto i = basis_index(b);
  P(i, i) = 1.0;
  return P;
}

Matrix diag_operator(std::span<const cplx> z) {
  Matrix out = Matrix::Identity(1, 1);
  for (auto zi : z) {
    Matrix f = Matrix::Zero(2, 2);
    f(0, 0) = 1.0;
    f(1, 1) = zi;
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

Matrix xtype_operator(int m, int n, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != m - n) throw std::invalid_argument("xtype_operator: need m-n z values");
  require_guard(m, kMaxGammaModes, "xtype_operator");
  Matrix lowering = Matrix::Zero(2, 2);
  lowering(0, 1) = 1.0;
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = Eigen::kroneckerProduct(out, lowering).eval();
  return Eigen::kroneckerProduct(out, diag_operator(z)).eval();
}

Matrix unitary_of_permutation_dense(const MajoranaPermutation& p) {
  const int m = p.m();
  require_guard(m, kMaxUnitaryModes, "unitary_of_permutation_dense");
  const std::size_t dim = std::size_t{1} << m;
  const Matrix P = parity(m);
  Matrix U = Matrix::Identity(dim, dim);
  // q tracks the permutation realized so far; each step left-multiplies a transposition
  // (a b), realized by P (gamma_a - gamma_b)/sqrt(2).
  std::vector<int> q(2 * m);
  for (int j = 0; j < 2 * m; ++j) q[j] = j + 1;
  for (int j = 0; j < 2 * m; ++j) {
    const int a = q[j], b = p(j + 1);
    if (a == b) continue;
    const Matrix T = P * (majorana(m, a) - majorana(m, b)) / std::sqrt(2.0);
    U = T * U;
    for (int& v : q) {
      if (v == a) v = b;
      else if (v == b) v = a;
    }
  }
  return U;
}

Channel::Channel(int m, std::vector<MajoranaPermutation> bases) : m_(m) {
  require_guard(m, kMaxMatchingChannelModes, "dense channel");
  if (bases.empty()) throw std::invalid_argument("dense channel needs at least one basis");
  for (const auto& p : bases) {
    if (p.m() != m) throw std::invalid_argument("dense channel: basis has wrong mode count");
    unitaries_.push_back(unitary_of_permutation_dense(p));
  }
  const std::size_t dim = std::size_t{1} << m;
  super_.resize(dim * dim, dim * dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t r = 0; r < dim; ++r) {
      Matrix E = Matrix::Zero(dim, dim);
      E(r, s) = 1.0;
      const Matrix out = apply(E);
      super_.col(r + dim * s) = Eigen::Map<const Vector>(out.data(), out.size());
    }
  cod_.compute(super_);
}

Channel Channel::full(int m) {
  require_guard(m, kMaxFullChannelModes, "dense full-group channel");
  return Channel(m, enumerate_permutations(m));
}

Channel Channel::matchings(int m) {
  require_guard(m, kMaxMatchingChannelModes, "dense matching channel");
  std::vector<MajoranaPermutation> reps;
  for (const auto& pm : enumerate_matchings(m)) reps.push_back(pm.representative());
  return Channel(m, std::move(reps));
}

Matrix Channel::apply(const Matrix& A) const {
  const std::size_t dim = std::size_t{1} << m_;
  Matrix acc = Matrix::Zero(dim, dim);
  for (const auto& U : unitaries_) {
    const Vector d = (U * A * U.adjoint()).diagonal();
    acc.noalias() += U.adjoint() * d.asDiagonal() * U;
  }
  return acc / static_cast<double>(unitaries_.size());
}

Matrix Channel::apply_inverse(const Matrix& A) const {
  const Vector v = Eigen::Map<const Vector>(A.data(), A.size());
  const Vector x = cod_.solve(v);
  Matrix out(A.rows(), A.cols());
  Eigen::Map<Vector>(out.data(), out.size()) = x;
  return out;
}

Matrix Channel::snapshot(std::size_t basis, const Bits& b) const {
  const auto& U = unitaries_.at(basis);
  return U.adjoint() * basis_projector(b) * U;
}

double Channel::second_moment(const Matrix& H, const Matrix& rho) const {
  const Matrix Hinv = apply_inverse(H);
  double total = 0;
  for (const auto& U : unitaries_) {
    const Vector prob = (U * rho * U.adjoint()).diagonal();
    const Vector val = (U * Hinv * U.adjoint()).diagonal();
    for (Eigen::Index b = 0; b < prob.size(); ++b) total += prob(b).real() * std::norm(val(b));
  }
  return total / static_cast<double>(unitaries_.size());
}

double second_moment_dense(int m, const Matrix& H, const Matrix& rho) {
  require_guard(m, kMaxFullChannelModes, "second_moment_dense");
  return Channel::full(m).second_moment(H, rho);
}

Matrix operator_of(const CoefficientMap& c) {
  const std::size_t dim = std::size_t{1} << c.m();
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& [mu, v] : c.entries()) out += v * gamma_dense(c.m(), mu);
  return out;
}

std::map<IndexSeq, cplx> complex_coefficients_of(const Matrix& A, double tol) {
  const int m = static_cast<int>(std::lround(std::log2(static_cast<double>(A.rows()))));
  require_guard(m, kMaxEnumerationModes, "complex_coefficients_of");
  std::map<IndexSeq, cplx> out;
  const double scale = std::ldexp(1.0, -m);
  for (const auto& mu : all_sequences(m)) {
    const cplx v = scale * (gamma_dense(m, mu) * A).trace();
    if (std::abs(v) > tol) out[mu] = v;
  }
  return out;
}

CoefficientMap coefficients_of(const Matrix& A, double tol) {
  const int m = static_cast<int>(std::lround(std::log2(static_cast<double>(A.rows()))));
  CoefficientMap out(m);
  for (const auto& [mu, v] : complex_coefficients_of(A, tol))
    if (std::abs(v.real()) > tol) out.set(mu, v.real());
  return out;
}

Eigen::MatrixXd covariance_from_dense(const Matrix& rho) {
  const int m = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int j = 1; j <= 2 * m; ++j)
    for (int k = j + 1; k <= 2 * m; ++k) {
      const double v = (gamma_dense(m, IndexSeq{j, k}) * rho).trace().real();
      M(j - 1, k - 1) = v;
      M(k - 1, j - 1) = -v;
    }
  return M;
}

Matrix random_gaussian_unitary(int m, Rng& rng) {
  require_guard(m, kMaxUnitaryModes, "random_gaussian_unitary");
  const std::size_t dim = std::size_t{1} << m;
  Matrix generator = Matrix::Zero(dim, dim);
  for (int a = 1; a <= 2 * m; ++a)
    for (int b = a + 1; b <= 2 * m; ++b)
      generator += (rng.normal() / 2.0) * majorana(m, a) * majorana(m, b);
  return generator.exp();
}

Matrix random_gaussian_state(int m, Rng& rng, bool pure) {
  const std::size_t dim = std::size_t{1} << m;
  Matrix rho0 = Matrix::Zero(dim, dim);
  if (pure) {
    Bits x(m);
    for (auto& b : x) b = rng.below(2);
    rho0(basis_index(x), basis_index(x)) = 1.0;
  } else {
    Matrix prod = Matrix::Identity(1, 1);
    for (int i = 0; i < m; ++i) {
      const double p = rng.uniform();
      Matrix f = Matrix::Zero(2, 2);
      f(0, 0) = p;
      f(1, 1) = 1 - p;
      prod = Eigen::kroneckerProduct(prod, f).eval();
    }
    rho0 = prod;
  }
  const Matrix W = random_gaussian_unitary(m, rng);
  return W * rho0 * W.adjoint();
}

Vector slater_state(const SlaterDescriptor& s) {
  const int m = s.m();
  require_guard(m, kMaxGammaModes, "slater_state");
  const std::size_t dim = std::size_t{1} << m;
  Vector psi = Vector::Zero(dim);
  psi(0) = 1.0;
  std::vector<Matrix> adag;
  for (int j = 1; j <= m; ++j) adag.push_back(annihilation(m, j).adjoint());
  // b_1^dag ... b_n^dag |0>: apply b_n^dag first.
  for (int i = s.n() - 1; i >= 0; --i) {
    Matrix bdag = Matrix::Zero(dim, dim);
    for (int j = 0; j < m; ++j) bdag += std::conj(s.U()(i, j)) * adag[j];
    psi = bdag * psi;
  }
  return psi;
}

Eigen::VectorXd born_distribution(const Matrix& rho) { return rho.diagonal().real(); }

Matrix random_even_hermitian(int m, Rng& rng) {
  CoefficientMap c(m);
  for (const auto& mu : even_sequences(m)) c.set(mu, rng.normal());
  return operator_of(c);
}

}  // namespace fshadow::dense
