#pragma once

// Index algebra for normalized Majorana monomials
//   Gamma_mu = (-i)^{k(k-1)/2} gamma_{mu_1} ... gamma_{mu_k},   mu_1 < ... < mu_k.
// All indices are 1-based: Majorana operators are gamma_1 .. gamma_{2m}, modes are 1 .. m.
// Under Jordan-Wigner gamma_{2i-1} = a_i + a_i^dag and gamma_{2i} = -i (a_i - a_i^dag),
// so Gamma_{(2i-1,2i)} = Z_i.

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fshadow {

/// Bitstring over modes; entry i-1 is the bit of mode i.
using Bits = std::vector<std::uint8_t>;

std::string to_string(const Bits& b);
/// Parses a string of '0'/'1'. Throws std::invalid_argument otherwise.
Bits parse_bits(std::string_view s);
int weight(const Bits& b);

/// An element of {1, i, -1, -i}, stored as the exponent of i.
class Phase {
 public:
  constexpr Phase() = default;
  static constexpr Phase i_pow(int k) { return Phase(static_cast<std::uint8_t>(((k % 4) + 4) % 4)); }
  static constexpr Phase sign(int s) { return i_pow(s < 0 ? 2 : 0); }

  constexpr int exponent() const { return k_; }
  constexpr bool is_real() const { return k_ % 2 == 0; }
  /// +1 or -1; throws std::domain_error when the phase is imaginary.
  int real_sign() const;
  std::complex<double> value() const;

  constexpr Phase operator*(Phase o) const { return i_pow(k_ + o.k_); }
  constexpr Phase conj() const { return i_pow(4 - k_); }
  constexpr bool operator==(const Phase&) const = default;

 private:
  constexpr explicit Phase(std::uint8_t k) : k_(k) {}
  std::uint8_t k_ = 0;
};

/// Strictly increasing list of positive Majorana indices. The mode count is not stored;
/// routines that need it take m and check `fits(m)`.
class IndexSeq {
 public:
  IndexSeq() = default;
  /// Throws InvalidSequence unless strictly increasing with entries >= 1.
  explicit IndexSeq(std::vector<int> indices);
  IndexSeq(std::initializer_list<int> indices) : IndexSeq(std::vector<int>(indices)) {}

  std::span<const int> indices() const { return idx_; }
  int degree() const { return static_cast<int>(idx_.size()); }
  bool even() const { return idx_.size() % 2 == 0; }
  bool empty() const { return idx_.empty(); }
  bool fits(int m) const { return idx_.empty() || idx_.back() <= 2 * m; }
  bool contains(int j) const;
  int operator[](std::size_t i) const { return idx_[i]; }

  /// e.g. "(1,2,5)"; the empty sequence prints as "()".
  std::string str() const;

  auto operator<=>(const IndexSeq&) const = default;

 private:
  std::vector<int> idx_;
};

int intersection_size(const IndexSeq& a, const IndexSeq& b);
IndexSeq symmetric_difference(const IndexSeq& a, const IndexSeq& b);

struct SignedSeq {
  IndexSeq seq;
  int sign;
};

struct PhasedSeq {
  IndexSeq seq;
  Phase phase;
};

/// Sort a list of distinct indices. Gamma_raw = sign * Gamma_seq, where Gamma_raw carries the
/// same (-i)^{k(k-1)/2} prefactor as the sorted monomial. Duplicates throw InvalidSequence.
SignedSeq normalize(std::span<const int> raw);

/// Union of adjacent pairs (2i-1, 2i).
bool is_diagonal(const IndexSeq& seq);
/// Throws InvalidSequence on a non-diagonal sequence or one that does not fit m modes.
Bits bin_of(const IndexSeq& seq, int m);
IndexSeq seq_of(const Bits& x);
/// The sequence (2i-1+x_i)_{i=1..j} for x of length j.
IndexSeq seqx_of(const Bits& x);
/// (-1)^{b . bin(seq)}, the value of <b|Gamma_seq|b>.
int diag_matrix_element(const IndexSeq& seq, const Bits& b);

/// Gamma_a Gamma_b = phase * Gamma_{a xor b}.
PhasedSeq gamma_product(const IndexSeq& a, const IndexSeq& b);

/// Permutation p of {1..2m}. U(p) Gamma_mu U(p)^dag = Gamma_{p(mu)}.
class MajoranaPermutation {
 public:
  static MajoranaPermutation identity(int m);
  /// images[j-1] = p(j). Throws std::invalid_argument unless a bijection of {1..2m}.
  explicit MajoranaPermutation(std::vector<int> images);

  int m() const { return static_cast<int>(p_.size() / 2); }
  int size() const { return static_cast<int>(p_.size()); }
  int operator()(int j) const { return p_[j - 1]; }
  std::span<const int> images() const { return p_; }
  MajoranaPermutation inverse() const;
  /// Parity of the permutation as +1 / -1.
  int parity() const;

  auto operator<=>(const MajoranaPermutation&) const = default;

 private:
  std::vector<int> p_;
};

/// (p * q)(j) = p(q(j)).
MajoranaPermutation compose(const MajoranaPermutation& p, const MajoranaPermutation& q);

SignedSeq permute(const MajoranaPermutation& p, const IndexSeq& seq);

/// Sparse real coefficients in the Majorana basis: operator = sum_mu c_mu Gamma_mu.
class CoefficientMap {
 public:
  explicit CoefficientMap(int m);

  int m() const { return m_; }
  void set(const IndexSeq& mu, double value);
  void add(const IndexSeq& mu, double value);
  double get(const IndexSeq& mu) const;
  const std::map<IndexSeq, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool all_even() const;

 private:
  void check(const IndexSeq& mu) const;
  int m_;
  std::map<IndexSeq, double> entries_;
};

/// Coefficient of rho against Gamma_a Gamma_b, i.e. 2^{-m} Tr[Gamma_a Gamma_b rho], for even
/// a, b with even overlap. Throws std::domain_error when the product phase is imaginary.
double coefficient_at_product(const CoefficientMap& rho, const IndexSeq& a, const IndexSeq& b);

/// All sequences of the given degree in {1..2m}, lexicographic. Guarded at m <= 8.
std::vector<IndexSeq> sequences_of_degree(int m, int degree);
/// All even (resp. all) sequences, ordered by degree then lexicographically. m <= 8.
std::vector<IndexSeq> even_sequences(int m);
std::vector<IndexSeq> all_sequences(int m);

constexpr int kMaxEnumerationModes = 8;

}  // namespace fshadow
