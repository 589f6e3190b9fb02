#include "fshadow/majorana.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fshadow/errors.hpp"

namespace fshadow {

std::string to_string(const Bits& b) {
  std::string s(b.size(), '0');
  for (std::size_t i = 0; i < b.size(); ++i) s[i] = b[i] ? '1' : '0';
  return s;
}

Bits parse_bits(std::string_view s) {
  Bits b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1')
      throw std::invalid_argument("bitstring may only contain 0 and 1: " + std::string(s));
    b[i] = s[i] == '1';
  }
  return b;
}

int weight(const Bits& b) { return static_cast<int>(std::count(b.begin(), b.end(), 1)); }

int Phase::real_sign() const {
  if (!is_real()) throw std::domain_error("phase is imaginary");
  return k_ == 0 ? 1 : -1;
}

std::complex<double> Phase::value() const {
  static constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k_];
}

IndexSeq::IndexSeq(std::vector<int> indices) : idx_(std::move(indices)) {
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] < 1) throw InvalidSequence("Majorana indices start at 1");
    if (i > 0 && idx_[i] <= idx_[i - 1])
      throw InvalidSequence("index sequence must be strictly increasing");
  }
}

bool IndexSeq::contains(int j) const { return std::binary_search(idx_.begin(), idx_.end(), j); }

std::string IndexSeq::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx_[i]);
  }
  return s + ")";
}

int intersection_size(const IndexSeq& a, const IndexSeq& b) {
  int n = 0;
  std::size_t i = 0, j = 0;
  while (i < a.indices().size() && j < b.indices().size()) {
    if (a[i] == b[j]) ++n, ++i, ++j;
    else if (a[i] < b[j]) ++i;
    else ++j;
  }
  return n;
}

IndexSeq symmetric_difference(const IndexSeq& a, const IndexSeq& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.indices().begin(), a.indices().end(), b.indices().begin(),
                                b.indices().end(), std::back_inserter(out));
  return IndexSeq(std::move(out));
}

SignedSeq normalize(std::span<const int> raw) {
  int inversions = 0;
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (raw[i] == raw[j]) throw InvalidSequence("duplicate Majorana index " + std::to_string(raw[i]));
      inversions += raw[i] > raw[j];
    }
  std::vector<int> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end());
  return {IndexSeq(std::move(sorted)), inversions % 2 ? -1 : 1};
}

bool is_diagonal(const IndexSeq& seq) {
  if (!seq.even()) return false;
  for (int i = 0; i < seq.degree(); i += 2)
    if (seq[i] % 2 != 1 || seq[i + 1] != seq[i] + 1) return false;
  return true;
}

Bits bin_of(const IndexSeq& seq, int m) {
  if (!is_diagonal(seq)) throw InvalidSequence("bin_of: sequence " + seq.str() + " is not diagonal");
  if (!seq.fits(m)) throw InvalidSequence("bin_of: sequence " + seq.str() + " exceeds m");
  Bits b(m, 0);
  for (int i = 0; i < seq.degree(); i += 2) b[(seq[i] - 1) / 2] = 1;
  return b;
}

IndexSeq seq_of(const Bits& x) {
  std::vector<int> v;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) {
      v.push_back(static_cast<int>(2 * i + 1));
      v.push_back(static_cast<int>(2 * i + 2));
    }
  return IndexSeq(std::move(v));
}

IndexSeq seqx_of(const Bits& x) {
  std::vector<int> v;
  for (std::size_t i = 0; i < x.size(); ++i) v.push_back(static_cast<int>(2 * i + 1 + x[i]));
  return IndexSeq(std::move(v));
}

int diag_matrix_element(const IndexSeq& seq, const Bits& b) {
  const Bits x = bin_of(seq, static_cast<int>(b.size()));
  int parity = 0;
  for (std::size_t i = 0; i < b.size(); ++i) parity ^= (x[i] & b[i]);
  return parity ? -1 : 1;
}

namespace {
int choose2(int k) { return k * (k - 1) / 2; }
}  // namespace

PhasedSeq gamma_product(const IndexSeq& a, const IndexSeq& b) {
  // gamma_a gamma_b = (-1)^{#{a_i > b_j}} gamma_{a xor b}; equal pairs square to 1.
  int swaps = 0;
  for (int x : a.indices())
    for (int y : b.indices()) swaps += x > y;
  IndexSeq c = symmetric_difference(a, b);
  // Gamma_s = (-i)^{C(|s|,2)} gamma_s  =>  gamma_s = i^{C(|s|,2)} Gamma_s.
  const int k = -choose2(a.degree()) - choose2(b.degree()) + 2 * (swaps % 2) + choose2(c.degree());
  return {std::move(c), Phase::i_pow(k)};
}

MajoranaPermutation MajoranaPermutation::identity(int m) {
  std::vector<int> p(2 * m);
  std::iota(p.begin(), p.end(), 1);
  return MajoranaPermutation(std::move(p));
}

MajoranaPermutation::MajoranaPermutation(std::vector<int> images) : p_(std::move(images)) {
  if (p_.size() % 2) throw std::invalid_argument("permutation length must be even (2m)");
  std::vector<char> seen(p_.size(), 0);
  for (int v : p_) {
    if (v < 1 || v > static_cast<int>(p_.size()) || seen[v - 1])
      throw std::invalid_argument("not a permutation of 1..2m");
    seen[v - 1] = 1;
  }
}

MajoranaPermutation MajoranaPermutation::inverse() const {
  std::vector<int> q(p_.size());
  for (std::size_t j = 0; j < p_.size(); ++j) q[p_[j] - 1] = static_cast<int>(j + 1);
  return MajoranaPermutation(std::move(q));
}

int MajoranaPermutation::parity() const {
  std::vector<char> seen(p_.size(), 0);
  int transpositions = 0;
  for (std::size_t s = 0; s < p_.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (std::size_t j = s; !seen[j]; j = p_[j] - 1) seen[j] = 1, ++len;
    transpositions += len - 1;
  }
  return transpositions % 2 ? -1 : 1;
}

MajoranaPermutation compose(const MajoranaPermutation& p, const MajoranaPermutation& q) {
  if (p.size() != q.size()) throw std::invalid_argument("compose: size mismatch");
  std::vector<int> r(p.size());
  for (int j = 1; j <= p.size(); ++j) r[j - 1] = p(q(j));
  return MajoranaPermutation(std::move(r));
}

SignedSeq permute(const MajoranaPermutation& p, const IndexSeq& seq) {
  if (!seq.fits(p.m())) throw InvalidSequence("permute: sequence " + seq.str() + " exceeds 2m");
  std::vector<int> raw;
  raw.reserve(seq.degree());
  for (int j : seq.indices()) raw.push_back(p(j));
  return normalize(raw);
}

CoefficientMap::CoefficientMap(int m) : m_(m) {
  if (m < 0) throw std::invalid_argument("mode count must be nonnegative");
}

void CoefficientMap::check(const IndexSeq& mu) const {
  if (!mu.fits(m_)) throw InvalidSequence("sequence " + mu.str() + " exceeds 2m for m=" + std::to_string(m_));
}

void CoefficientMap::set(const IndexSeq& mu, double value) {
  check(mu);
  entries_[mu] = value;
}

void CoefficientMap::add(const IndexSeq& mu, double value) {
  check(mu);
  entries_[mu] += value;
}

double CoefficientMap::get(const IndexSeq& mu) const {
  auto it = entries_.find(mu);
  return it == entries_.end() ? 0.0 : it->second;
}

bool CoefficientMap::all_even() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return e.first.even() || e.second == 0.0; });
}

double coefficient_at_product(const CoefficientMap& rho, const IndexSeq& a, const IndexSeq& b) {
  const PhasedSeq prod = gamma_product(a, b);
  if (!prod.phase.is_real())
    throw std::domain_error("coefficient_at_product: Gamma_a Gamma_b is anti-Hermitian");
  return prod.phase.real_sign() * rho.get(prod.seq);
}

std::vector<IndexSeq> sequences_of_degree(int m, int degree) {
  require_guard(m, kMaxEnumerationModes, "sequences_of_degree");
  std::vector<IndexSeq> out;
  if (degree < 0 || degree > 2 * m) return out;
  std::vector<int> cur(degree);
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.emplace_back(cur);
    int i = degree - 1;
    while (i >= 0 && cur[i] == 2 * m - (degree - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < degree; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<IndexSeq> even_sequences(int m) {
  std::vector<IndexSeq> out;
  for (int k = 0; k <= 2 * m; k += 2)
    for (auto& s : sequences_of_degree(m, k)) out.push_back(std::move(s));
  return out;
}

std::vector<IndexSeq> all_sequences(int m) {
  std::vector<IndexSeq> out;
  for (int k = 0; k <= 2 * m; ++k)
    for (auto& s : sequences_of_degree(m, k)) out.push_back(std::move(s));
  return out;
}

}  // namespace fshadow
