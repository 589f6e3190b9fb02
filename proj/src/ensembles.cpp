#include "fshadow/ensembles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fshadow/errors.hpp"

namespace fshadow {

std::string to_string(Ensemble e) { return e == Ensemble::full ? "full" : "matchings"; }

Ensemble parse_ensemble(const std::string& s) {
  if (s == "full") return Ensemble::full;
  if (s == "matchings") return Ensemble::matchings;
  throw std::invalid_argument("unknown ensemble '" + s + "' (expected full or matchings)");
}

PerfectMatching::PerfectMatching(std::vector<std::array<int, 2>> pairs) : pairs_(std::move(pairs)) {
  for (auto& pr : pairs_)
    if (pr[0] > pr[1]) std::swap(pr[0], pr[1]);
  std::sort(pairs_.begin(), pairs_.end());
  std::vector<char> seen(2 * pairs_.size(), 0);
  for (const auto& pr : pairs_)
    for (int v : pr) {
      if (v < 1 || v > static_cast<int>(seen.size()) || seen[v - 1])
        throw std::invalid_argument("pairs do not form a perfect matching of 1..2m");
      seen[v - 1] = 1;
    }
}

MajoranaPermutation PerfectMatching::representative() const {
  std::vector<int> p;
  p.reserve(2 * pairs_.size());
  for (const auto& pr : pairs_) p.insert(p.end(), pr.begin(), pr.end());
  return MajoranaPermutation(std::move(p)).inverse();
}

PerfectMatching matching_of(const MajoranaPermutation& p) {
  std::vector<std::array<int, 2>> pairs;
  const MajoranaPermutation inv = p.inverse();
  for (int i = 1; i <= p.m(); ++i) pairs.push_back({inv(2 * i - 1), inv(2 * i)});
  return PerfectMatching(std::move(pairs));
}

MajoranaPermutation sample_uniform_permutation(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("sample_uniform_permutation: m >= 1 required");
  std::vector<int> p(2 * m);
  std::iota(p.begin(), p.end(), 1);
  for (std::size_t i = p.size() - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return MajoranaPermutation(std::move(p));
}

MajoranaPermutation sample_matching_representative(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("sample_matching_representative: m >= 1 required");
  // Pair the smallest unmatched index with a uniformly chosen unmatched partner.
  std::vector<int> pool(2 * m);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> p;
  p.reserve(2 * m);
  while (!pool.empty()) {
    const int first = pool.front();
    pool.erase(pool.begin());
    const auto j = rng.below(pool.size());
    const int second = pool[j];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    p.push_back(first);
    p.push_back(second);
  }
  return MajoranaPermutation(std::move(p)).inverse();
}

MajoranaPermutation sample_basis(int m, Ensemble e, Rng& rng) {
  return e == Ensemble::full ? sample_uniform_permutation(m, rng) : sample_matching_representative(m, rng);
}

namespace {
void extend_matchings(std::vector<int>& pool, std::vector<std::array<int, 2>>& cur,
                      std::vector<PerfectMatching>& out) {
  if (pool.empty()) {
    out.emplace_back(cur);
    return;
  }
  const int first = pool.front();
  for (std::size_t j = 1; j < pool.size(); ++j) {
    const int second = pool[j];
    std::vector<int> rest;
    for (std::size_t r = 1; r < pool.size(); ++r)
      if (r != j) rest.push_back(pool[r]);
    cur.push_back({first, second});
    extend_matchings(rest, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<PerfectMatching> enumerate_matchings(int m) {
  require_guard(m, kMaxMatchingEnumerationModes, "enumerate_matchings");
  if (m < 1) throw std::invalid_argument("enumerate_matchings: m >= 1 required");
  std::vector<int> pool(2 * m);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<std::array<int, 2>> cur;
  std::vector<PerfectMatching> out;
  extend_matchings(pool, cur, out);
  return out;
}

std::vector<MajoranaPermutation> enumerate_permutations(int m) {
  require_guard(m, 4, "enumerate_permutations");
  std::vector<int> p(2 * m);
  std::iota(p.begin(), p.end(), 1);
  std::vector<MajoranaPermutation> out;
  do out.emplace_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::uint64_t double_factorial_odd(int m) {
  std::uint64_t r = 1;
  for (int k = 2 * m - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

}  // namespace fshadow
