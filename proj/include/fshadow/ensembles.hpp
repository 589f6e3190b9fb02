#pragma once

// Measurement-basis ensembles: uniform permutations of the 2m Majorana operators and the
// reduced ensemble with one representative per perfect matching.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fshadow/majorana.hpp"
#include "fshadow/rng.hpp"

namespace fshadow {

enum class Ensemble { full, matchings };

std::string to_string(Ensemble e);
/// "full" or "matchings"; std::invalid_argument otherwise.
Ensemble parse_ensemble(const std::string& s);

/// m unordered pairs covering {1..2m}, stored with first < second and sorted by first.
class PerfectMatching {
 public:
  explicit PerfectMatching(std::vector<std::array<int, 2>> pairs);
  int m() const { return static_cast<int>(pairs_.size()); }
  const std::vector<std::array<int, 2>>& pairs() const { return pairs_; }
  /// The permutation whose inverse lists each pair in increasing order, pairs ordered by
  /// first element, so that U(p) maps pair i onto Majoranas 2i-1, 2i.
  MajoranaPermutation representative() const;
  auto operator<=>(const PerfectMatching&) const = default;

 private:
  std::vector<std::array<int, 2>> pairs_;
};

/// The pairs measured together in the basis U(p): {{q_1,q_2}, {q_3,q_4}, ...} with q = p^{-1},
/// since U(p) Gamma_(q_{2i-1}, q_{2i}) U(p)^dag = Gamma_(2i-1, 2i).
PerfectMatching matching_of(const MajoranaPermutation& p);

MajoranaPermutation sample_uniform_permutation(int m, Rng& rng);
MajoranaPermutation sample_matching_representative(int m, Rng& rng);
MajoranaPermutation sample_basis(int m, Ensemble e, Rng& rng);

constexpr int kMaxMatchingEnumerationModes = 8;

/// All (2m-1)!! matchings in lexicographic order. Guarded at m <= 8.
std::vector<PerfectMatching> enumerate_matchings(int m);
/// All (2m)! permutations in lexicographic order. Guarded at m <= 4.
std::vector<MajoranaPermutation> enumerate_permutations(int m);

std::uint64_t double_factorial_odd(int m);  ///< (2m-1)!!

}  // namespace fshadow
