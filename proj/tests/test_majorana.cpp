#include <gtest/gtest.h>

#include <numeric>

#include "fshadow/dense_oracle.hpp"
#include "fshadow/errors.hpp"
#include "fshadow/majorana.hpp"

using namespace fshadow;

namespace {

double dense_distance(const dense::Matrix& a, const dense::Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

IndexSeq random_seq(int m, Rng& rng) {
  std::vector<int> v;
  for (int j = 1; j <= 2 * m; ++j)
    if (rng.below(2)) v.push_back(j);
  return IndexSeq(v);
}

MajoranaPermutation random_perm(int m, Rng& rng) {
  std::vector<int> p(2 * m);
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng.engine());
  return MajoranaPermutation(p);
}

}  // namespace

TEST(Normalize, SortedInputKeepsSign) {
  const std::vector<int> raw{1, 2};
  const auto r = normalize(raw);
  EXPECT_EQ(r.seq, IndexSeq({1, 2}));
  EXPECT_EQ(r.sign, 1);
}

TEST(Normalize, SingleTranspositionFlipsSign) {
  const std::vector<int> raw{2, 1};
  const auto r = normalize(raw);
  EXPECT_EQ(r.seq, IndexSeq({1, 2}));
  EXPECT_EQ(r.sign, -1);
}

TEST(Normalize, ThreeCycleIsEvenAndMatchesDenseProduct) {
  const std::vector<int> raw{3, 1, 2};
  const auto r = normalize(raw);
  EXPECT_EQ(r.seq, IndexSeq({1, 2, 3}));
  EXPECT_EQ(r.sign, 1);
  EXPECT_LT(dense_distance(dense::gamma_raw_dense(2, raw), r.sign * dense::gamma_dense(2, r.seq)), 1e-14);
}

TEST(Normalize, DuplicatesThrow) {
  const std::vector<int> raw{1, 3, 1};
  EXPECT_THROW(normalize(raw), InvalidSequence);
}

TEST(Normalize, RandomRawOrdersAgreeWithDense) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> raw;
    for (int j = 1; j <= 6; ++j)
      if (rng.below(2)) raw.push_back(j);
    std::shuffle(raw.begin(), raw.end(), rng.engine());
    const auto r = normalize(raw);
    EXPECT_LT(dense_distance(dense::gamma_raw_dense(3, raw), r.sign * dense::gamma_dense(3, r.seq)), 1e-13);
    const auto again = normalize(r.seq.indices());
    EXPECT_EQ(again.sign, 1);
    EXPECT_EQ(again.seq, r.seq);
  }
}

TEST(IndexSeqTest, RejectsUnsortedOrNonPositive) {
  EXPECT_THROW(IndexSeq({2, 1}), InvalidSequence);
  EXPECT_THROW(IndexSeq({0, 1}), InvalidSequence);
  EXPECT_THROW(IndexSeq({1, 1}), InvalidSequence);
  EXPECT_EQ(IndexSeq({1, 2, 5}).str(), "(1,2,5)");
  EXPECT_EQ(IndexSeq().str(), "()");
}

TEST(Diagonal, Examples) {
  EXPECT_TRUE(is_diagonal(IndexSeq({1, 2, 5, 6})));
  EXPECT_FALSE(is_diagonal(IndexSeq({1, 3})));
  EXPECT_TRUE(is_diagonal(IndexSeq()));
  EXPECT_FALSE(is_diagonal(IndexSeq({2, 3})));
}

TEST(Diagonal, BinAndSeqRoundTrip) {
  EXPECT_EQ(to_string(bin_of(IndexSeq({1, 2}), 2)), "10");
  EXPECT_EQ(seq_of(parse_bits("01")), IndexSeq({3, 4}));
  EXPECT_EQ(to_string(bin_of(IndexSeq(), 3)), "000");
  EXPECT_THROW(bin_of(IndexSeq({1, 3}), 2), InvalidSequence);
  for (int x = 0; x < 16; ++x) {
    const Bits b = dense::bits_of_index(x, 4);
    EXPECT_EQ(bin_of(seq_of(b), 4), b);
  }
}

TEST(Diagonal, SeqOfIsProductOfModeParities) {
  const Bits x = parse_bits("101");
  dense::Matrix prod = dense::Matrix::Identity(8, 8);
  for (int i = 1; i <= 3; ++i)
    if (x[i - 1]) prod = prod * (std::complex<double>(0, -1) * dense::majorana(3, 2 * i - 1) * dense::majorana(3, 2 * i));
  EXPECT_LT(dense_distance(prod, dense::gamma_dense(3, seq_of(x))), 1e-14);
}

TEST(Diagonal, MatrixElementExamples) {
  EXPECT_EQ(diag_matrix_element(IndexSeq({1, 2}), parse_bits("1")), -1);
  EXPECT_EQ(diag_matrix_element(IndexSeq(), parse_bits("0110")), 1);
  EXPECT_EQ(diag_matrix_element(IndexSeq({1, 2, 3, 4}), parse_bits("11")), 1);
  EXPECT_THROW(diag_matrix_element(IndexSeq({1, 3}), parse_bits("00")), InvalidSequence);
  EXPECT_THROW(diag_matrix_element(IndexSeq({1, 2}), Bits{}), std::invalid_argument);
}

TEST(Diagonal, MatrixElementsMatchDense) {
  const int m = 3;
  for (const auto& mu : all_sequences(m)) {
    const auto G = dense::gamma_dense(m, mu);
    for (std::size_t idx = 0; idx < 8; ++idx) {
      const Bits b = dense::bits_of_index(idx, m);
      const auto v = G(idx, idx);
      if (is_diagonal(mu))
        EXPECT_NEAR(v.real(), diag_matrix_element(mu, b), 1e-14) << mu.str();
      else
        EXPECT_NEAR(std::abs(v), 0.0, 1e-14) << mu.str();
    }
  }
}

TEST(PhaseTest, Arithmetic) {
  const Phase i = Phase::i_pow(1);
  EXPECT_EQ(i * i, Phase::sign(-1));
  EXPECT_EQ(i.conj() * i, Phase());
  EXPECT_EQ(Phase::i_pow(-1), Phase::i_pow(3));
  EXPECT_THROW(i.real_sign(), std::domain_error);
  EXPECT_EQ(Phase::sign(-1).real_sign(), -1);
}

TEST(GammaProduct, SquareIsIdentity) {
  for (const auto& mu : all_sequences(2)) {
    const auto r = gamma_product(mu, mu);
    EXPECT_TRUE(r.seq.empty());
    EXPECT_EQ(r.phase, Phase());
  }
}

TEST(GammaProduct, EmptyIsNeutral) {
  const IndexSeq mu{1, 3, 4};
  const auto r = gamma_product(IndexSeq(), mu);
  EXPECT_EQ(r.seq, mu);
  EXPECT_EQ(r.phase, Phase());
}

TEST(GammaProduct, DisjointPairsAtTwoModes) {
  const auto r = gamma_product(IndexSeq({1, 2}), IndexSeq({3, 4}));
  EXPECT_EQ(r.seq, IndexSeq({1, 2, 3, 4}));
  const dense::Matrix want = dense::gamma_dense(2, IndexSeq({1, 2})) * dense::gamma_dense(2, IndexSeq({3, 4}));
  EXPECT_LT(dense_distance(want, r.phase.value() * dense::gamma_dense(2, r.seq)), 1e-14);
}

TEST(GammaProduct, AllPairsMatchDenseAtThreeModes) {
  const int m = 3;
  const auto seqs = all_sequences(m);
  std::vector<dense::Matrix> G;
  for (const auto& s : seqs) G.push_back(dense::gamma_dense(m, s));
  for (std::size_t a = 0; a < seqs.size(); ++a)
    for (std::size_t b = 0; b < seqs.size(); ++b) {
      const auto r = gamma_product(seqs[a], seqs[b]);
      EXPECT_LT(dense_distance(G[a] * G[b], r.phase.value() * dense::gamma_dense(m, r.seq)), 1e-13)
          << seqs[a].str() << seqs[b].str();
    }
}

TEST(GammaProduct, AssociativeOnRandomTriples) {
  Rng rng(11);
  const int m = 4;
  for (int t = 0; t < 40; ++t) {
    const IndexSeq a = random_seq(m, rng), b = random_seq(m, rng), c = random_seq(m, rng);
    const auto ab = gamma_product(a, b);
    const auto ab_c = gamma_product(ab.seq, c);
    const auto bc = gamma_product(b, c);
    const auto a_bc = gamma_product(a, bc.seq);
    EXPECT_EQ(ab_c.seq, a_bc.seq);
    EXPECT_EQ(ab.phase * ab_c.phase, bc.phase * a_bc.phase);
    const dense::Matrix dense_prod = dense::gamma_dense(m, a) * dense::gamma_dense(m, b) * dense::gamma_dense(m, c);
    EXPECT_LT(dense_distance(dense_prod, (ab.phase * ab_c.phase).value() * dense::gamma_dense(m, ab_c.seq)), 1e-12);
  }
}

TEST(GammaProduct, BinxIdentityForAllBitstrings) {
  for (int m = 1; m <= 4; ++m)
    for (std::size_t xi = 0; xi < (std::size_t{1} << m); ++xi)
      for (std::size_t yi = 0; yi < (std::size_t{1} << m); ++yi) {
        const Bits x = dense::bits_of_index(xi, m), y = dense::bits_of_index(yi, m);
        Bits z(m);
        for (int i = 0; i < m; ++i) z[i] = x[i] ^ y[i];
        const auto r = gamma_product(seqx_of(x), seqx_of(y));
        EXPECT_EQ(r.seq, seq_of(z));
        EXPECT_EQ(r.phase, Phase::i_pow(weight(y) - weight(x))) << to_string(x) << " " << to_string(y);
      }
}

TEST(Permutation, ValidatesBijection) {
  EXPECT_THROW(MajoranaPermutation({1, 1}), std::invalid_argument);
  EXPECT_THROW(MajoranaPermutation({1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(MajoranaPermutation({0, 1}), std::invalid_argument);
  const MajoranaPermutation p({2, 3, 1, 4});
  EXPECT_EQ(compose(p, p.inverse()), MajoranaPermutation::identity(2));
  EXPECT_EQ(MajoranaPermutation({2, 1}).parity(), -1);
  EXPECT_EQ(p.parity(), 1);
}

TEST(Permute, Examples) {
  const auto id = permute(MajoranaPermutation::identity(2), IndexSeq({1, 3}));
  EXPECT_EQ(id.seq, IndexSeq({1, 3}));
  EXPECT_EQ(id.sign, 1);
  const MajoranaPermutation swap({2, 1});
  const auto s = permute(swap, IndexSeq({1, 2}));
  EXPECT_EQ(s.seq, IndexSeq({1, 2}));
  EXPECT_EQ(s.sign, -1);
  const auto U = dense::unitary_of_permutation_dense(swap);
  EXPECT_LT(dense_distance(U * dense::gamma_dense(1, IndexSeq({1, 2})) * U.adjoint(), -dense::gamma_dense(1, IndexSeq({1, 2}))),
            1e-14);
  const auto e = permute(swap, IndexSeq());
  EXPECT_TRUE(e.seq.empty());
  EXPECT_EQ(e.sign, 1);
}

TEST(Permute, InverseRoundTrip) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_perm(4, rng);
    const IndexSeq mu = random_seq(4, rng);
    const auto fwd = permute(p, mu);
    const auto back = permute(p.inverse(), fwd.seq);
    EXPECT_EQ(back.seq, mu);
    EXPECT_EQ(fwd.sign * back.sign, 1);
  }
}

TEST(Permute, HomomorphismAgreesWithDenseConjugation) {
  Rng rng(5);
  for (int m = 1; m <= 4; ++m)
    for (int t = 0; t < 10; ++t) {
      const auto p = random_perm(m, rng), q = random_perm(m, rng);
      const IndexSeq mu = random_seq(m, rng);
      const auto direct = permute(compose(p, q), mu);
      const auto inner = permute(q, mu);
      const auto outer = permute(p, inner.seq);
      EXPECT_EQ(direct.seq, outer.seq);
      EXPECT_EQ(direct.sign, inner.sign * outer.sign);
      const auto U = dense::unitary_of_permutation_dense(compose(p, q));
      EXPECT_LT(dense_distance(U * dense::gamma_dense(m, mu) * U.adjoint(), direct.sign * dense::gamma_dense(m, direct.seq)),
                1e-12);
    }
}

TEST(Coefficients, MapRejectsSequencesThatDoNotFit) {
  CoefficientMap c(2);
  EXPECT_THROW(c.set(IndexSeq({1, 5}), 1.0), InvalidSequence);
  c.set(IndexSeq({1, 2}), 0.5);
  c.add(IndexSeq({1, 2}), 0.25);
  EXPECT_DOUBLE_EQ(c.get(IndexSeq({1, 2})), 0.75);
  EXPECT_DOUBLE_EQ(c.get(IndexSeq({3, 4})), 0.0);
  EXPECT_TRUE(c.all_even());
  c.set(IndexSeq({1}), 1.0);
  EXPECT_FALSE(c.all_even());
}

TEST(Coefficients, ProductCoefficientExamples) {
  Rng rng(13);
  const int m = 2;
  const auto rho = dense::random_gaussian_state(m, rng, false);
  const auto g = dense::coefficients_of(rho);
  const IndexSeq mu{1, 3};
  EXPECT_NEAR(coefficient_at_product(g, mu, mu), 0.25, 1e-14);
  EXPECT_NEAR(coefficient_at_product(g, IndexSeq(), IndexSeq({1, 2})), g.get(IndexSeq({1, 2})), 1e-14);
  EXPECT_THROW(coefficient_at_product(g, IndexSeq({1, 2}), IndexSeq({2, 3})), std::domain_error);
}

TEST(Coefficients, ProductCoefficientMatchesDenseTrace) {
  Rng rng(17);
  const int m = 3;
  const auto rho = dense::random_gaussian_state(m, rng, false);
  const auto g = dense::coefficients_of(rho, 0.0);
  const auto evens = even_sequences(m);
  for (const auto& a : evens)
    for (const auto& b : evens) {
      if (intersection_size(a, b) % 2) continue;
      const auto want = (dense::gamma_dense(m, a) * dense::gamma_dense(m, b) * rho).trace() / 8.0;
      EXPECT_NEAR(coefficient_at_product(g, a, b), want.real(), 1e-13);
      EXPECT_NEAR(want.imag(), 0.0, 1e-13);
    }
}

TEST(Enumeration, CountsAndGuards) {
  EXPECT_EQ(all_sequences(3).size(), 64u);
  EXPECT_EQ(even_sequences(3).size(), 32u);
  EXPECT_EQ(sequences_of_degree(3, 2).size(), 15u);
  EXPECT_THROW(all_sequences(9), GuardError);
}

TEST(BitsTest, ParseAndFormat) {
  EXPECT_EQ(to_string(parse_bits("0110")), "0110");
  EXPECT_THROW(parse_bits("012"), std::invalid_argument);
  EXPECT_EQ(weight(parse_bits("0110")), 2);
}
