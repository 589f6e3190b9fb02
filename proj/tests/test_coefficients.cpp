#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fshadow/coefficients.hpp"
#include "fshadow/ensembles.hpp"
#include "fshadow/errors.hpp"
#include "fshadow/majorana.hpp"

using namespace fshadow;

namespace {

// Fraction of permutations of [2m] sending `mu` to a diagonal sequence, and the joint
// fraction for a pair of sequences.
mpq_class diagonal_fraction(int m, const IndexSeq& mu) {
  long hits = 0, total = 0;
  for (const auto& p : enumerate_permutations(m)) {
    ++total;
    hits += is_diagonal(permute(p, mu).seq);
  }
  mpq_class q(hits, total);
  q.canonicalize();
  return q;
}

mpq_class joint_fraction(int m, const IndexSeq& a, const IndexSeq& b) {
  long hits = 0, total = 0;
  for (const auto& p : enumerate_permutations(m)) {
    ++total;
    hits += is_diagonal(permute(p, a).seq) && is_diagonal(permute(p, b).seq);
  }
  mpq_class q(hits, total);
  q.canonicalize();
  return q;
}

IndexSeq range_seq(int lo, int hi) {
  std::vector<int> v(hi - lo + 1);
  std::iota(v.begin(), v.end(), lo);
  return IndexSeq(v);
}

}  // namespace

TEST(Lambda, Examples) {
  for (int m = 1; m <= 10; ++m) {
    EXPECT_EQ(lambda(m, 0), 1);
    EXPECT_EQ(lambda(m, m), 1);
  }
  EXPECT_EQ(lambda(2, 1), mpq_class(1, 3));
  EXPECT_THROW(lambda(2, 3), std::domain_error);
  EXPECT_THROW(lambda(2, -1), std::domain_error);
  EXPECT_EQ(lambda_of_degree(3, 3), 0);
  EXPECT_EQ(lambda_of_degree(3, 4), lambda(3, 2));
}

TEST(Lambda, EqualsExhaustivePermutationFraction) {
  for (int m = 1; m <= 4; ++m)
    for (int k = 0; k <= m; ++k) EXPECT_EQ(diagonal_fraction(m, range_seq(1, 2 * k)), lambda(m, k)) << m << "," << k;
  // a sequence that is not itself diagonal
  EXPECT_EQ(diagonal_fraction(3, IndexSeq({1, 3})), lambda(3, 1));
}

TEST(Lambda, ExactForLargeModeCounts) {
  // binom(2m, 2k) overflows 64 bits around m = 33
  const mpq_class l = lambda(80, 40);
  mpq_class want(binomial(80, 40), binomial(160, 80));
  want.canonicalize();
  EXPECT_EQ(l, want);
  EXPECT_GT(to_double(l), 0.0);
  EXPECT_NEAR(to_double(l) / (to_double(mpq_class(binomial(80, 40))) / to_double(mpq_class(binomial(160, 80)))), 1.0,
              1e-14);
}

TEST(LambdaJoint, Examples) {
  for (int m = 1; m <= 5; ++m)
    for (int k = 0; k <= m; ++k) EXPECT_EQ(lambda_joint(m, k, k, k), lambda(m, k));
  EXPECT_EQ(lambda_joint(2, 1, 1, 0), mpq_class(1, 3));
  EXPECT_EQ(lambda_joint(2, 1, 1, 1), mpq_class(1, 3));
  EXPECT_EQ(lambda_joint(2, 2, 2, 0), 0);  // out of range overlap
  EXPECT_EQ(lambda_joint(3, 1, 1, 2), 0);
}

TEST(LambdaJoint, EqualsExhaustiveJointFraction) {
  // two degree-2k, 2k' sequences overlapping in 2a indices
  for (int m = 1; m <= 3; ++m)
    for (int k = 0; k <= m; ++k)
      for (int kp = 0; kp <= m; ++kp)
        for (int a = 0; a <= std::min(k, kp); ++a) {
          if (k + kp - a > m) continue;
          const IndexSeq A = range_seq(1, 2 * k);
          std::vector<int> b;
          for (int j = 2 * (k - a) + 1; j <= 2 * k; ++j) b.push_back(j);
          for (int j = 2 * k + 1; j <= 2 * k + 2 * (kp - a); ++j) b.push_back(j);
          const IndexSeq B(b);
          EXPECT_EQ(joint_fraction(m, A, B), lambda_joint(m, k, kp, a)) << m << k << kp << a;
        }
}

TEST(LambdaJoint, Symmetric) {
  for (int m = 1; m <= 8; ++m)
    for (int k = 0; k <= m; ++k)
      for (int kp = 0; kp <= m; ++kp)
        for (int a = 0; a <= m; ++a) EXPECT_EQ(lambda_joint(m, k, kp, a), lambda_joint(m, kp, k, a));
}

TEST(MomentWeight, Examples) {
  for (int m = 1; m <= 5; ++m)
    for (int k = 0; k <= m; ++k) EXPECT_EQ(moment_weight(m, k, k, k), 1 / lambda(m, k));
  EXPECT_EQ(moment_weight(2, 1, 1, 1), 3);
  EXPECT_EQ(moment_weight(2, 1, 1, 0), 3);
  EXPECT_EQ(moment_weight_of_degrees(2, 2, 2, 1), 0);
  EXPECT_EQ(moment_weight_of_degrees(2, 2, 2, 2), 3);
}

TEST(MomentWeight, TableMatchesExactValues) {
  for (int m = 1; m <= 9; ++m) {
    const MomentWeightTable t(m);
    for (int k = 0; k <= m; ++k)
      for (int kp = 0; kp <= m; ++kp)
        for (int a = 0; a <= m; ++a) EXPECT_NEAR(t(k, kp, a), to_double(moment_weight(m, k, kp, a)), 1e-12 * t(k, kp, a));
  }
}

TEST(InverseDiag, SingleModeIsIdentityChannel) {
  const auto d = inverse_diag_decomposition(1);
  ASSERT_EQ(d.f.size(), 2u);
  EXPECT_EQ(d.f_exact[0], 1);
  EXPECT_EQ(d.f_exact[1], 0);
}

TEST(InverseDiag, TracePreservedExactly) {
  for (int m = 1; m <= 64; ++m) {
    const auto d = inverse_diag_decomposition(m);
    mpq_class total = 0;
    for (int i = 0; i <= m; ++i) total += mpq_class(binomial(m, i)) * d.f_exact[i];
    EXPECT_EQ(total, 1) << "m=" << m;
  }
}

TEST(InverseDiag, DftReproducesWeights) {
  for (int m = 1; m <= 30; ++m) {
    const auto d = inverse_diag_decomposition(m);
    double scale = 0;
    for (double f : d.f) scale = std::max(scale, std::abs(f));
    for (int i = 0; i <= m; ++i) {
      std::complex<double> s = 0;
      for (int j = 0; j <= m; ++j) s += d.c[j] * std::pow(d.omega, -i * j);
      EXPECT_NEAR(s.real(), d.f[i], 1e-10 * scale) << m << "," << i;
      EXPECT_NEAR(s.imag(), 0.0, 1e-10 * scale);
    }
  }
}

TEST(XType, ZeroElectronsReducesToProjector) {
  const auto p = inverse_diag_decomposition(2);
  const auto x = xtype_decomposition(2, 0);
  ASSERT_EQ(x.g.size(), p.f.size());
  for (std::size_t i = 0; i < p.f.size(); ++i) {
    EXPECT_EQ(x.g_exact[i], p.f_exact[i]);
    EXPECT_NEAR(std::abs(x.c[i] - p.c[i]), 0.0, 1e-12);
  }
}

TEST(XType, FullyOffDiagonalHasOneClass) {
  for (int m = 2; m <= 8; m += 2) {
    const auto x = xtype_decomposition(m, m);
    ASSERT_EQ(x.c.size(), 1u);
    EXPECT_EQ(x.g_exact[0], 1 / lambda(m, m / 2));
    EXPECT_NEAR(x.c[0].real(), to_double(1 / lambda(m, m / 2)), 1e-12);
  }
}

TEST(XType, OddElectronCountRejected) {
  EXPECT_THROW(xtype_decomposition(3, 1), std::invalid_argument);
  EXPECT_THROW(xtype_decomposition(2, 4), std::invalid_argument);
}

TEST(NormBounds, ProjectorBoundSmallCases) {
  EXPECT_DOUBLE_EQ(projector_norm_bound(1), 1.0);
  EXPECT_DOUBLE_EQ(projector_norm_bound(2), 1.5);
  for (int m = 1; m <= 10; ++m) EXPECT_NEAR(projector_norm_bound(m), to_double(projector_norm_bound_exact(m)), 1e-12 * m);
}

TEST(NormBounds, XTypeBoundAtZeroElectronsIsProjectorBound) {
  for (int m = 1; m <= 20; ++m) EXPECT_DOUBLE_EQ(xtype_norm_bound(m, 0), projector_norm_bound(m));
  EXPECT_DOUBLE_EQ(xtype_norm_bound_printed(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(xtype_norm_bound(1, 0), 1.0);
}

TEST(Inequalities, BinomialRatioBound) {
  for (int m = 0; m <= 64; ++m)
    for (int k = 0; k <= m; ++k) {
      mpz_class rhs = binomial(m, k);
      rhs <<= m;
      EXPECT_LE(binomial(2 * m, 2 * k), rhs) << m << "," << k;
    }
}

TEST(Inequalities, LambdaDecreasesUnderShifts) {
  for (int n = 1; n <= 40; ++n)
    for (int k = 0; k <= n; ++k)
      for (int x = 0; x <= std::min(n, 6); ++x)
        for (int y = 0; y <= x; ++y) {
          EXPECT_LE(lambda(n + x, k + y), lambda(n, k)) << n << k << x << y;
        }
}

TEST(Inequalities, CentralBinomialBound) {
  for (int k = 1; k <= 64; ++k) {
    mpq_class lhs(1, binomial(2 * k, k));
    // compare squares: 1/binom^2 <= k 2^{2-4k}
    mpq_class rhs(k);
    mpz_class den = 1;
    den <<= 4 * k - 2;
    rhs /= den;
    EXPECT_LE(lhs * lhs, rhs) << k;
  }
}

TEST(Inequalities, MomentWeightBound) {
  for (int m = 1; m <= 12; ++m)
    for (int k = 0; k <= m; ++k)
      for (int kp = 0; kp <= m; ++kp)
        for (int a = std::max(0, k + kp - m); a <= std::min(k, kp); ++a) {
          mpq_class rhs = lambda(k, a) * lambda(m - k, kp - a);
          rhs *= mpz_class(1) << m;
          EXPECT_LE(moment_weight(m, k, kp, a), rhs) << m << k << kp << a;
        }
}

TEST(Csv, CoefficientTableRows) {
  std::ostringstream os;
  write_coefficients_csv(os, 1, 4);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# schema: fshadow.coeffs.v1\n", 0), 0u);
  EXPECT_NE(s.find("\nlambda,2,1,1/3,"), std::string::npos);
  EXPECT_NE(s.find("\ninverse_projector_f,1,1,0,0\n"), std::string::npos);
  std::ostringstream again;
  write_coefficients_csv(again, 1, 4);
  EXPECT_EQ(again.str(), s);
  EXPECT_THROW(write_coefficients_csv(os, 3, 2), std::invalid_argument);
  EXPECT_THROW(write_coefficients_csv(os, 1, 201), GuardError);
}

TEST(Csv, NormScanHasEveryEvenElectronCount) {
  const auto rows = norm_scan(6);
  int count = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r.n % 2, 0);
    EXPECT_LE(r.n, r.m);
    EXPECT_DOUBLE_EQ(r.f, xtype_norm_bound(r.m, r.n));
    EXPECT_DOUBLE_EQ(r.F0, 0.5 * std::pow(r.m, 1 / std::sqrt(2.0)));
    EXPECT_DOUBLE_EQ(r.F1, 0.5 * std::sqrt(r.m));
    ++count;
  }
  EXPECT_EQ(count, 1 + 2 + 2 + 3 + 3 + 4);
  std::ostringstream os;
  write_norm_scan_csv(os, rows);
  EXPECT_EQ(os.str().rfind("# schema: fshadow.norm_scan.v1\nm,n,f,f_printed,F0,F1,monotone_ok\n", 0), 0u);
  EXPECT_THROW(norm_scan(101), GuardError);
}
