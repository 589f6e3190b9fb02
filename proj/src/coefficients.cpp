#include "fshadow/coefficients.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fshadow/errors.hpp"

namespace fshadow {

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  if (k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace {

mpz_class factorial(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

// t(x) = (2x)! / x!, so lambda(m,k) = t(k) t(m-k) / t(m).
std::vector<mpz_class> t_table(int m) {
  std::vector<mpz_class> t(m + 1);
  t[0] = 1;
  for (int x = 1; x <= m; ++x) t[x] = t[x - 1] * (2 * x - 1) * (2 * x) / x;  // exact
  return t;
}

bool joint_in_range(int m, int k, int kp, int a) {
  return a >= 0 && k - a >= 0 && kp - a >= 0 && m - k - kp + a >= 0 && k <= m && kp <= m;
}

std::complex<double> root_power(int j, int order) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(j % order) / order;
  return std::polar(1.0, theta);
}

std::vector<std::complex<double>> inverse_dft(const std::vector<double>& f) {
  const int order = static_cast<int>(f.size());
  std::vector<std::complex<double>> c(order);
  for (int j = 0; j < order; ++j) {
    std::complex<double> s = 0;
    for (int i = 0; i < order; ++i) s += root_power(i * j, order) * f[i];
    c[j] = s / static_cast<double>(order);
  }
  return c;
}

}  // namespace

double to_double(const mpq_class& q) {
  if (sgn(q.get_num()) == 0) return 0.0;
  long en = 0, ed = 0;
  const double dn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double dd = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::ldexp(dn / dd, static_cast<int>(en - ed));
}

mpq_class lambda(int m, int k) {
  if (m < 0 || k < 0 || k > m) throw std::domain_error("lambda: need 0 <= k <= m");
  mpq_class r(binomial(m, k), binomial(2 * m, 2 * k));
  r.canonicalize();
  return r;
}

mpq_class lambda_of_degree(int m, int degree) {
  if (degree % 2) return 0;
  return lambda(m, degree / 2);
}

mpq_class lambda_joint(int m, int k, int kp, int a) {
  if (m < 0) throw std::domain_error("lambda_joint: m must be nonnegative");
  if (!joint_in_range(m, k, kp, a)) return 0;
  const int r = m - k - kp + a;
  mpz_class num = factorial(m), den = factorial(2 * m);
  for (int x : {a, k - a, kp - a, r}) {
    num /= factorial(x);
    den /= factorial(2 * x);
  }
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpq_class moment_weight(int m, int k, int kp, int a) {
  const mpq_class j = lambda_joint(m, k, kp, a);
  if (sgn(j) == 0) return 0;
  mpq_class w = j / (lambda(m, k) * lambda(m, kp));
  return w;
}

mpq_class moment_weight_of_degrees(int m, int deg, int deg_p, int overlap) {
  if (deg % 2 || deg_p % 2 || overlap % 2) return 0;
  return moment_weight(m, deg / 2, deg_p / 2, overlap / 2);
}

MomentWeightTable::MomentWeightTable(int m) : m_(m) {
  if (m < 0) throw std::domain_error("MomentWeightTable: m must be nonnegative");
  const auto t = t_table(m);
  w_.assign(static_cast<std::size_t>(m + 1) * (m + 1) * (m + 1), 0.0);
  mpz_class num, den;
  for (int k = 0; k <= m; ++k)
    for (int kp = 0; kp <= m; ++kp) {
      den = t[k] * t[m - k] * t[kp] * t[m - kp];
      for (int a = std::max(0, k + kp - m); a <= std::min(k, kp); ++a) {
        num = t[a] * t[k - a] * t[kp - a] * t[m - k - kp + a] * t[m];
        long en = 0, ed = 0;
        const double dn = mpz_get_d_2exp(&en, num.get_mpz_t());
        const double dd = mpz_get_d_2exp(&ed, den.get_mpz_t());
        w_[(static_cast<std::size_t>(k) * (m + 1) + kp) * (m + 1) + a] =
            std::ldexp(dn / dd, static_cast<int>(en - ed));
      }
    }
}

InverseDiagDecomposition inverse_diag_decomposition(int m) {
  if (m < 1) throw std::domain_error("inverse_diag_decomposition: m >= 1 required");
  std::vector<mpz_class> c2m(m + 1), cm(m + 1);
  for (int k = 0; k <= m; ++k) {
    c2m[k] = binomial(2 * m, 2 * k);
    cm[k] = binomial(m, k);
  }
  InverseDiagDecomposition d;
  d.m = m;
  for (int i = 0; i <= m; ++i) {
    mpz_class s = 0;
    for (int a = 0; a <= i; ++a) {
      mpz_class inner = 0;
      for (int k = a; k <= m - i + a; ++k) inner += c2m[k] * binomial(k, a) * binomial(m - k, i - a);
      if (a % 2) s -= inner;
      else s += inner;
    }
    mpz_class den = cm[i];
    den <<= m;
    mpq_class f(s, den);
    f.canonicalize();
    d.f_exact.push_back(f);
    d.f.push_back(to_double(f));
  }
  d.c = inverse_dft(d.f);
  d.omega = root_power(1, m + 1);
  return d;
}

XTypeDecomposition xtype_decomposition(int m, int n) {
  if (n % 2) throw std::invalid_argument("xtype_decomposition: n must be even");
  if (n < 0 || n > m) throw std::invalid_argument("xtype_decomposition: need 0 <= n <= m");
  const int mt = m - n;
  std::vector<mpq_class> inv_lambda(mt + 1);
  for (int k = 0; k <= mt; ++k) inv_lambda[k] = 1 / lambda(m, n / 2 + k);
  XTypeDecomposition d;
  d.m = m;
  d.n = n;
  for (int i = 0; i <= mt; ++i) {
    mpq_class s = 0;
    for (int k = 0; k <= mt; ++k) {
      mpz_class kraw = 0;  // Krawtchouk polynomial K_k(i)
      for (int a = 0; a <= std::min(i, k); ++a) {
        const mpz_class term = binomial(i, a) * binomial(mt - i, k - a);
        if (a % 2) kraw -= term;
        else kraw += term;
      }
      s += inv_lambda[k] * kraw;
    }
    mpz_class two_pow = 1;
    two_pow <<= mt;
    s /= two_pow;
    d.g_exact.push_back(s);
    d.g.push_back(to_double(s));
  }
  d.c = inverse_dft(d.g);
  d.omega = root_power(1, mt + 1);
  return d;
}

namespace {

std::vector<std::vector<long double>> pascal(int m) {
  std::vector<std::vector<long double>> c(m + 1);
  for (int i = 0; i <= m; ++i) {
    c[i].assign(i + 1, 1.0L);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

long double class_sum(int m, int n, const MomentWeightTable& w) {
  // Sequences split into an x-part on the first n modes (one Majorana per mode) and a
  // diagonal part on the remaining m-n modes. Two x-parts overlap in an even number of
  // positions exactly when their product is Hermitian.
  const int mt = m - n;
  const auto c = pascal(m);
  long double total = 0;
  for (int a1 = 0; a1 <= n / 2; ++a1)
    for (int k2 = 0; k2 <= mt; ++k2)
      for (int a2 = 0; a2 <= k2; ++a2)
        for (int b2 = 0; b2 <= mt - k2; ++b2)
          total += c[n][2 * a1] * c[mt][k2] * c[k2][a2] * c[mt - k2][b2] *
                   w(n / 2 + k2, n / 2 + a2 + b2, a1 + a2);
  return total;
}

}  // namespace

double xtype_norm_bound(int m, int n) {
  if (n < 0 || n > m || n % 2) throw std::invalid_argument("xtype_norm_bound: need even n in [0, m]");
  const MomentWeightTable w(m);
  return static_cast<double>(std::ldexp(class_sum(m, n, w), n - 2 * m));
}

double xtype_norm_bound_printed(int m, int n) { return xtype_norm_bound(m, n) / 2; }

double projector_norm_bound(int m) {
  if (m < 1) throw std::domain_error("projector_norm_bound: m >= 1 required");
  return xtype_norm_bound(m, 0);
}

mpq_class projector_norm_bound_exact(int m) {
  if (m < 1) throw std::domain_error("projector_norm_bound: m >= 1 required");
  mpq_class total = 0;
  for (int k = 0; k <= m; ++k)
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= m - k; ++b)
        total += mpq_class(binomial(m, k) * binomial(k, a) * binomial(m - k, b)) *
                 moment_weight(m, k, a + b, a);
  mpz_class den = 1;
  den <<= 2 * m;
  total /= den;
  return total;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_coefficients_csv(std::ostream& os, int m_lo, int m_hi) {
  if (m_lo < 1 || m_hi < m_lo) throw std::invalid_argument("empty or invalid m range");
  if (m_hi > 200) throw GuardError("coefficient tables are limited to m <= 200");
  os << "# schema: fshadow.coeffs.v1\n";
  os << "table,m,k,exact,value\n";
  for (int m = m_lo; m <= m_hi; ++m) {
    for (int k = 0; k <= m; ++k) {
      const mpq_class l = lambda(m, k);
      os << "lambda," << m << ',' << k << ',' << l.get_str() << ',' << format_double(to_double(l)) << '\n';
    }
    const auto d = inverse_diag_decomposition(m);
    for (int i = 0; i <= m; ++i)
      os << "inverse_projector_f," << m << ',' << i << ',' << d.f_exact[i].get_str() << ','
         << format_double(d.f[i]) << '\n';
    if (m <= 100) {
      const MomentWeightTable w(m);
      for (int n = 0; n <= m; n += 2) {
        const double f = static_cast<double>(std::ldexp(class_sum(m, n, w), n - 2 * m));
        if (n == 0) os << "projector_bound," << m << ",0,," << format_double(f) << '\n';
        os << "xtype_bound," << m << ',' << n << ",," << format_double(f) << '\n';
      }
    }
  }
}

std::vector<NormScanRow> norm_scan(int m_max) {
  if (m_max < 1) throw std::invalid_argument("norm_scan: m_max >= 1 required");
  if (m_max > 100) throw GuardError("norm_scan is limited to m <= 100");
  std::vector<NormScanRow> rows;
  for (int m = 1; m <= m_max; ++m) {
    const MomentWeightTable w(m);
    const double F0 = 0.5 * std::pow(static_cast<double>(m), 1.0 / std::numbers::sqrt2);
    const double F1 = 0.5 * std::sqrt(static_cast<double>(m));
    double prev = 0;
    for (int n = 0; n <= m; n += 2) {
      const double f = static_cast<double>(std::ldexp(class_sum(m, n, w), n - 2 * m));
      const bool mono = n == 0 || f <= prev;
      rows.push_back({m, n, f, f / 2, F0, F1, mono});
      prev = f;
    }
  }
  return rows;
}

void write_norm_scan_csv(std::ostream& os, const std::vector<NormScanRow>& rows) {
  os << "# schema: fshadow.norm_scan.v1\n";
  os << "m,n,f,f_printed,F0,F1,monotone_ok\n";
  for (const auto& r : rows)
    os << r.m << ',' << r.n << ',' << format_double(r.f) << ',' << format_double(r.f_printed) << ','
       << format_double(r.F0) << ',' << format_double(r.F1) << ',' << (r.monotone_ok ? "true" : "false")
       << '\n';
}

}  // namespace fshadow
