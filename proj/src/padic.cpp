#include "uprod/padic.hpp"

#include <algorithm>

namespace uprod {

namespace {

using i128 = __int128;

void require_prime(long long p) {
  if (p < 2) fail("p must be a prime >= 2");
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) fail("p = " + std::to_string(p) + " is not prime");
}

// p^e as int64, throwing when it would not fit comfortably.
long long pow_checked(long long p, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (1LL << 62) / p) fail("precision exhausted: modulus p^" +
                                  std::to_string(e) + " overflows");
    r *= p;
  }
  return r;
}

long long mod_reduce(long long v, long long m) {
  long long r = v % m;
  return r < 0 ? r + m : r;
}

long long mul_mod(long long a, long long b, long long m) {
  return static_cast<long long>(static_cast<i128>(a) * b % m);
}

// Inverse of a mod m for gcd(a, m) = 1 (m a prime power here).
long long inv_mod(long long a, long long m) {
  long long t = 0, new_t = 1, r = m, new_r = mod_reduce(a, m);
  while (new_r != 0) {
    long long q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) internal_error("inverse of non-unit");
  return mod_reduce(t, m);
}

int vp_of(long long p, long long m) {
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

int floor_log(long long p, long long m) {
  int e = 0;
  long long acc = 1;
  while (acc <= m / p) {
    acc *= p;
    ++e;
  }
  return e;
}

long long vp_factorial(long long p, long long m) {
  long long v = 0;
  for (long long q = p; q <= m; q *= p) {
    v += m / q;
    if (q > m / p) break;
  }
  return v;
}

int series_vx(long long p) { return p == 2 ? 2 : 1; }

// Largest m with vx*m - floor(log_p m) < k; terms beyond it vanish mod p^k.
int log_term_bound(long long p, int k) {
  const int vx = series_vx(p);
  int bound = 0;
  for (int m = 1; m <= k + 64; ++m)
    if (static_cast<long long>(vx) * m - floor_log(p, m) < k) bound = m;
  return bound;
}

// Largest m with vx*m - v_p(m!) < k.
int exp_term_bound(long long p, int k) {
  const int vx = series_vx(p);
  int bound = 0;
  for (int m = 1; m <= 2 * k + 64; ++m)
    if (static_cast<long long>(vx) * m - vp_factorial(p, m) < k) bound = m;
  return bound;
}

void require_compatible(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.p != b.p) fail("prime mismatch");
  if (a.dim != b.dim) fail("dimension mismatch");
}

}  // namespace

PadicScalar make_scalar(long long p, int prec, long long value) {
  require_prime(p);
  if (prec < 1) fail("precision must be positive");
  return PadicScalar{p, prec, mod_reduce(value, pow_checked(p, prec))};
}

PadicScalar padic_add(const PadicScalar& a, const PadicScalar& b) {
  if (a.p != b.p) fail("prime mismatch");
  int prec = std::min(a.prec, b.prec);
  long long m = pow_checked(a.p, prec);
  return PadicScalar{a.p, prec, mod_reduce(a.residue + b.residue, m)};
}

PadicScalar padic_sub(const PadicScalar& a, const PadicScalar& b) {
  return padic_add(a, padic_neg(b));
}

PadicScalar padic_mul(const PadicScalar& a, const PadicScalar& b) {
  if (a.p != b.p) fail("prime mismatch");
  int prec = std::min(a.prec, b.prec);
  long long m = pow_checked(a.p, prec);
  return PadicScalar{a.p, prec, mul_mod(mod_reduce(a.residue, m), mod_reduce(b.residue, m), m)};
}

PadicScalar padic_neg(const PadicScalar& a) {
  long long m = pow_checked(a.p, a.prec);
  return PadicScalar{a.p, a.prec, mod_reduce(-a.residue, m)};
}

PadicScalar padic_inv(const PadicScalar& a) {
  if (a.residue % a.p == 0) fail("not a unit: residue divisible by p");
  long long m = pow_checked(a.p, a.prec);
  return PadicScalar{a.p, a.prec, inv_mod(a.residue, m)};
}

bool padic_eq(const PadicScalar& a, const PadicScalar& b, int prec) {
  if (a.p != b.p) fail("prime mismatch");
  if (prec > a.prec || prec > b.prec) fail("comparison beyond known precision");
  long long m = pow_checked(a.p, prec);
  return mod_reduce(a.residue - b.residue, m) == 0;
}

PadicMatrix make_matrix(long long p, int prec, int dim) {
  require_prime(p);
  if (prec < 1) fail("precision must be positive");
  if (dim < 1) fail("dimension must be positive");
  pow_checked(p, prec);
  PadicMatrix a;
  a.p = p;
  a.prec = prec;
  a.dim = dim;
  a.entries.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0);
  return a;
}

PadicMatrix identity_matrix(long long p, int prec, int dim) {
  PadicMatrix a = make_matrix(p, prec, dim);
  for (int i = 0; i < dim; ++i) a.at(i, i) = 1;
  return a;
}

PadicMatrix matrix_from_rows(long long p, int prec,
                             const std::vector<std::vector<long long>>& rows) {
  int dim = static_cast<int>(rows.size());
  PadicMatrix a = make_matrix(p, prec, dim);
  long long m = pow_checked(p, prec);
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim)
      fail("matrix rows must be square");
    for (int j = 0; j < dim; ++j)
      a.at(i, j) = mod_reduce(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], m);
  }
  return a;
}

PadicMatrix mat_add(const PadicMatrix& a, const PadicMatrix& b) {
  require_compatible(a, b);
  PadicMatrix out = make_matrix(a.p, std::min(a.prec, b.prec), a.dim);
  long long m = pow_checked(a.p, out.prec);
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    out.entries[i] = mod_reduce(a.entries[i] + b.entries[i], m);
  return out;
}

PadicMatrix mat_sub(const PadicMatrix& a, const PadicMatrix& b) {
  require_compatible(a, b);
  PadicMatrix out = make_matrix(a.p, std::min(a.prec, b.prec), a.dim);
  long long m = pow_checked(a.p, out.prec);
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    out.entries[i] = mod_reduce(a.entries[i] - b.entries[i], m);
  return out;
}

PadicMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b) {
  require_compatible(a, b);
  PadicMatrix out = make_matrix(a.p, std::min(a.prec, b.prec), a.dim);
  long long m = pow_checked(a.p, out.prec);
  const int n = a.dim;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      i128 acc = 0;
      for (int k = 0; k < n; ++k)
        acc += static_cast<i128>(a.at(i, k)) * b.at(k, j);
      out.at(i, j) = mod_reduce(static_cast<long long>(acc % m), m);
    }
  }
  return out;
}

PadicMatrix mat_pow(const PadicMatrix& a, long long e) {
  if (e < 0) fail("mat_pow expects a nonnegative exponent");
  PadicMatrix base = a;
  PadicMatrix acc = identity_matrix(a.p, a.prec, a.dim);
  while (e > 0) {
    if (e & 1) acc = mat_mul(acc, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return acc;
}

PadicMatrix reduce_precision(const PadicMatrix& a, int prec) {
  if (prec > a.prec) fail("cannot raise precision");
  PadicMatrix out = a;
  out.prec = prec;
  long long m = pow_checked(a.p, prec);
  for (long long& v : out.entries) v = mod_reduce(v, m);
  return out;
}

bool mat_eq(const PadicMatrix& a, const PadicMatrix& b, int prec) {
  require_compatible(a, b);
  if (prec > a.prec || prec > b.prec) fail("comparison beyond known precision");
  long long m = pow_checked(a.p, prec);
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (mod_reduce(a.entries[i] - b.entries[i], m) != 0) return false;
  return true;
}

PadicMatrix mat_inverse(const PadicMatrix& a) {
  const long long p = a.p;
  const int n = a.dim;
  // Gauss-Jordan over F_p.
  std::vector<long long> left(a.entries), right;
  for (long long& v : left) v = mod_reduce(v, p);
  right.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) right[static_cast<std::size_t>(i * n + i)] = 1;
  auto L = [&](int i, int j) -> long long& { return left[static_cast<std::size_t>(i * n + j)]; };
  auto R = [&](int i, int j) -> long long& { return right[static_cast<std::size_t>(i * n + j)]; };
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (L(row, col) % p != 0) {
        pivot = row;
        break;
      }
    if (pivot < 0) fail("matrix is not a unit mod p");
    for (int j = 0; j < n; ++j) {
      std::swap(L(pivot, j), L(col, j));
      std::swap(R(pivot, j), R(col, j));
    }
    long long inv = inv_mod(L(col, col), p);
    for (int j = 0; j < n; ++j) {
      L(col, j) = mul_mod(L(col, j), inv, p);
      R(col, j) = mul_mod(R(col, j), inv, p);
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || L(row, col) == 0) continue;
      long long f = L(row, col);
      for (int j = 0; j < n; ++j) {
        L(row, j) = mod_reduce(L(row, j) - mul_mod(f, L(col, j), p), p);
        R(row, j) = mod_reduce(R(row, j) - mul_mod(f, R(col, j), p), p);
      }
    }
  }
  PadicMatrix y = make_matrix(p, a.prec, n);
  y.entries = right;
  // Hensel doubling: Y <- Y (2I - A Y).
  int digits = 1;
  while (digits < a.prec) {
    PadicMatrix two_i = identity_matrix(p, a.prec, n);
    for (long long& v : two_i.entries) v = mod_reduce(2 * v, pow_checked(p, a.prec));
    y = mat_mul(y, mat_sub(two_i, mat_mul(a, y)));
    digits *= 2;
  }
  if (!mat_eq(mat_mul(a, y), identity_matrix(p, a.prec, n), a.prec))
    internal_error("matrix inverse verification failed");
  return y;
}

int one_minus_valuation(const PadicMatrix& a) {
  int best = a.prec;
  for (int i = 0; i < a.dim; ++i) {
    for (int j = 0; j < a.dim; ++j) {
      long long v = a.at(i, j) - (i == j ? 1 : 0);
      v = mod_reduce(v, pow_checked(a.p, a.prec));
      if (v == 0) continue;
      best = std::min(best, vp_of(a.p, v));
    }
  }
  return best;
}

int congruence_level(long long p) { return p == 2 ? 2 : 1; }

bool in_congruence_subgroup(const PadicMatrix& a) {
  int level = congruence_level(a.p);
  if (a.prec < level)
    fail("insufficient precision: membership mod p^" + std::to_string(level) +
         " needs precision >= " + std::to_string(level));
  return one_minus_valuation(a) >= level;
}

namespace {

std::vector<long long> raw_mul_mod(const std::vector<long long>& u,
                                   const std::vector<long long>& v, int n,
                                   long long big) {
  std::vector<long long> out(u.size(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      i128 acc = 0;
      for (int k = 0; k < n; ++k)
        acc += static_cast<i128>(u[static_cast<std::size_t>(i * n + k)]) *
               v[static_cast<std::size_t>(k * n + j)];
      out[static_cast<std::size_t>(i * n + j)] =
          mod_reduce(static_cast<long long>(acc % big), big);
    }
  return out;
}

// Truncated log at full input precision: the sum is exact mod p^target
// because the computation runs with `headroom` extra digits.
PadicMatrix internal_log(const PadicMatrix& a, int target) {
  const long long p = a.p;
  const int t_bound = log_term_bound(p, target);
  const int headroom = t_bound >= 1 ? floor_log(p, t_bound) : 0;
  const long long big = pow_checked(p, target + headroom);
  const int n = a.dim;

  std::vector<long long> x(a.entries);
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i * n + i)] =
        mod_reduce(x[static_cast<std::size_t>(i * n + i)] - 1, big);
  std::vector<long long> pw = x, sum(x.size(), 0);

  for (int m = 1; m <= t_bound; ++m) {
    if (m > 1) pw = raw_mul_mod(pw, x, n, big);
    const int v = vp_of(p, m);
    const long long pv = pow_checked(p, v);
    const long long unit_inv = inv_mod(m / pv, big);
    for (std::size_t idx = 0; idx < sum.size(); ++idx) {
      long long e = pw[idx];
      if (e % pv != 0) internal_error("log term not divisible by p^v");
      e = mul_mod(e / pv, unit_inv, big);
      sum[idx] = mod_reduce(sum[idx] + (m % 2 == 1 ? e : -e), big);
    }
  }

  PadicMatrix out = make_matrix(p, target, n);
  const long long mod_out = pow_checked(p, target);
  for (std::size_t idx = 0; idx < sum.size(); ++idx)
    out.entries[idx] = mod_reduce(sum[idx], mod_out);
  return out;
}

PadicMatrix internal_exp(const PadicMatrix& l, int target) {
  const long long p = l.p;
  const int t_bound = exp_term_bound(p, target);
  const int headroom = t_bound >= 1 ? static_cast<int>(vp_factorial(p, t_bound)) : 0;
  const long long big = pow_checked(p, target + headroom);
  const int n = l.dim;

  std::vector<long long> x(l.entries);
  std::vector<long long> term(x.size(), 0), sum(x.size(), 0);
  for (int i = 0; i < n; ++i) {
    term[static_cast<std::size_t>(i * n + i)] = 1;
    sum[static_cast<std::size_t>(i * n + i)] = 1;
  }

  for (int m = 1; m <= t_bound; ++m) {
    term = raw_mul_mod(term, x, n, big);
    const int v = vp_of(p, m);
    const long long pv = pow_checked(p, v);
    const long long unit_inv = inv_mod(m / pv, big);
    for (long long& e : term) {
      if (e % pv != 0) internal_error("exp term not divisible by p^v");
      e = mul_mod(e / pv, unit_inv, big);
    }
    for (std::size_t idx = 0; idx < sum.size(); ++idx)
      sum[idx] = mod_reduce(sum[idx] + term[idx], big);
  }

  PadicMatrix out = make_matrix(p, target, n);
  const long long mod_out = pow_checked(p, target);
  for (std::size_t idx = 0; idx < sum.size(); ++idx)
    out.entries[idx] = mod_reduce(sum[idx], mod_out);
  return out;
}

// v(L) >= 1 for odd p, >= 2 for p = 2: the exp convergence domain.
bool in_exp_domain(const PadicMatrix& l) {
  int level = congruence_level(l.p);
  long long mod_level = pow_checked(l.p, level);
  for (long long v : l.entries)
    if (mod_reduce(v, mod_level) != 0) return false;
  return true;
}

}  // namespace

SeriesResult mat_log(const PadicMatrix& a) {
  if (!in_congruence_subgroup(a))
    fail("log requires A = 1 mod " +
         std::to_string(pow_checked(a.p, congruence_level(a.p))));
  SeriesResult r;
  r.report.term_bound = log_term_bound(a.p, a.prec);
  r.report.headroom =
      r.report.term_bound >= 1 ? floor_log(a.p, r.report.term_bound) : 0;
  r.report.input_precision = a.prec;
  r.report.loss = r.report.headroom;  // documented contraction: max divisor valuation
  r.report.output_precision = a.prec - r.report.loss;
  if (r.report.output_precision < 1) fail("precision exhausted in log");
  r.value = reduce_precision(internal_log(a, a.prec), r.report.output_precision);
  return r;
}

SeriesResult mat_exp(const PadicMatrix& l) {
  if (!in_exp_domain(l))
    fail("exp requires L = 0 mod " +
         std::to_string(pow_checked(l.p, congruence_level(l.p))));
  SeriesResult r;
  r.report.term_bound = exp_term_bound(l.p, l.prec);
  r.report.headroom = r.report.term_bound >= 1
                          ? static_cast<int>(vp_factorial(l.p, r.report.term_bound))
                          : 0;
  r.report.input_precision = l.prec;
  r.report.loss =
      r.report.term_bound >= 1 ? floor_log(l.p, r.report.term_bound) : 0;
  r.report.output_precision = l.prec - r.report.loss;
  if (r.report.output_precision < 1) fail("precision exhausted in exp");
  r.value = reduce_precision(internal_exp(l, l.prec), r.report.output_precision);
  return r;
}

SeriesResult nth_root(const PadicMatrix& a, long long m) {
  if (m < 1) fail("root order must be positive");
  if (!in_congruence_subgroup(a)) fail("A is outside the congruence subgroup");
  SeriesResult r;
  if (m == 1) {
    r.value = a;
    r.report.input_precision = a.prec;
    r.report.output_precision = a.prec;
    return r;
  }
  const long long p = a.p;
  const int v = vp_of(p, m);
  const int out_prec = a.prec - v;
  const int level = congruence_level(p);
  if (out_prec < level)
    fail("precision exhausted: root of order " + std::to_string(m) +
         " loses " + std::to_string(v) + " digits");

  PadicMatrix l = internal_log(a, a.prec);  // exact mod p^prec
  const long long pv = pow_checked(p, v);
  const long long mod_out = pow_checked(p, out_prec);
  const long long unit_inv = inv_mod(m / pv, mod_out);
  PadicMatrix divided = make_matrix(p, out_prec, a.dim);
  for (std::size_t idx = 0; idx < l.entries.size(); ++idx) {
    if (l.entries[idx] % pv != 0)
      fail("no order-" + std::to_string(m) +
           " root in the congruence subgroup: log valuation too small");
    divided.entries[idx] = mul_mod(mod_reduce(l.entries[idx] / pv, mod_out), unit_inv, mod_out);
  }
  if (!in_exp_domain(divided))
    fail("no order-" + std::to_string(m) +
         " root in the congruence subgroup: divided log leaves the exp domain");

  r.value = internal_exp(divided, out_prec);
  // Both series run under the hood; report the larger truncation bound and
  // the larger headroom. The precision loss is exactly v_p(m).
  const int log_bound = log_term_bound(p, a.prec);
  const int exp_bound = exp_term_bound(p, out_prec);
  r.report.term_bound = std::max(log_bound, exp_bound);
  const int log_headroom = log_bound >= 1 ? floor_log(p, log_bound) : 0;
  const int exp_headroom =
      exp_bound >= 1 ? static_cast<int>(vp_factorial(p, exp_bound)) : 0;
  r.report.headroom = std::max(log_headroom, exp_headroom);
  r.report.input_precision = a.prec;
  r.report.output_precision = out_prec;
  r.report.loss = v;
  // X^m mod p^k only depends on X mod p^(k-v) inside the subgroup, so any
  // lift of the root must reproduce A at the full input precision.
  PadicMatrix lifted = r.value;
  lifted.prec = a.prec;
  if (!mat_eq(mat_pow(lifted, m), a, a.prec))
    internal_error("root verification failed");
  return r;
}

PowerValuationReport power_valuation_check(const PadicMatrix& a) {
  if (a.p == 2) fail("power valuation check requires an odd prime");
  PowerValuationReport rep;
  const int val = one_minus_valuation(a);
  if (val >= a.prec) {
    rep.degenerate = true;  // A = 1 at this precision: U would be 0
    rep.pass = true;
    return rep;
  }
  if (val < 1) fail("A must be congruent to 1 mod p");
  rep.a = val;
  if (a.prec < val + 2)
    fail("insufficient precision: need at least a+2 = " + std::to_string(val + 2));
  const long long pa = pow_checked(a.p, val);
  // expected = 1 + p^(a+1) U where U = (A - 1)/p^a
  PadicMatrix expected = identity_matrix(a.p, a.prec, a.dim);
  const long long mod_full = pow_checked(a.p, a.prec);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      long long d = mod_reduce(a.at(i, j) - (i == j ? 1 : 0), mod_full);
      if (d % pa != 0) internal_error("valuation bookkeeping failed");
      expected.at(i, j) = mod_reduce(
          (i == j ? 1 : 0) + mul_mod(pow_checked(a.p, val + 1),
                                     mod_reduce(d / pa, mod_full), mod_full),
          mod_full);
    }
  rep.pass = mat_eq(mat_pow(a, a.p), expected, val + 2);
  return rep;
}

PowerfulCertificate powerful_certificate(const PadicMatrix& a, const PadicMatrix& b) {
  require_compatible(a, b);
  if (a.prec != b.prec) fail("operands must share a precision");
  if (a.prec < 4) fail("powerful certificate needs precision >= 4");
  if (!in_congruence_subgroup(a) || !in_congruence_subgroup(b))
    fail("operands must lie in the congruence subgroup");
  PowerfulCertificate cert{make_matrix(a.p, a.prec, a.dim), 0,
                           make_matrix(a.p, a.prec, a.dim), 0};
  cert.commutator =
      mat_mul(mat_mul(a, b), mat_mul(mat_inverse(a), mat_inverse(b)));
  cert.commutator_valuation = one_minus_valuation(cert.commutator);
  if (cert.commutator_valuation < 2)
    fail("commutator is not congruent to 1 mod p^2");
  SeriesResult root = nth_root(cert.commutator, a.p);
  cert.root = root.value;
  cert.root_precision = root.report.output_precision;
  if (!in_congruence_subgroup(cert.root))
    fail("p-th root left the congruence subgroup");
  if (!mat_eq(mat_pow(cert.root, a.p),
              reduce_precision(cert.commutator, cert.root_precision),
              cert.root_precision))
    internal_error("powerful certificate verification failed");
  return cert;
}

PadicMatrix random_congruence_element(long long p, int prec, int dim,
                                      std::mt19937_64& rng) {
  const int level = congruence_level(p);
  if (prec <= level) fail("precision too small to sample the subgroup");
  PadicMatrix out = identity_matrix(p, prec, dim);
  const long long scale = pow_checked(p, level);
  const long long range = pow_checked(p, prec - level);
  const long long mod_full = pow_checked(p, prec);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      long long r = static_cast<long long>(rng() % static_cast<std::uint64_t>(range));
      out.at(i, j) = mod_reduce(out.at(i, j) + mul_mod(scale, r, mod_full), mod_full);
    }
  return out;
}

UniqueRootReport unique_root_property_check(long long p, int dim, long long m,
                                            int prec, long long trials,
                                            std::uint64_t seed) {
  if (m < 1) fail("root order must be positive");
  UniqueRootReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  const int v = vp_of(p, m);
  const int out_prec = prec - v;
  if (out_prec < congruence_level(p)) fail("precision exhausted for this root order");
  for (long long t = 0; t < trials; ++t) {
    PadicMatrix x = random_congruence_element(p, prec, dim, rng);
    PadicMatrix y = random_congruence_element(p, prec, dim, rng);
    if (mat_eq(x, y, out_prec)) {
      ++rep.indistinguishable_pairs;  // equal at contracted precision: no claim
      continue;
    }
    ++rep.distinguishable_pairs;
    if (mat_eq(mat_pow(x, m), mat_pow(y, m), prec)) {
      ++rep.power_collisions;
      rep.all_pass = false;
    }
    SeriesResult root = nth_root(mat_pow(x, m), m);
    if (!mat_eq(root.value, reduce_precision(x, out_prec), out_prec)) {
      ++rep.root_mismatches;
      rep.all_pass = false;
    }
  }
  return rep;
}

}  // namespace uprod
