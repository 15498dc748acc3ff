// Truncated p-adic arithmetic: scalars and square matrices of residues mod
// p^k with explicit precision, congruence-subgroup membership (A = 1 mod p
// for odd p, A = 1 mod 4 for p = 2), truncated matrix log/exp, unique m-th
// roots inside the congruence subgroup, and the powerful-group certificates.
//
// Precision contract: every series result carries a report stating the term
// bound and the documented output precision. Series are evaluated with
// internal precision headroom (the divisor valuations are absorbed above the
// target), so results are exact at the precision they claim; an m-th root
// irreducibly loses v_p(m) digits from dividing the logarithm by m.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uprod/common.hpp"

namespace uprod {

struct PadicScalar {
  long long p = 0;
  int prec = 0;        // residue known mod p^prec
  long long residue = 0;
};

PadicScalar make_scalar(long long p, int prec, long long value);
PadicScalar padic_add(const PadicScalar& a, const PadicScalar& b);
PadicScalar padic_sub(const PadicScalar& a, const PadicScalar& b);
PadicScalar padic_mul(const PadicScalar& a, const PadicScalar& b);
PadicScalar padic_neg(const PadicScalar& a);
// Unit inverse; throws when the residue is divisible by p.
PadicScalar padic_inv(const PadicScalar& a);
bool padic_eq(const PadicScalar& a, const PadicScalar& b, int prec);

struct PadicMatrix {
  long long p = 0;
  int prec = 0;
  int dim = 0;
  std::vector<long long> entries;  // row-major residues in [0, p^prec)

  long long& at(int i, int j) { return entries[static_cast<std::size_t>(i * dim + j)]; }
  long long at(int i, int j) const { return entries[static_cast<std::size_t>(i * dim + j)]; }
  bool operator==(const PadicMatrix&) const = default;
};

PadicMatrix make_matrix(long long p, int prec, int dim);
PadicMatrix identity_matrix(long long p, int prec, int dim);
// Builds from arbitrary integers, reducing mod p^prec.
PadicMatrix matrix_from_rows(long long p, int prec,
                             const std::vector<std::vector<long long>>& rows);

PadicMatrix mat_add(const PadicMatrix& a, const PadicMatrix& b);
PadicMatrix mat_sub(const PadicMatrix& a, const PadicMatrix& b);
PadicMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b);
PadicMatrix mat_pow(const PadicMatrix& a, long long e);  // e >= 0
PadicMatrix reduce_precision(const PadicMatrix& a, int prec);
bool mat_eq(const PadicMatrix& a, const PadicMatrix& b, int prec);

// Unit inverse mod p^prec: Gauss-Jordan mod p, then Hensel doubling.
PadicMatrix mat_inverse(const PadicMatrix& a);

// Smallest entry valuation of A - I, capped at the precision.
int one_minus_valuation(const PadicMatrix& a);

// Congruence level: 1 for odd p (A = 1 mod p), 2 for p = 2 (A = 1 mod 4).
int congruence_level(long long p);
// Throws on insufficient precision (prec < level).
bool in_congruence_subgroup(const PadicMatrix& a);

struct SeriesReport {
  int term_bound = 0;        // T: series truncated after this many terms
  int headroom = 0;          // extra internal digits absorbing divisor valuations
  int input_precision = 0;
  int output_precision = 0;  // documented (and delivered) precision
  int loss = 0;              // input_precision - output_precision
};

struct SeriesResult {
  PadicMatrix value;
  SeriesReport report;
};

// log A = sum (-1)^(m+1) (A-1)^m / m, A in the congruence subgroup.
SeriesResult mat_log(const PadicMatrix& a);
// exp L = sum L^m / m!, L = 0 mod p (odd p) or mod 4 (p = 2).
SeriesResult mat_exp(const PadicMatrix& l);

// X with X^m = A at precision prec - v_p(m), computed as exp((1/m) log A);
// X is the unique m-th root of A in the congruence subgroup there. Throws if
// A has no such root (the divided logarithm leaves the exp domain) or the
// contracted precision underflows.
SeriesResult nth_root(const PadicMatrix& a, long long m);

// For A = 1 + p^a U (p odd, U a unit mod p): checks A^p = 1 + p^(a+1) U
// mod p^(a+2) exactly.
struct PowerValuationReport {
  bool degenerate = false;  // A = 1 at this precision: nothing to check
  int a = 0;
  bool pass = false;
};
PowerValuationReport power_valuation_check(const PadicMatrix& a);

// Certificate that [A,B] is congruent to 1 mod p^2 and is a p-th power of a
// congruence-subgroup element (the powerful property at desk scale).
struct PowerfulCertificate {
  PadicMatrix commutator;
  int commutator_valuation = 0;  // v([A,B] - 1), capped at the precision
  PadicMatrix root;              // D with D^p = [A,B] at contracted precision
  int root_precision = 0;
};
PowerfulCertificate powerful_certificate(const PadicMatrix& a, const PadicMatrix& b);

// Uniform sample I + p*R (or I + 4*R for p = 2), R uniform mod p^(prec-level).
PadicMatrix random_congruence_element(long long p, int prec, int dim,
                                      std::mt19937_64& rng);

// Random sweep of the unique-root property: distinguishable X != Y must have
// X^m != Y^m, and nth_root(X^m, m) must recover X at contracted precision.
struct UniqueRootReport {
  long long trials = 0;
  long long distinguishable_pairs = 0;
  long long indistinguishable_pairs = 0;  // equal at contracted precision: skipped
  long long power_collisions = 0;         // would falsify unique roots; expect 0
  long long root_mismatches = 0;          // expect 0
  bool all_pass = true;
};
UniqueRootReport unique_root_property_check(long long p, int dim, long long m,
                                            int prec, long long trials,
                                            std::uint64_t seed);

}  // namespace uprod
