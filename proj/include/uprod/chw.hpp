// Exact normal forms and arithmetic for the combinatorial generalized
// Hantzsche-Wendt groups
//   G_n = <x_1,...,x_n | x_i^-1 x_j^2 x_i x_j^2  for all i != j>.
//
// Every element has a unique normal form (w, a): a reduced coset word w over
// the generators (each letter at exponent +1, adjacent letters distinct)
// followed by a vector a in Z^n standing for prod_i x_i^(2 a_i). The squares
// generate a free abelian normal subgroup A_n; moving that vector rightward
// past a letter x_i negates every coordinate except the i-th, and a letter
// collision x_i x_i turns into the vector contribution e_i. Degenerate ranks
// are supported: G_0 = 1 and G_1 is infinite cyclic.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "uprod/free_product.hpp"
#include "uprod/group.hpp"
#include "uprod/word.hpp"

namespace uprod {

struct GnElement {
  std::vector<int> word;           // reduced coset word, letters in 1..n
  std::vector<long long> squares;  // a, with the element carrying prod x_i^(2 a_i)
  int rank() const { return static_cast<int>(squares.size()); }
  bool is_identity() const {
    if (!word.empty()) return false;
    for (long long a : squares)
      if (a != 0) return false;
    return true;
  }
  bool operator==(const GnElement&) const = default;
};

GnElement chw_identity(int n);
GnElement normalize(const GeneratorWord& word, int n);
GnElement chw_multiply(const GnElement& a, const GnElement& b);
GnElement chw_invert(const GnElement& g);

// Canonical key `w:<i1.i2...ik>;a:<a1,...,an>`, e.g. `w:1;a:0,-1`.
std::string chw_key(const GnElement& g);

// A generator word that normalizes back to g (letters, then squares).
GeneratorWord chw_to_word(const GnElement& g);

// Normalizes every defining relator of G_n and reports which (i, j) pairs,
// if any, fail to reduce to the identity. Vacuous for n <= 1.
struct RelatorReport {
  int n = 0;
  int relator_count = 0;
  bool all_identity = true;
  std::vector<std::pair<int, int>> failures;
};
RelatorReport relator_check(int n);

// The embedding G_m -> G_n, f(x_i) = x_i (m <= n): zero-pads the vector.
GnElement embed(const GnElement& g, int m, int n);

// Image in the quotient G_n/A_n, the free product of n copies of C_2.
FPWord project_to_quotient(const GnElement& g);

// Infinite dihedral group D = <a,b | a^2, b^2>: every element is uniquely
// (ba)^z or (ba)^z b.
struct DihedralElement {
  long long z_power = 0;
  bool b_flag = false;
  bool is_identity() const { return z_power == 0 && !b_flag; }
  bool operator==(const DihedralElement&) const = default;
};
DihedralElement dihedral_multiply(const DihedralElement& a, const DihedralElement& b);

// The homomorphism G_n -> D sending the distinguished generator to ba and
// every other generator to b; detects nonzero square-vector coordinates.
DihedralElement dihedral_image(const GnElement& g, int distinguished);

// Checks g^k != 1 for 1 <= k <= bound. Torsion is impossible here, so a
// failing witness k would falsify the torsion-freeness theorem at desk scale.
struct SpotcheckResult {
  bool pass = true;
  long long witness_k = 0;
};
SpotcheckResult infinite_order_spotcheck(const GnElement& g, int bound);

struct ChwContext {
  using element_type = GnElement;
  explicit ChwContext(int n) : n_(n) {
    if (n < 0) fail("rank must be nonnegative");
  }
  int rank() const { return n_; }
  GnElement identity() const { return chw_identity(n_); }
  GnElement multiply(const GnElement& a, const GnElement& b) const {
    if (a.rank() != n_ || b.rank() != n_) fail("rank mismatch");
    return chw_multiply(a, b);
  }
  GnElement invert(const GnElement& a) const { return chw_invert(a); }
  std::string canonical_key(const GnElement& a) const { return chw_key(a); }
  std::vector<GnElement> generators() const;

 private:
  int n_;
};

}  // namespace uprod
