// Normal forms for the free product of n copies of the order-2 cyclic group,
//   <x_1,...,x_n | x_1^2,...,x_n^2>,
// plus its index-2 free subgroup N = <x_1x_2,...,x_{n-1}x_n>: parity map,
// cyclic reduction, the torsion classification (every nontrivial torsion
// element is conjugate to a single generator), and the change of generators
// between N-words and free words in y_j = x_j x_{j+1}.

#pragma once

#include <string>
#include <vector>

#include "uprod/group.hpp"
#include "uprod/word.hpp"

namespace uprod {

// Reduced word: adjacent letters differ; the empty word is the identity.
struct FPWord {
  std::vector<int> letters;
  bool empty() const { return letters.empty(); }
  bool operator==(const FPWord&) const = default;
};

// Reduced free-group word in the y_j: adjacent syllable indices differ,
// exponents nonzero.
struct FreeSyllable {
  int index = 0;
  long long exponent = 0;
  bool operator==(const FreeSyllable&) const = default;
};

struct FreeWord {
  std::vector<FreeSyllable> syllables;
  bool empty() const { return syllables.empty(); }
  bool operator==(const FreeWord&) const = default;
};

FPWord fp_multiply(const FPWord& u, const FPWord& v);
FPWord fp_invert(const FPWord& w);

// Word length mod 2; the kernel of this homomorphism onto Z/2 is N.
int parity(const FPWord& w);

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicReduction {
  FPWord core;
  FPWord conjugator;
};
CyclicReduction cyclically_reduce(const FPWord& w);

// torsion <=> cyclic core has length 1; the identity is reported trivial.
struct TorsionClass {
  bool torsion = false;
  bool trivial = false;
  int witness_index = 0;  // the generator the element is conjugate to
};
TorsionClass classify_torsion(const FPWord& w);

void free_append(FreeWord& f, int index, long long exponent);
FreeWord free_multiply(const FreeWord& a, const FreeWord& b);
FreeWord free_invert(const FreeWord& f);

// Rewrites an even-length word through y_j = x_j x_{j+1}; throws on odd
// parity (the word is not in N).
FreeWord to_free_generators(const FPWord& w);
FPWord from_free_generators(const FreeWord& f);

// Generator words act with exponents mod 2 (x_i^2 = 1, so x1^-1 == x1).
FPWord fp_from_word(const GeneratorWord& word, int rank);
GeneratorWord fp_to_word(const FPWord& w);
// Free words reuse the same grammar: token x<j> stands for y_j.
FreeWord free_from_word(const GeneratorWord& word, int rank);
GeneratorWord free_to_word(const FreeWord& f);

// Canonical key: `f:` followed by dot-separated letters, e.g. `f:1.2.1`.
std::string fp_key(const FPWord& w);

struct FpContext {
  using element_type = FPWord;
  explicit FpContext(int n) : n_(n) {
    if (n < 0) fail("free product rank must be nonnegative");
  }
  int rank() const { return n_; }
  FPWord identity() const { return {}; }
  FPWord multiply(const FPWord& a, const FPWord& b) const;
  FPWord invert(const FPWord& a) const { return fp_invert(a); }
  std::string canonical_key(const FPWord& a) const { return fp_key(a); }
  std::vector<FPWord> generators() const;

 private:
  int n_;
};

}  // namespace uprod
