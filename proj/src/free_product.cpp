#include "uprod/free_product.hpp"

#include <algorithm>
#include <cstdlib>

namespace uprod {

namespace {

void fp_append(std::vector<int>& letters, int letter) {
  if (!letters.empty() && letters.back() == letter)
    letters.pop_back();  // x_i x_i = 1
  else
    letters.push_back(letter);
}

}  // namespace

FPWord fp_multiply(const FPWord& u, const FPWord& v) {
  FPWord out = u;
  out.letters.reserve(u.letters.size() + v.letters.size());
  for (int letter : v.letters) fp_append(out.letters, letter);
  return out;
}

FPWord fp_invert(const FPWord& w) {
  FPWord out;
  out.letters.assign(w.letters.rbegin(), w.letters.rend());
  return out;
}

int parity(const FPWord& w) { return static_cast<int>(w.letters.size() % 2); }

CyclicReduction cyclically_reduce(const FPWord& w) {
  CyclicReduction r;
  std::size_t lo = 0, hi = w.letters.size();
  while (hi - lo >= 2 && w.letters[lo] == w.letters[hi - 1]) {
    r.conjugator.letters.push_back(w.letters[lo]);
    ++lo;
    --hi;
  }
  r.core.letters.assign(w.letters.begin() + static_cast<long>(lo),
                        w.letters.begin() + static_cast<long>(hi));
  return r;
}

TorsionClass classify_torsion(const FPWord& w) {
  TorsionClass t;
  if (w.empty()) {
    t.trivial = true;
    return t;
  }
  CyclicReduction r = cyclically_reduce(w);
  if (r.core.letters.size() == 1) {
    t.torsion = true;
    t.witness_index = r.core.letters[0];
  }
  return t;
}

void free_append(FreeWord& f, int index, long long exponent) {
  if (exponent == 0) return;
  if (!f.syllables.empty() && f.syllables.back().index == index) {
    f.syllables.back().exponent += exponent;
    if (f.syllables.back().exponent == 0) f.syllables.pop_back();
  } else {
    f.syllables.push_back(FreeSyllable{index, exponent});
  }
}

FreeWord free_multiply(const FreeWord& a, const FreeWord& b) {
  FreeWord out = a;
  for (const FreeSyllable& s : b.syllables) free_append(out, s.index, s.exponent);
  return out;
}

FreeWord free_invert(const FreeWord& f) {
  FreeWord out;
  for (auto it = f.syllables.rbegin(); it != f.syllables.rend(); ++it)
    out.syllables.push_back(FreeSyllable{it->index, -it->exponent});
  return out;
}

FreeWord to_free_generators(const FPWord& w) {
  if (parity(w) != 0)
    fail("word is not in N: odd length " + std::to_string(w.letters.size()));
  FreeWord out;
  for (std::size_t i = 0; i + 1 < w.letters.size(); i += 2) {
    int a = w.letters[i];
    int b = w.letters[i + 1];
    if (a < b) {
      for (int j = a; j < b; ++j) free_append(out, j, 1);  // x_a x_b = y_a ... y_{b-1}
    } else if (a > b) {
      for (int j = a - 1; j >= b; --j) free_append(out, j, -1);
    }
  }
  return out;
}

FPWord from_free_generators(const FreeWord& f) {
  FPWord out;
  for (const FreeSyllable& s : f.syllables) {
    long long reps = std::llabs(s.exponent);
    for (long long r = 0; r < reps; ++r) {
      if (s.exponent > 0) {
        fp_append(out.letters, s.index);  // y_j = x_j x_{j+1}
        fp_append(out.letters, s.index + 1);
      } else {
        fp_append(out.letters, s.index + 1);
        fp_append(out.letters, s.index);
      }
    }
  }
  return out;
}

FPWord fp_from_word(const GeneratorWord& word, int rank) {
  FPWord out;
  for (const WordToken& t : word.tokens) {
    if (t.index < 1 || t.index > rank)
      fail("index out of range: x" + std::to_string(t.index));
    if (((t.exponent % 2) + 2) % 2 == 1) fp_append(out.letters, t.index);
  }
  return out;
}

GeneratorWord fp_to_word(const FPWord& w) {
  GeneratorWord out;
  out.tokens.reserve(w.letters.size());
  for (int letter : w.letters) out.tokens.push_back(WordToken{letter, 1});
  return out;
}

FreeWord free_from_word(const GeneratorWord& word, int rank) {
  FreeWord out;
  for (const WordToken& t : word.tokens) {
    if (t.index < 1 || t.index > rank)
      fail("free generator index out of range: x" + std::to_string(t.index));
    free_append(out, t.index, t.exponent);
  }
  return out;
}

GeneratorWord free_to_word(const FreeWord& f) {
  GeneratorWord out;
  out.tokens.reserve(f.syllables.size());
  for (const FreeSyllable& s : f.syllables)
    out.tokens.push_back(WordToken{s.index, s.exponent});
  return out;
}

std::string fp_key(const FPWord& w) {
  std::string key = "f:";
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) key += '.';
    key += std::to_string(w.letters[i]);
  }
  return key;
}

FPWord FpContext::multiply(const FPWord& a, const FPWord& b) const {
  for (int letter : a.letters)
    if (letter < 1 || letter > n_) fail("letter out of range for rank " + std::to_string(n_));
  for (int letter : b.letters)
    if (letter < 1 || letter > n_) fail("letter out of range for rank " + std::to_string(n_));
  return fp_multiply(a, b);
}

std::vector<FPWord> FpContext::generators() const {
  std::vector<FPWord> gens;
  gens.reserve(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) gens.push_back(FPWord{{i}});
  return gens;
}

}  // namespace uprod
