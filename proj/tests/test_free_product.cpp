#include <doctest.h>

#include <random>

#include "uprod/free_product.hpp"

using namespace uprod;

namespace {

FPWord random_fp(std::mt19937_64& rng, int rank, int max_len) {
  FPWord w;
  int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  for (int i = 0; i < len; ++i) {
    int letter = 1 + static_cast<int>(rng() % static_cast<unsigned>(rank));
    if (!w.letters.empty() && w.letters.back() == letter) continue;
    w.letters.push_back(letter);
  }
  return w;
}

FreeWord random_free(std::mt19937_64& rng, int free_rank, int max_syll, int max_exp) {
  FreeWord f;
  int len = static_cast<int>(rng() % static_cast<unsigned>(max_syll + 1));
  for (int i = 0; i < len; ++i) {
    int index = 1 + static_cast<int>(rng() % static_cast<unsigned>(free_rank));
    long long e = 1 + static_cast<long long>(rng() % static_cast<unsigned>(max_exp));
    if (rng() & 1) e = -e;
    free_append(f, index, e);
  }
  return f;
}

}  // namespace

TEST_CASE("fp_multiply reduces at the seam") {
  CHECK(fp_multiply(FPWord{{1}}, FPWord{{1}}).empty());
  CHECK(fp_multiply(FPWord{{1, 2}}, FPWord{{2, 1}}).empty());
  CHECK(fp_multiply(FPWord{{1, 2}}, FPWord{{1, 2}}).letters ==
        std::vector<int>{1, 2, 1, 2});

  std::mt19937_64 rng(21);
  for (int t = 0; t < 500; ++t) {
    FPWord a = random_fp(rng, 3, 8), b = random_fp(rng, 3, 8), c = random_fp(rng, 3, 8);
    CHECK(fp_multiply(fp_multiply(a, b), c) == fp_multiply(a, fp_multiply(b, c)));
    CHECK(fp_multiply(a, fp_invert(a)).empty());
  }
  // every generator is an involution
  for (int i = 1; i <= 5; ++i) CHECK(fp_multiply(FPWord{{i}}, FPWord{{i}}).empty());
}

TEST_CASE("parity is the Z/2 quotient map") {
  CHECK(parity(FPWord{}) == 0);
  CHECK(parity(FPWord{{3}}) == 1);

  std::mt19937_64 rng(22);
  for (int t = 0; t < 1000; ++t) {
    FPWord a = random_fp(rng, 4, 10), b = random_fp(rng, 4, 10);
    CHECK(parity(fp_multiply(a, b)) == (parity(a) ^ parity(b)));
  }
}

TEST_CASE("cyclic reduction") {
  CyclicReduction r = cyclically_reduce(FPWord{{2, 1, 2}});
  CHECK(r.core.letters == std::vector<int>{1});
  CHECK(r.conjugator.letters == std::vector<int>{2});

  r = cyclically_reduce(FPWord{{1, 2, 1, 2}});
  CHECK(r.core.letters == std::vector<int>{1, 2, 1, 2});
  CHECK(r.conjugator.empty());

  r = cyclically_reduce(FPWord{});
  CHECK(r.core.empty());
  CHECK(r.conjugator.empty());

  // w = conjugator * core * conjugator^-1
  std::mt19937_64 rng(23);
  for (int t = 0; t < 500; ++t) {
    FPWord w = random_fp(rng, 3, 9);
    CyclicReduction cr = cyclically_reduce(w);
    CHECK(fp_multiply(fp_multiply(cr.conjugator, cr.core), fp_invert(cr.conjugator)) == w);
    if (!cr.core.empty())
      CHECK((cr.core.letters.size() == 1 ||
             cr.core.letters.front() != cr.core.letters.back()));
  }
}

TEST_CASE("torsion classification") {
  TorsionClass t = classify_torsion(FPWord{{2, 1, 2}});
  CHECK(t.torsion);
  CHECK(t.witness_index == 1);

  CHECK_FALSE(classify_torsion(FPWord{{1, 2}}).torsion);
  CHECK(classify_torsion(FPWord{}).trivial);

  std::mt19937_64 rng(24);
  for (int t2 = 0; t2 < 400; ++t2) {
    FPWord w = random_fp(rng, 3, 9);
    TorsionClass cls = classify_torsion(w);
    if (cls.torsion) {
      CHECK(fp_multiply(w, w).empty());  // order 2
    } else if (!w.empty()) {
      FPWord acc = w;
      for (int k = 2; k <= 10; ++k) {
        acc = fp_multiply(acc, w);
        CHECK_FALSE(acc.empty());
      }
    }
  }
}

TEST_CASE("free generator rewriting") {
  // x1 x3 = (x1 x2)(x2 x3) = y1 y2
  FreeWord f = to_free_generators(FPWord{{1, 3}});
  REQUIRE(f.syllables.size() == 2);
  CHECK(f.syllables[0] == FreeSyllable{1, 1});
  CHECK(f.syllables[1] == FreeSyllable{2, 1});

  f = to_free_generators(FPWord{{1, 2}});
  REQUIRE(f.syllables.size() == 1);
  CHECK(f.syllables[0] == FreeSyllable{1, 1});

  CHECK_THROWS_AS(to_free_generators(FPWord{{3}}), error);

  CHECK(from_free_generators(FreeWord{{{1, 1}}}).letters == std::vector<int>{1, 2});
  CHECK(from_free_generators(FreeWord{{{1, 1}, {2, 1}}}).letters ==
        std::vector<int>{1, 3});
}

TEST_CASE("N is free at desk scale: round-trips") {
  std::mt19937_64 rng(25);
  int done = 0;
  while (done < 1000) {
    FPWord w = random_fp(rng, 4, 10);
    if (parity(w) != 0) w.letters.pop_back();
    CHECK(from_free_generators(to_free_generators(w)) == w);
    ++done;
  }
  done = 0;
  while (done < 1000) {
    FreeWord f = random_free(rng, 3, 6, 3);
    FPWord w = from_free_generators(f);
    CHECK(to_free_generators(w) == f);
    if (!f.syllables.empty()) CHECK_FALSE(w.empty());  // freeness witness
    ++done;
  }
}

TEST_CASE("fp context and word interface") {
  FpContext ctx(3);
  CHECK(ctx.canonical_key(FPWord{{1, 2, 1}}) == "f:1.2.1");
  CHECK(ctx.canonical_key(ctx.identity()) == "f:");
  CHECK(ctx.generators().size() == 3);
  CHECK_THROWS_AS(ctx.multiply(FPWord{{4}}, FPWord{}), error);

  // exponents act mod 2: x1^-1 == x1
  CHECK(fp_from_word(parse_word("x1^-1", 2), 2).letters == std::vector<int>{1});
  CHECK(fp_from_word(parse_word("x1^2", 2), 2).empty());
  CHECK(fp_from_word(parse_word("x1^3 x2 x2 x1", 2), 2).empty());
}
