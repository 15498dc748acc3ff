// The group-context contract and the generic operations derived from it.
//
// A context is a stateless value describing one concrete group: it knows its
// rank, identity, multiplication, inversion, an injective printable key, and
// the generator list. Everything downstream (generic power, commutator, word
// evaluation, ball enumeration, the unique-product engine) is written against
// this contract, so any conforming context can be plugged in.

#pragma once

#include <concepts>
#include <string>
#include <vector>

#include "uprod/common.hpp"
#include "uprod/word.hpp"

namespace uprod {

template <class C>
concept GroupContextType = requires(const C& ctx, const typename C::element_type& a,
                                    const typename C::element_type& b) {
  typename C::element_type;
  { ctx.rank() } -> std::convertible_to<int>;
  { ctx.identity() } -> std::same_as<typename C::element_type>;
  { ctx.multiply(a, b) } -> std::same_as<typename C::element_type>;
  { ctx.invert(a) } -> std::same_as<typename C::element_type>;
  { ctx.canonical_key(a) } -> std::convertible_to<std::string>;
  { ctx.generators() } -> std::same_as<std::vector<typename C::element_type>>;
};

// g^k by square-and-multiply; k < 0 goes through invert.
template <GroupContextType C>
typename C::element_type power(const C& ctx, typename C::element_type g, long long k) {
  if (k < 0) {
    g = ctx.invert(g);
    k = -k;
  }
  typename C::element_type acc = ctx.identity();
  while (k > 0) {
    if (k & 1) acc = ctx.multiply(acc, g);
    g = ctx.multiply(g, g);
    k >>= 1;
  }
  return acc;
}

// a b a^-1 b^-1
template <GroupContextType C>
typename C::element_type commutator(const C& ctx, const typename C::element_type& a,
                                    const typename C::element_type& b) {
  return ctx.multiply(ctx.multiply(a, b),
                      ctx.multiply(ctx.invert(a), ctx.invert(b)));
}

// Evaluates a generator word as a product of context generators.
template <GroupContextType C>
typename C::element_type evaluate_word(const C& ctx, const GeneratorWord& word) {
  const std::vector<typename C::element_type> gens = ctx.generators();
  typename C::element_type acc = ctx.identity();
  for (const WordToken& t : word.tokens) {
    if (t.index < 1 || t.index > ctx.rank())
      fail("word index " + std::to_string(t.index) + " out of range for rank " +
           std::to_string(ctx.rank()));
    acc = ctx.multiply(acc, power(ctx, gens[static_cast<std::size_t>(t.index - 1)],
                                  t.exponent));
  }
  return acc;
}

}  // namespace uprod
