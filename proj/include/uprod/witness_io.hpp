// Witness files: one generator word per line, `#` comments, and a header
// line `group: <spec>` naming the group the words live in (e.g. chw:2).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uprod/unique_product.hpp"

namespace uprod {

struct WitnessFile {
  std::string group;
  std::vector<std::string> words;
};

WitnessFile parse_witness_text(const std::string& text);
WitnessFile load_witness_file(const std::string& path);
std::string render_witness_text(const std::string& group,
                                const std::vector<std::string>& words);

// Parses each word, normalizes into the context, rejects duplicates, and
// runs the square check; unique_count 0 certifies the witness.
template <GroupContextType C>
UPReport verify_witness(const C& ctx, const std::vector<std::string>& words,
                        int workers = 1) {
  std::vector<typename C::element_type> elems;
  elems.reserve(words.size());
  for (const std::string& line : words)
    elems.push_back(evaluate_word(ctx, parse_word(line, ctx.rank())));
  FiniteSubset<typename C::element_type> s = make_subset(ctx, std::move(elems));
  return check_square(ctx, s, workers);
}

}  // namespace uprod
