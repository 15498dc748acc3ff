// Generator-word grammar shared by every group in the library.
//
// A word is a whitespace-separated list of tokens `x<i>` or `x<i>^<e>`,
// 1-based generator index i, nonzero integer exponent e. Tokens with
// exponent 0 are dropped at parse time, so "" parses to the identity.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uprod/common.hpp"

namespace uprod {

struct WordToken {
  int index = 0;
  long long exponent = 0;
  bool operator==(const WordToken&) const = default;
};

struct GeneratorWord {
  std::vector<WordToken> tokens;
  bool empty() const { return tokens.empty(); }
  bool operator==(const GeneratorWord&) const = default;
};

// Parses `text` against rank `rank`. Throws uprod::error on malformed
// tokens, empty exponents, or indices outside 1..rank.
GeneratorWord parse_word(std::string_view text, int rank);

// Canonical rendering: `x1 x2^-3`; identity renders as "".
std::string format_word(const GeneratorWord& word);

// Reversed word with negated exponents.
GeneratorWord inverse_word(const GeneratorWord& word);

}  // namespace uprod
