#include "uprod/word.hpp"

#include <algorithm>
#include <cctype>

namespace uprod {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

WordToken parse_token(std::string_view tok, int rank) {
  if (tok.size() < 2 || tok[0] != 'x')
    fail("malformed token '" + std::string(tok) + "': expected x<i> or x<i>^<e>");
  std::string_view rest = tok.substr(1);
  std::string_view index_part = rest;
  std::string_view exp_part;
  bool has_exp = false;
  if (auto caret = rest.find('^'); caret != std::string_view::npos) {
    index_part = rest.substr(0, caret);
    exp_part = rest.substr(caret + 1);
    has_exp = true;
  }
  if (!all_digits(index_part))
    fail("malformed token '" + std::string(tok) + "': bad generator index");
  long long index = 0;
  for (char c : index_part) {
    index = index * 10 + (c - '0');
    if (index > 1'000'000) fail("generator index too large in '" + std::string(tok) + "'");
  }
  if (index < 1 || index > rank)
    fail("index out of range in '" + std::string(tok) + "': rank is " +
         std::to_string(rank));

  long long exponent = 1;
  if (has_exp) {
    if (exp_part.empty())
      fail("empty exponent in token '" + std::string(tok) + "'");
    bool negative = exp_part[0] == '-';
    std::string_view digits = negative ? exp_part.substr(1) : exp_part;
    if (!all_digits(digits))
      fail("malformed exponent in token '" + std::string(tok) + "'");
    exponent = 0;
    for (char c : digits) {
      exponent = exponent * 10 + (c - '0');
      if (exponent > 1'000'000'000'000LL)
        fail("exponent too large in token '" + std::string(tok) + "'");
    }
    if (negative) exponent = -exponent;
  }
  return WordToken{static_cast<int>(index), exponent};
}

}  // namespace

GeneratorWord parse_word(std::string_view text, int rank) {
  if (rank < 0) fail("rank must be nonnegative");
  GeneratorWord word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    WordToken tok = parse_token(text.substr(pos, end - pos), rank);
    if (tok.exponent != 0) word.tokens.push_back(tok);
    pos = end;
  }
  return word;
}

std::string format_word(const GeneratorWord& word) {
  std::string out;
  for (const WordToken& t : word.tokens) {
    if (!out.empty()) out += ' ';
    out += 'x';
    out += std::to_string(t.index);
    if (t.exponent != 1) {
      out += '^';
      out += std::to_string(t.exponent);
    }
  }
  return out;
}

GeneratorWord inverse_word(const GeneratorWord& word) {
  GeneratorWord inv;
  inv.tokens.reserve(word.tokens.size());
  for (auto it = word.tokens.rbegin(); it != word.tokens.rend(); ++it)
    inv.tokens.push_back(WordToken{it->index, -it->exponent});
  return inv;
}

}  // namespace uprod
