#include "uprod/chw.hpp"

namespace uprod {

namespace {

// sigma_i: the action of moving the square vector rightward past letter x_i.
void sigma(std::vector<long long>& a, int i) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (static_cast<int>(j + 1) != i) a[j] = -a[j];
}

// state * x_i, keeping (reduced word, right-side vector) form.
void apply_letter(GnElement& g, int i) {
  sigma(g.squares, i);
  if (!g.word.empty() && g.word.back() == i) {
    g.word.pop_back();  // x_i x_i contributes e_i
    g.squares[static_cast<std::size_t>(i - 1)] += 1;
  } else {
    g.word.push_back(i);
  }
}

// state * x_i^e: one letter when e is odd, then the even part as vector.
void apply_token(GnElement& g, int i, long long e) {
  long long s = ((e % 2) + 2) % 2;
  long long half = (e - s) / 2;
  if (s != 0) apply_letter(g, i);
  g.squares[static_cast<std::size_t>(i - 1)] += half;
}

}  // namespace

GnElement chw_identity(int n) {
  GnElement g;
  g.squares.assign(static_cast<std::size_t>(n), 0);
  return g;
}

GnElement normalize(const GeneratorWord& word, int n) {
  GnElement g = chw_identity(n);
  for (const WordToken& t : word.tokens) {
    if (t.index < 1 || t.index > n)
      fail("index out of range: x" + std::to_string(t.index) + " with rank " +
           std::to_string(n));
    apply_token(g, t.index, t.exponent);
  }
  return g;
}

GnElement chw_multiply(const GnElement& a, const GnElement& b) {
  if (a.rank() != b.rank()) fail("rank mismatch");
  GnElement g = a;
  for (int letter : b.word) apply_letter(g, letter);
  for (std::size_t j = 0; j < g.squares.size(); ++j) g.squares[j] += b.squares[j];
  return g;
}

GnElement chw_invert(const GnElement& g) {
  GeneratorWord inv;
  inv.tokens.reserve(g.squares.size() + g.word.size());
  for (int i = 1; i <= g.rank(); ++i) {
    long long a = g.squares[static_cast<std::size_t>(i - 1)];
    if (a != 0) inv.tokens.push_back(WordToken{i, -2 * a});
  }
  for (auto it = g.word.rbegin(); it != g.word.rend(); ++it)
    inv.tokens.push_back(WordToken{*it, -1});
  return normalize(inv, g.rank());
}

std::string chw_key(const GnElement& g) {
  std::string key = "w:";
  for (std::size_t i = 0; i < g.word.size(); ++i) {
    if (i) key += '.';
    key += std::to_string(g.word[i]);
  }
  key += ";a:";
  for (std::size_t i = 0; i < g.squares.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(g.squares[i]);
  }
  return key;
}

GeneratorWord chw_to_word(const GnElement& g) {
  GeneratorWord out;
  for (int letter : g.word) out.tokens.push_back(WordToken{letter, 1});
  for (int i = 1; i <= g.rank(); ++i) {
    long long a = g.squares[static_cast<std::size_t>(i - 1)];
    if (a != 0) out.tokens.push_back(WordToken{i, 2 * a});
  }
  return out;
}

RelatorReport relator_check(int n) {
  if (n < 0) fail("rank must be nonnegative");
  RelatorReport report;
  report.n = n;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      ++report.relator_count;
      GeneratorWord relator;
      relator.tokens = {WordToken{i, -1}, WordToken{j, 2}, WordToken{i, 1},
                        WordToken{j, 2}};
      if (!normalize(relator, n).is_identity()) {
        report.all_identity = false;
        report.failures.emplace_back(i, j);
      }
    }
  }
  return report;
}

GnElement embed(const GnElement& g, int m, int n) {
  if (m > n) fail("embed requires m <= n");
  if (g.rank() != m) fail("element rank does not match m");
  GnElement out;
  out.word = g.word;
  out.squares = g.squares;
  out.squares.resize(static_cast<std::size_t>(n), 0);
  return out;
}

FPWord project_to_quotient(const GnElement& g) { return FPWord{g.word}; }

DihedralElement dihedral_multiply(const DihedralElement& a, const DihedralElement& b) {
  // (ba)^z1 b^f1 (ba)^z2 b^f2 = (ba)^(z1 + (-1)^f1 z2) b^(f1 xor f2)
  DihedralElement out;
  out.z_power = a.z_power + (a.b_flag ? -b.z_power : b.z_power);
  out.b_flag = a.b_flag != b.b_flag;
  return out;
}

DihedralElement dihedral_image(const GnElement& g, int distinguished) {
  if (distinguished < 1 || distinguished > g.rank())
    fail("distinguished index out of range");
  DihedralElement acc;
  for (int letter : g.word) {
    DihedralElement gen;
    if (letter == distinguished)
      gen.z_power = 1;  // x_d -> ba
    else
      gen.b_flag = true;  // x_i -> b
    acc = dihedral_multiply(acc, gen);
  }
  // x_d^2 -> (ba)^2 and x_i^2 -> 1, so the vector contributes 2 a_d.
  DihedralElement tail;
  tail.z_power = 2 * g.squares[static_cast<std::size_t>(distinguished - 1)];
  return dihedral_multiply(acc, tail);
}

SpotcheckResult infinite_order_spotcheck(const GnElement& g, int bound) {
  if (g.is_identity()) fail("spotcheck requires a nontrivial element");
  GnElement acc = g;
  for (int k = 1; k <= bound; ++k) {
    if (k > 1) acc = chw_multiply(acc, g);
    if (acc.is_identity()) return SpotcheckResult{false, k};
  }
  return SpotcheckResult{true, 0};
}

std::vector<GnElement> ChwContext::generators() const {
  std::vector<GnElement> gens;
  gens.reserve(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) {
    GnElement g = chw_identity(n_);
    g.word.push_back(i);
    gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace uprod
