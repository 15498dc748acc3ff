#include "uprod/unique_product.hpp"

#include <algorithm>
#include <random>

namespace uprod {

SearchStrategy parse_strategy(const std::string& name) {
  if (name == "exhaustive-small") return SearchStrategy::ExhaustiveSmall;
  if (name == "greedy") return SearchStrategy::Greedy;
  if (name == "anneal") return SearchStrategy::Anneal;
  fail("unknown strategy '" + name + "' (expected exhaustive-small, greedy, anneal)");
}

std::string strategy_name(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::ExhaustiveSmall: return "exhaustive-small";
    case SearchStrategy::Greedy: return "greedy";
    case SearchStrategy::Anneal: return "anneal";
  }
  return "?";
}

namespace detail {

std::vector<Orbit> candidate_orbits(const BallTable& t, bool symmetric,
                                    bool allow_identity) {
  std::vector<Orbit> orbits;
  for (int i = 0; i < t.m; ++i) {
    if (!allow_identity && i == t.identity_index) continue;
    if (!symmetric) {
      orbits.push_back(Orbit{{i}});
      continue;
    }
    int inv = t.inverse_of[static_cast<std::size_t>(i)];
    if (inv == i)
      orbits.push_back(Orbit{{i}});
    else if (i < inv)
      orbits.push_back(Orbit{{i, inv}});
  }
  return orbits;
}

bool selection_feasible(const std::vector<Orbit>& orbits, int size) {
  long long singles = 0, pairs = 0;
  for (const Orbit& o : orbits) (o.members.size() == 1 ? singles : pairs) += 1;
  for (long long a = (size % 2 == 0) ? 0 : 1; a <= singles; a += 2) {
    long long rest = size - a;
    if (rest >= 0 && rest / 2 <= pairs) return true;
  }
  return false;
}

namespace {

struct Selection {
  std::vector<char> chosen;      // per orbit
  std::vector<int> members;      // flattened element indices
  const std::vector<Orbit>* orbits = nullptr;

  void rebuild() {
    members.clear();
    for (std::size_t o = 0; o < orbits->size(); ++o)
      if (chosen[o])
        for (int e : (*orbits)[o].members) members.push_back(e);
  }
};

// Picks counts (singles, pairs) matching the requested size, then random
// orbits of each kind.
bool random_init(Selection& sel, const std::vector<Orbit>& orbits, int size,
                 std::mt19937_64& rng) {
  std::vector<std::size_t> singles, pairs;
  for (std::size_t o = 0; o < orbits.size(); ++o)
    (orbits[o].members.size() == 1 ? singles : pairs).push_back(o);
  long long want_singles = -1;
  for (long long a = (size % 2 == 0) ? 0 : 1; a <= static_cast<long long>(singles.size());
       a += 2) {
    long long rest = size - a;
    if (rest >= 0 && rest / 2 <= static_cast<long long>(pairs.size())) {
      want_singles = a;
      break;
    }
  }
  if (want_singles < 0) return false;
  long long want_pairs = (size - want_singles) / 2;

  auto shuffle = [&rng](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(rng() % i)]);
  };
  shuffle(singles);
  shuffle(pairs);
  sel.chosen.assign(orbits.size(), 0);
  for (long long i = 0; i < want_singles; ++i) sel.chosen[singles[static_cast<std::size_t>(i)]] = 1;
  for (long long i = 0; i < want_pairs; ++i) sel.chosen[pairs[static_cast<std::size_t>(i)]] = 1;
  sel.orbits = &orbits;
  sel.rebuild();
  return true;
}

}  // namespace

std::optional<std::vector<int>> run_one_restart(const BallTable& table,
                                                const std::vector<Orbit>& orbits,
                                                const SearchOptions& opts,
                                                std::uint64_t restart_seed,
                                                long long* best_seen) {
  std::mt19937_64 rng(restart_seed);
  Selection sel;
  if (!random_init(sel, orbits, opts.size, rng))
    fail("cannot assemble a size-" + std::to_string(opts.size) +
         " candidate from the radius ball (too small, or no parity-compatible orbits)");

  // chosen orbit ids as a flat list for O(1) move sampling
  std::vector<std::size_t> chosen_list;
  for (std::size_t o = 0; o < orbits.size(); ++o)
    if (sel.chosen[o]) chosen_list.push_back(o);

  std::vector<int> counts(static_cast<std::size_t>(table.id_count), 0);
  std::vector<int> touched;
  touched.reserve(static_cast<std::size_t>(opts.size) * static_cast<std::size_t>(opts.size));

  auto objective = [&]() { return table.unique_count(sel.members, counts, touched); };

  long long current = objective();
  auto note = [&](long long v) {
    if (*best_seen < 0 || v < *best_seen) *best_seen = v;
  };
  note(current);
  if (current == 0) return sel.members;

  const bool greedy = opts.strategy == SearchStrategy::Greedy;
  double temperature = opts.t0;

  for (long long move = 0; move < opts.moves; ++move) {
    // swap a chosen orbit for an unchosen one of the same cardinality
    std::size_t slot = static_cast<std::size_t>(rng() % chosen_list.size());
    std::size_t s = chosen_list[slot];
    std::size_t u = orbits.size();
    for (int attempt = 0; attempt < 256; ++attempt) {
      std::size_t cand = static_cast<std::size_t>(rng() % orbits.size());
      if (!sel.chosen[cand] &&
          orbits[cand].members.size() == orbits[s].members.size()) {
        u = cand;
        break;
      }
    }
    if (u == orbits.size()) continue;  // no swap partner this round
    sel.chosen[s] = 0;
    sel.chosen[u] = 1;
    sel.rebuild();
    long long proposed = objective();
    note(proposed);
    if (proposed == 0) return sel.members;
    long long delta = proposed - current;
    bool accept;
    if (greedy)
      accept = delta <= 0;
    else
      accept = delta <= 0 ||
               unit_real(rng) < std::exp(-static_cast<double>(delta) / temperature);
    if (accept) {
      current = proposed;
      chosen_list[slot] = u;
    } else {
      sel.chosen[s] = 1;
      sel.chosen[u] = 0;
      sel.rebuild();
    }
    temperature = std::max(temperature * opts.cooling, 1e-3);
  }
  return std::nullopt;
}

bool exhaustive_orbit_scan(const BallTable& table, const std::vector<Orbit>& orbits,
                           const SearchOptions& opts, std::vector<int>* out,
                           long long* best_seen, bool* budget_hit) {
  // Scans combinations of equal-size orbits in lexicographic order. Mixed
  // orbit sizes are not enumerated; use anneal for those.
  bool have_pairs = false;
  for (const Orbit& o : orbits) have_pairs |= o.members.size() == 2;
  std::size_t unit = (have_pairs && opts.size % 2 == 0) ? 2 : 1;
  std::vector<std::size_t> pool;
  for (std::size_t o = 0; o < orbits.size(); ++o)
    if (orbits[o].members.size() == unit) pool.push_back(o);
  const std::size_t pick = static_cast<std::size_t>(opts.size) / unit;
  if (pool.size() < pick)
    fail("exhaustive-small: not enough orbits for the requested size");

  std::vector<int> counts(static_cast<std::size_t>(table.id_count), 0);
  std::vector<int> touched;
  std::vector<std::size_t> comb(pick);
  for (std::size_t i = 0; i < pick; ++i) comb[i] = i;
  long long evals = 0;
  const long long cap = opts.moves * std::max<long long>(1, opts.restarts);
  std::vector<int> members;
  while (true) {
    members.clear();
    for (std::size_t i : comb)
      for (int e : orbits[pool[i]].members) members.push_back(e);
    long long v = table.unique_count(members, counts, touched);
    if (*best_seen < 0 || v < *best_seen) *best_seen = v;
    if (v == 0) {
      *out = members;
      return true;
    }
    if (++evals >= cap) {
      *budget_hit = true;
      return false;
    }
    // next combination
    std::size_t i = pick;
    while (i > 0) {
      --i;
      if (comb[i] != i + pool.size() - pick) {
        ++comb[i];
        for (std::size_t j = i + 1; j < pick; ++j) comb[j] = comb[j - 1] + 1;
        break;
      }
      if (i == 0) return false;  // exhausted
    }
    if (pick == 0) return false;
  }
}

}  // namespace detail

}  // namespace uprod
