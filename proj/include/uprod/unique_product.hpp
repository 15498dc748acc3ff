// Unique-product counting over any group context, Cayley-ball enumeration,
// and search for nonunique-product witness sets.
//
// For finite subsets X, Y the engine tabulates every product xy by canonical
// key. An element with multiplicity 1 is a unique product; a set S whose
// square S*S has no unique product at all certifies that the group is not a
// unique product group. The search looks for such S inside a generator ball,
// by default over symmetric candidates (S = S^-1, identity excluded), with
// annealing on the integer objective unique_count.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "uprod/group.hpp"

namespace uprod {

template <class Element>
struct FiniteSubset {
  std::vector<Element> elements;
  std::vector<std::string> keys;  // canonical keys, parallel to elements
  std::size_t size() const { return elements.size(); }
};

// Builds a subset, rejecting duplicates (by canonical key).
template <GroupContextType C>
FiniteSubset<typename C::element_type> make_subset(
    const C& ctx, std::vector<typename C::element_type> elements) {
  FiniteSubset<typename C::element_type> s;
  std::unordered_map<std::string, int> seen;
  for (auto& e : elements) {
    std::string key = ctx.canonical_key(e);
    if (!seen.emplace(key, 1).second)
      fail("duplicate element in subset: " + key);
    s.keys.push_back(std::move(key));
    s.elements.push_back(std::move(e));
  }
  if (s.elements.empty()) fail("subset must be nonempty");
  return s;
}

struct UPWitnessTriple {
  std::string product;
  std::string left;
  std::string right;
};

struct UPReport {
  long long unique_count = 0;
  long long total = 0;  // |X| * |Y|
  std::map<std::string, long long> multiplicity;
  std::vector<UPWitnessTriple> witnesses;
};

template <GroupContextType C>
UPReport product_report(const C& ctx,
                        const FiniteSubset<typename C::element_type>& x,
                        const FiniteSubset<typename C::element_type>& y,
                        int workers = 1) {
  if (x.elements.empty() || y.elements.empty()) fail("X and Y must be nonempty");
  const std::size_t nx = x.elements.size(), ny = y.elements.size();
  std::vector<std::string> keys(nx * ny);
  auto run_rows = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        keys[i * ny + j] = ctx.canonical_key(ctx.multiply(x.elements[i], y.elements[j]));
  };
  if (workers <= 1 || nx < 2) {
    run_rows(0, nx);
  } else {
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), nx);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < w; ++t) {
      std::size_t lo = nx * t / w, hi = nx * (t + 1) / w;
      pool.emplace_back(run_rows, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  UPReport report;
  report.total = static_cast<long long>(nx * ny);
  for (const std::string& k : keys) ++report.multiplicity[k];
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const std::string& k = keys[i * ny + j];
      if (report.multiplicity.at(k) == 1)
        report.witnesses.push_back(UPWitnessTriple{k, x.keys[i], y.keys[j]});
    }
  report.unique_count = static_cast<long long>(report.witnesses.size());
  return report;
}

// Strojnowski's single-set form: X against itself.
template <GroupContextType C>
UPReport check_square(const C& ctx, const FiniteSubset<typename C::element_type>& x,
                      int workers = 1) {
  return product_report(ctx, x, x, workers);
}

struct TwoUPReport {
  UPReport base;
  bool at_least_two = false;
};

template <GroupContextType C>
TwoUPReport two_up_report(const C& ctx,
                          const FiniteSubset<typename C::element_type>& x,
                          const FiniteSubset<typename C::element_type>& y,
                          int workers = 1) {
  if (x.size() + y.size() < 3) fail("two-unique-product check needs |X| + |Y| >= 3");
  TwoUPReport r;
  r.base = product_report(ctx, x, y, workers);
  r.at_least_two = r.base.unique_count >= 2;
  return r;
}

// All products of at most `radius` generators and inverses, deduplicated by
// canonical key, in breadth-first discovery order.
template <GroupContextType C>
FiniteSubset<typename C::element_type> ball(const C& ctx, int radius) {
  if (radius < 0) fail("radius must be nonnegative");
  using Element = typename C::element_type;
  std::vector<Element> steps;
  {
    std::unordered_map<std::string, int> seen;
    for (const Element& g : ctx.generators()) {
      if (seen.emplace(ctx.canonical_key(g), 1).second) steps.push_back(g);
      Element inv = ctx.invert(g);
      if (seen.emplace(ctx.canonical_key(inv), 1).second) steps.push_back(inv);
    }
  }
  FiniteSubset<Element> out;
  std::unordered_map<std::string, int> seen;
  Element id = ctx.identity();
  out.keys.push_back(ctx.canonical_key(id));
  out.elements.push_back(id);
  seen.emplace(out.keys.back(), 0);
  std::size_t frontier_begin = 0;
  for (int r = 0; r < radius; ++r) {
    std::size_t frontier_end = out.elements.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i)
      for (const Element& s : steps) {
        Element g = ctx.multiply(out.elements[i], s);
        std::string key = ctx.canonical_key(g);
        if (seen.emplace(key, 1).second) {
          out.keys.push_back(std::move(key));
          out.elements.push_back(std::move(g));
        }
      }
    frontier_begin = frontier_end;
  }
  return out;
}

enum class SearchStrategy { ExhaustiveSmall, Greedy, Anneal };

SearchStrategy parse_strategy(const std::string& name);
std::string strategy_name(SearchStrategy s);

// Defaults favor unconstrained candidates: exhaustive scans show the G_2
// balls of radius <= 4 hold no symmetric identity-free witness, while
// unconstrained annealing finds one inside radius 3 within seconds.
struct SearchOptions {
  int size = 14;
  int radius = 3;
  std::uint64_t seed = 0;
  SearchStrategy strategy = SearchStrategy::Anneal;
  bool symmetric = false;      // opt-in: maintain S = S^-1
  bool allow_identity = false;
  long long restarts = 200;
  long long moves = 40000;     // per restart (anneal/greedy) or evaluation cap
  double t0 = 3.0;
  double cooling = 0.9997;
  long long budget_ms = 0;  // 0: no wall-clock cap
  int workers = 1;
};

template <class Element>
struct SearchOutcome {
  bool found = false;
  std::vector<Element> witness;
  long long best_unique_count = -1;
  long long restarts_completed = 0;
  bool budget_exhausted = false;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Precomputed product-id table over a ball: the search only touches ints.
struct BallTable {
  int m = 0;                    // ball size
  std::vector<int> inverse_of;  // index of e_i^-1 within the ball
  std::vector<int> product_id;  // m*m ids into a dense key space
  int id_count = 0;
  int identity_index = 0;

  long long unique_count(const std::vector<int>& sel, std::vector<int>& counts,
                         std::vector<int>& touched) const {
    touched.clear();
    for (int i : sel)
      for (int j : sel) {
        int id = product_id[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                            static_cast<std::size_t>(j)];
        if (counts[static_cast<std::size_t>(id)]++ == 0)
          touched.push_back(id);
      }
    long long unique = 0;
    for (int id : touched) {
      if (counts[static_cast<std::size_t>(id)] == 1) ++unique;
      counts[static_cast<std::size_t>(id)] = 0;
    }
    return unique;
  }
};

template <GroupContextType C>
BallTable build_ball_table(const C& ctx,
                           const FiniteSubset<typename C::element_type>& b) {
  BallTable t;
  t.m = static_cast<int>(b.size());
  std::unordered_map<std::string, int> index_of;
  for (int i = 0; i < t.m; ++i) index_of.emplace(b.keys[static_cast<std::size_t>(i)], i);
  t.identity_index = index_of.at(ctx.canonical_key(ctx.identity()));
  t.inverse_of.resize(static_cast<std::size_t>(t.m));
  for (int i = 0; i < t.m; ++i) {
    auto it = index_of.find(ctx.canonical_key(ctx.invert(b.elements[static_cast<std::size_t>(i)])));
    if (it == index_of.end()) internal_error("ball not closed under inversion");
    t.inverse_of[static_cast<std::size_t>(i)] = it->second;
  }
  std::unordered_map<std::string, int> id_of;
  t.product_id.resize(static_cast<std::size_t>(t.m) * static_cast<std::size_t>(t.m));
  for (int i = 0; i < t.m; ++i)
    for (int j = 0; j < t.m; ++j) {
      std::string key = ctx.canonical_key(
          ctx.multiply(b.elements[static_cast<std::size_t>(i)],
                       b.elements[static_cast<std::size_t>(j)]));
      auto [it, fresh] = id_of.emplace(std::move(key), t.id_count);
      if (fresh) ++t.id_count;
      t.product_id[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.m) +
                   static_cast<std::size_t>(j)] = it->second;
    }
  return t;
}

// Candidate units: orbits {g, g^-1} (or singletons for involutions/identity).
struct Orbit {
  std::vector<int> members;
};

std::vector<Orbit> candidate_orbits(const BallTable& t, bool symmetric,
                                    bool allow_identity);

// Whether `size` is reachable as a sum of orbit cardinalities.
bool selection_feasible(const std::vector<Orbit>& orbits, int size);

std::optional<std::vector<int>> run_one_restart(const BallTable& table,
                                                const std::vector<Orbit>& orbits,
                                                const SearchOptions& opts,
                                                std::uint64_t restart_seed,
                                                long long* best_seen);

bool exhaustive_orbit_scan(const BallTable& table, const std::vector<Orbit>& orbits,
                           const SearchOptions& opts, std::vector<int>* out,
                           long long* best_seen, bool* budget_hit);

}  // namespace detail

template <GroupContextType C>
SearchOutcome<typename C::element_type> search_witness(const C& ctx,
                                                       const SearchOptions& opts) {
  if (opts.size < 2) fail("witness size must be at least 2 (singletons always have a unique product)");
  using Element = typename C::element_type;
  SearchOutcome<Element> outcome;
  FiniteSubset<Element> b = ball(ctx, opts.radius);
  detail::BallTable table = detail::build_ball_table(ctx, b);
  std::vector<detail::Orbit> orbits =
      detail::candidate_orbits(table, opts.symmetric, opts.allow_identity);
  // fail on the caller's thread, not inside a worker
  if (!detail::selection_feasible(orbits, opts.size))
    fail("cannot assemble a size-" + std::to_string(opts.size) +
         " candidate from the radius-" + std::to_string(opts.radius) +
         " ball (too small, or no parity-compatible orbits)");

  auto finish = [&](const std::vector<int>& sel) {
    for (int i : sel) outcome.witness.push_back(b.elements[static_cast<std::size_t>(i)]);
    outcome.found = true;
    outcome.best_unique_count = 0;
  };

  const auto started = std::chrono::steady_clock::now();
  auto out_of_time = [&]() {
    if (opts.budget_ms <= 0) return false;
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    return elapsed >= opts.budget_ms;
  };

  if (opts.strategy == SearchStrategy::ExhaustiveSmall) {
    std::vector<int> sel;
    long long best = -1;
    bool budget_hit = false;
    if (detail::exhaustive_orbit_scan(table, orbits, opts, &sel, &best, &budget_hit)) {
      finish(sel);
    } else {
      outcome.best_unique_count = best;
      outcome.budget_exhausted = budget_hit;
    }
    return outcome;
  }

  // Restarts run in waves of `workers`; the reported witness is the success
  // with the smallest restart index, so the result does not depend on thread
  // scheduling or worker count.
  long long best = -1;
  std::optional<std::vector<int>> found;
  const int wave = std::max(1, opts.workers);
  for (long long r0 = 0; r0 < opts.restarts && !found; r0 += wave) {
    if (out_of_time()) {
      outcome.budget_exhausted = true;
      break;
    }
    const long long r1 = std::min(opts.restarts, r0 + wave);
    std::vector<std::optional<std::vector<int>>> wave_found(
        static_cast<std::size_t>(r1 - r0));
    std::vector<long long> wave_best(static_cast<std::size_t>(r1 - r0), -1);
    auto run = [&](long long r) {
      wave_found[static_cast<std::size_t>(r - r0)] = detail::run_one_restart(
          table, orbits, opts, detail::mix_seed(opts.seed, static_cast<std::uint64_t>(r)),
          &wave_best[static_cast<std::size_t>(r - r0)]);
    };
    if (wave == 1) {
      run(r0);
    } else {
      std::vector<std::thread> pool;
      for (long long r = r0; r < r1; ++r) pool.emplace_back(run, r);
      for (auto& th : pool) th.join();
    }
    for (long long r = r0; r < r1; ++r) {
      ++outcome.restarts_completed;
      long long wb = wave_best[static_cast<std::size_t>(r - r0)];
      if (wb >= 0 && (best < 0 || wb < best)) best = wb;
      if (!found && wave_found[static_cast<std::size_t>(r - r0)]) {
        found = wave_found[static_cast<std::size_t>(r - r0)];
        break;
      }
    }
  }
  if (found)
    finish(*found);
  else
    outcome.best_unique_count = best;
  return outcome;
}

}  // namespace uprod
