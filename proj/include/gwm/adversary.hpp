#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "gwm/graph.hpp"
#include "gwm/key_values.hpp"
#include "gwm/rng.hpp"
#include "gwm/separation.hpp"

namespace gwm {

class AttackError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flips every unordered pair independently with probability flip_prob.
inline Graph random_flip_attack(const Graph& g, double flip_prob, std::uint64_t seed) {
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw AttackError("flip probability outside [0, 1]");
  const std::size_t n = g.num_vertices();
  std::vector<VertexPair> flips;
  if (flip_prob > 0.0) {
    for (std::size_t u = 0; u + 1 < n; ++u) {
      Rng rng(derive_seed(seed, {u}));
      std::uint64_t v = u + 1;
      while (true) {
        const auto skip = rng.geometric_skip(flip_prob);
        if (skip >= n) break;
        v += skip;
        if (v >= n) break;
        flips.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        ++v;
      }
    }
  }
  Graph out = g;
  out.toggle_all(flips);
  return out;
}

namespace detail {

inline VertexPair random_pair(Rng& rng, std::size_t n) {
  const auto u = rng.below(n);
  auto v = rng.below(n - 1);
  if (v >= u) ++v;
  return VertexPair(static_cast<Vertex>(u), static_cast<Vertex>(v));
}

inline std::uint64_t pair_code(const VertexPair& p, std::size_t n) {
  return static_cast<std::uint64_t>(p.u) * n + p.v;
}

// `count` distinct uniform unordered pairs; count must be at most C(n,2)/2.
inline std::vector<VertexPair> distinct_random_pairs(std::size_t n, std::uint64_t count, Rng& rng) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  std::vector<VertexPair> out;
  out.reserve(count);
  while (out.size() < count) {
    auto p = random_pair(rng, n);
    if (seen.insert(pair_code(p, n)).second) out.push_back(p);
  }
  return out;
}

}  // namespace detail

/// Flips exactly num_pairs distinct, uniformly chosen vertex pairs.
inline Graph uniform_pair_attack(const Graph& g, std::uint64_t num_pairs, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  const auto total = potential_edges(n);
  if (num_pairs > total)
    throw AttackError("cannot flip " + std::to_string(num_pairs) + " pairs out of " +
                      std::to_string(total));
  Rng rng(seed);
  std::vector<VertexPair> flips;
  if (num_pairs <= total / 2) {
    flips = detail::distinct_random_pairs(n, num_pairs, rng);
  } else {
    // choose the pairs to keep instead
    auto keep = detail::distinct_random_pairs(n, total - num_pairs, rng);
    std::unordered_set<std::uint64_t> kept;
    for (const auto& p : keep) kept.insert(detail::pair_code(p, n));
    flips.reserve(num_pairs);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (!kept.count(detail::pair_code(VertexPair(u, v), n))) flips.emplace_back(u, v);
  }
  Graph out = g;
  out.toggle_all(flips);
  return out;
}

/// Number of pairs corresponding to a fraction of all C(n,2) potential edges.
inline std::uint64_t pairs_for_fraction(std::size_t n, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw AttackError("fraction outside [0, 1]");
  return static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(potential_edges(n))));
}

struct AttackBudget {
  std::size_t max_total_flips = 0;
  std::size_t max_flips_per_vertex = 0;
  std::optional<double> fraction_of_potential_edges;

  void validate() const {
    if (fraction_of_potential_edges &&
        !(*fraction_of_potential_edges >= 0.0 && *fraction_of_potential_edges <= 1.0))
      throw AttackError("budget fraction outside [0, 1]");
  }

  std::size_t total_cap(std::size_t n) const {
    std::size_t cap = max_total_flips;
    if (fraction_of_potential_edges)
      cap = std::min<std::size_t>(cap, pairs_for_fraction(n, *fraction_of_potential_edges));
    return cap;
  }
};

/// An adversary proposes an ordered list of pair flips; budgets are enforced by the caller.
using FlipStrategy = std::function<std::vector<VertexPair>(const Graph&, Rng&)>;

/// Proposes `count` uniformly random pairs (repeats possible).
inline FlipStrategy uniform_strategy(std::size_t count) {
  return [count](const Graph& g, Rng& rng) {
    std::vector<VertexPair> out;
    if (g.num_vertices() < 2) return out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(detail::random_pair(rng, g.num_vertices()));
    return out;
  };
}

/// Visits vertices in decreasing degree order and proposes `per_vertex` flips
/// between each and random partners.
inline FlipStrategy high_degree_first_strategy(std::size_t per_vertex) {
  return [per_vertex](const Graph& g, Rng& rng) {
    std::vector<VertexPair> out;
    const std::size_t n = g.num_vertices();
    if (n < 2) return out;
    for (Vertex v : detail::degree_order(g))
      for (std::size_t i = 0; i < per_vertex; ++i) {
        auto w = static_cast<Vertex>(rng.below(n - 1));
        if (w >= v) ++w;
        out.emplace_back(v, w);
      }
    return out;
  };
}

/// Named strategies: "uniform", "high-degree-first".
inline FlipStrategy make_strategy(const std::string& name, const AttackBudget& budget,
                                  std::size_t n) {
  const std::size_t total = std::max<std::size_t>(budget.total_cap(n), 1);
  if (name == "uniform") return uniform_strategy(4 * total);
  if (name == "high-degree-first")
    return high_degree_first_strategy(std::max<std::size_t>(budget.max_flips_per_vertex, 1));
  throw AttackError("unknown attack strategy '" + name + "'");
}

struct CappedAttackResult {
  Graph graph;
  std::size_t applied = 0;
  std::size_t skipped = 0;
};

/// Applies the strategy's proposals in order, skipping repeats and any flip that
/// would exceed the per-vertex or total budget.
inline CappedAttackResult budget_capped_attack(const Graph& g, const AttackBudget& budget,
                                               const FlipStrategy& strategy, std::uint64_t seed) {
  budget.validate();
  if (!strategy) throw AttackError("no attack strategy given");
  const std::size_t n = g.num_vertices();
  Rng rng(seed);
  const auto proposals = strategy(g, rng);
  const std::size_t cap = budget.total_cap(n);
  std::vector<std::size_t> per_vertex(n, 0);
  std::unordered_set<std::uint64_t> done;
  std::vector<VertexPair> flips;
  CappedAttackResult r;
  for (const auto& p : proposals) {
    if (flips.size() >= cap) {
      ++r.skipped;
      continue;
    }
    if (p.u == p.v || p.v >= n || per_vertex[p.u] >= budget.max_flips_per_vertex ||
        per_vertex[p.v] >= budget.max_flips_per_vertex ||
        !done.insert(detail::pair_code(p, n)).second) {
      ++r.skipped;
      continue;
    }
    ++per_vertex[p.u];
    ++per_vertex[p.v];
    flips.push_back(p);
  }
  r.graph = g;
  r.graph.toggle_all(flips);
  r.applied = flips.size();
  return r;
}

/// Attack configuration as read from a key=value block:
///   attack=random   prob=<p>
///   attack=uniform  pairs=<k> | fraction=<f>
///   attack=capped   max_total=<r> max_per_vertex=<d> [fraction=<f>] strategy=<name>
struct AttackSpec {
  enum class Kind { random, uniform, capped };
  Kind kind = Kind::uniform;
  double prob = 0.0;
  std::optional<std::uint64_t> pairs;
  std::optional<double> fraction;
  AttackBudget budget;
  std::string strategy = "uniform";
  std::uint64_t seed = 0;

  static AttackSpec from_key_values(const KeyValues& kv) {
    AttackSpec s;
    const auto kind = kv.str("attack");
    s.seed = kv.integer_or("seed", 0);
    if (kv.contains("fraction")) s.fraction = kv.real("fraction");
    if (kind == "random") {
      s.kind = Kind::random;
      s.prob = kv.real("prob");
    } else if (kind == "uniform") {
      s.kind = Kind::uniform;
      if (kv.contains("pairs")) s.pairs = kv.integer("pairs");
      if (!s.pairs && !s.fraction) throw ConfigError("uniform attack needs pairs= or fraction=");
    } else if (kind == "capped") {
      s.kind = Kind::capped;
      s.budget.max_total_flips = kv.integer("max_total");
      s.budget.max_flips_per_vertex = kv.integer("max_per_vertex");
      s.budget.fraction_of_potential_edges = s.fraction;
      s.strategy = kv.str_or("strategy", "uniform");
    } else {
      throw ConfigError("unknown attack '" + kind + "' (expected random, uniform or capped)");
    }
    return s;
  }

  /// Strength along a sweep: flip probability, fraction of potential edges, or budget fraction.
  AttackSpec at_strength(double strength) const {
    auto s = *this;
    switch (kind) {
      case Kind::random: s.prob = strength; break;
      case Kind::uniform:
        s.fraction = strength;
        s.pairs.reset();
        break;
      case Kind::capped: s.budget.fraction_of_potential_edges = strength; break;
    }
    return s;
  }

  Graph apply(const Graph& g, std::uint64_t attack_seed) const {
    switch (kind) {
      case Kind::random: return random_flip_attack(g, prob, attack_seed);
      case Kind::uniform:
        return uniform_pair_attack(
            g, pairs ? *pairs : pairs_for_fraction(g.num_vertices(), fraction.value_or(0.0)),
            attack_seed);
      case Kind::capped:
        return budget_capped_attack(g, budget, make_strategy(strategy, budget, g.num_vertices()),
                                    attack_seed)
            .graph;
    }
    return g;
  }
};

}  // namespace gwm
