#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gwm/bit_vector.hpp"
#include "gwm/graph.hpp"
#include "gwm/random_models.hpp"
#include "gwm/rng.hpp"
#include "gwm/separation.hpp"

namespace gwm {

class WatermarkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by keygen when no key satisfying (l, x, t) can be drawn.
class InfeasibleKeyError : public WatermarkError {
 public:
  using WatermarkError::WatermarkError;
};

using WatermarkId = BitVector;

/// Pair of 1-based positions into the canonical label order, u < v.
struct RankPair {
  std::size_t u = 0;
  std::size_t v = 0;
  friend auto operator<=>(const RankPair&, const RankPair&) = default;
};

struct MarkKey {
  std::size_t ell = 0;
  std::size_t n = 0;
  std::size_t t = 1;
  std::vector<RankPair> pairs;

  /// Checks the key invariants: l distinct pairs with 1 <= u < v, no rank in
  /// more than t pairs, and every rank at most `x` when x > 0.
  void validate(std::size_t x = 0) const {
    if (pairs.size() != ell)
      throw WatermarkError("key holds " + std::to_string(pairs.size()) + " pairs, expected " +
                           std::to_string(ell));
    std::set<RankPair> seen;
    std::vector<std::size_t> use;
    for (const auto& p : pairs) {
      if (p.u < 1 || p.u >= p.v) throw WatermarkError("key pair ranks must satisfy 1 <= u < v");
      if (x > 0 && p.v > x)
        throw WatermarkError("key rank " + std::to_string(p.v) + " exceeds labeled vertex count " +
                             std::to_string(x));
      if (!seen.insert(p).second) throw WatermarkError("duplicate key pair");
      if (use.size() <= p.v) use.resize(p.v + 1, 0);
      if (++use[p.u] > t || ++use[p.v] > t)
        throw WatermarkError("a key rank appears in more than t = " + std::to_string(t) + " pairs");
    }
  }

  std::size_t max_rank() const {
    std::size_t r = 0;
    for (const auto& p : pairs) r = std::max(r, p.v);
    return r;
  }
};

/// Samples l distinct rank pairs over {1..x} with every rank used at most t times.
/// Pairs are drawn uniformly among ranks that still have capacity; repeated pairs
/// are rejected. Each attempt gets a budget of 100*l draws, with up to 10 restarts.
inline MarkKey keygen(std::size_t ell, std::size_t n, std::size_t x, std::size_t t,
                      std::uint64_t seed) {
  if (x < 2) throw InfeasibleKeyError("keygen needs at least two labeled vertices");
  if (t == 0) throw InfeasibleKeyError("keygen needs t >= 1");
  if (ell > x * t / 2 || ell > potential_edges(x))
    throw InfeasibleKeyError("no key of length " + std::to_string(ell) + " exists over " +
                             std::to_string(x) + " ranks with cap t = " + std::to_string(t));
  Rng rng(seed);
  constexpr int kRestarts = 10;
  for (int attempt = 0; attempt <= kRestarts; ++attempt) {
    MarkKey key{ell, n, t, {}};
    key.pairs.reserve(ell);
    std::vector<std::size_t> pool(x);
    for (std::size_t i = 0; i < x; ++i) pool[i] = i + 1;
    std::vector<std::size_t> use(x + 1, 0);
    std::set<RankPair> taken;
    std::size_t budget = 100 * std::max<std::size_t>(ell, 1);
    while (key.pairs.size() < ell && budget > 0 && pool.size() >= 2) {
      --budget;
      const auto i = rng.below(pool.size());
      auto j = rng.below(pool.size() - 1);
      if (j >= i) ++j;
      RankPair p{std::min(pool[i], pool[j]), std::max(pool[i], pool[j])};
      if (taken.count(p)) continue;
      taken.insert(p);
      key.pairs.push_back(p);
      // retire exhausted ranks, larger pool index first so the other stays valid
      for (auto idx : {std::max(i, j), std::min(i, j)}) {
        if (++use[pool[idx]] == t) {
          pool[idx] = pool.back();
          pool.pop_back();
        }
      }
    }
    if (key.pairs.size() == ell) return key;
  }
  throw InfeasibleKeyError("keygen exhausted its retry budget for l = " + std::to_string(ell) +
                           ", x = " + std::to_string(x) + ", t = " + std::to_string(t));
}

inline void write_key(const MarkKey& key, std::ostream& out) {
  out << key.ell << ' ' << key.n << ' ' << key.t << '\n';
  for (const auto& p : key.pairs) out << p.u << ' ' << p.v << '\n';
}

inline MarkKey read_key(std::istream& in) {
  MarkKey key;
  if (!(in >> key.ell >> key.n >> key.t)) throw WatermarkError("key file: bad header");
  key.pairs.resize(key.ell);
  for (auto& p : key.pairs)
    if (!(in >> p.u >> p.v)) throw WatermarkError("key file: truncated pair list");
  key.validate();
  return key;
}

inline void write_id(const WatermarkId& id, std::ostream& out) { out << id.to_string() << '\n'; }

inline WatermarkId read_id(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) return BitVector::from_string(line);
  }
  throw WatermarkError("id file: no bit string found");
}

/// Source of the per-bit resampling probability p_{z[j]}.
struct ResampleSource {
  enum class Kind { constant, erdos_renyi, power_law };
  Kind kind = Kind::constant;
  double p = 0.5;
  std::optional<PowerLawParams> power_law_params;

  static ResampleSource constant(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw WatermarkError("resampling probability outside [0, 1]");
    return {Kind::constant, p, std::nullopt};
  }
  static ResampleSource erdos_renyi(const ErdosRenyiParams& params) {
    return {Kind::erdos_renyi, params.p, std::nullopt};
  }
  /// Model probability with labeled vertices mapped to model indices by degree rank.
  static ResampleSource power_law(const PowerLawParams& params) {
    return {Kind::power_law, 0.0, params};
  }

  double probability(std::size_t degree_rank_u, std::size_t degree_rank_v) const {
    if (kind == Kind::power_law)
      return vertex_pair_probability(*power_law_params, degree_rank_u, degree_rank_v);
    return p;
  }
};

struct MarkedCopy {
  WatermarkId id;
  Graph graph;
};

namespace detail {

inline void check_key_against_labels(const MarkKey& key, const LabelSet& labels) {
  if (key.max_rank() > labels.size())
    throw WatermarkError("key rank " + std::to_string(key.max_rank()) + " exceeds the " +
                         std::to_string(labels.size()) + " labeled vertices");
}

}  // namespace detail

/// Embeds a given id: key pair j becomes an edge iff bit j is set.
inline MarkedCopy mark_with_id(const MarkKey& key, const Graph& g, const LabelSet& labels,
                               const WatermarkId& id) {
  detail::check_key_against_labels(key, labels);
  if (id.size() != key.pairs.size()) throw WatermarkError("id length differs from key length");
  const auto v = labels.ordered();
  MarkedCopy out{id, g};
  for (std::size_t j = 0; j < key.pairs.size(); ++j) {
    const auto& p = key.pairs[j];
    out.graph.set_edge(VertexPair(v[p.u - 1], v[p.v - 1]), id.test(j));
  }
  return out;
}

/// Draws a fresh id (bit j set with the source's probability for pair j) and embeds it.
inline MarkedCopy mark(const MarkKey& key, const Graph& g, const LabelSet& labels,
                       const ResampleSource& source, std::uint64_t seed) {
  detail::check_key_against_labels(key, labels);
  const auto ranks = labels.degree_ranks();
  Rng rng(seed);
  WatermarkId id(key.pairs.size());
  for (std::size_t j = 0; j < key.pairs.size(); ++j) {
    const auto& p = key.pairs[j];
    id.set(j, rng.bernoulli(source.probability(ranks[p.u - 1], ranks[p.v - 1])));
  }
  return mark_with_id(key, g, labels, id);
}

/// Labels g first; throws if labeling fails.
inline MarkedCopy mark(const MarkKey& key, const Graph& g, const SeparationThresholds& t,
                       LabelMode mode, const ResampleSource& source, std::uint64_t seed) {
  auto lr = label(g, t, mode);
  if (!lr) throw WatermarkError(std::string("labeling failed: ") + to_string(lr.failure));
  return mark(key, g, *lr.labels, source, seed);
}

// ---------------------------------------------------------------------------
// Approximate isomorphism

/// Partial map from the canonical labeled vertices of G into H.
struct VertexCorrespondence {
  std::vector<Vertex> source;                // canonical order V of G
  std::vector<std::optional<Vertex>> image;  // V' in H, same order
};

struct MatchResult {
  std::optional<VertexCorrespondence> mapping;
  std::string failure;
  explicit operator bool() const { return mapping.has_value(); }
};

/// Distance between second-order labels: degree difference plus the L1 distance of
/// the decreasing neighbour-degree lists, padded with zeros.
inline std::size_t second_order_distance(const HighLabel& a, const HighLabel& b) {
  const auto diff = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
  std::size_t d = diff(a.degree, b.degree);
  const std::size_t len = std::max(a.neighbor_degrees.size(), b.neighbor_degrees.size());
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t x = i < a.neighbor_degrees.size() ? a.neighbor_degrees[i] : 0;
    const std::size_t y = i < b.neighbor_degrees.size() ? b.neighbor_degrees[i] : 0;
    d += diff(x, y);
  }
  return d;
}

namespace detail {

// Greedy assignment by ascending cost; ties by (row, column). Each row and column used once.
inline std::vector<std::optional<std::size_t>> greedy_assign(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& cost_row_col) {
  std::sort(cost_row_col.begin(), cost_row_col.end());
  std::vector<std::optional<std::size_t>> assigned(rows);
  std::vector<char> col_used(cols, 0);
  std::size_t remaining = std::min(rows, cols);
  for (const auto& [c, r, k] : cost_row_col) {
    if (remaining == 0) break;
    if (assigned[r] || col_used[k]) continue;
    assigned[r] = k;
    col_used[k] = 1;
    --remaining;
  }
  return assigned;
}

}  // namespace detail

/// Maps the labeled vertices of G (given its labels) into H.
inline MatchResult approximate_isomorphism(const LabelSet& g_labels, const Graph& h,
                                           const SeparationThresholds& t, LabelMode mode) {
  MatchResult result;
  if (h.num_vertices() < t.high) {
    result.failure = "suspect graph has fewer vertices than the high-degree class";
    return result;
  }
  auto hl = label(h, t, mode);
  if (!hl) {
    result.failure = std::string("labeling the suspect failed: ") + to_string(hl.failure);
    return result;
  }
  const LabelSet& hs = *hl.labels;
  const std::size_t nh = g_labels.high.size();
  const std::size_t nm = g_labels.medium.size();

  VertexCorrespondence map;
  map.source = g_labels.ordered();
  map.image.assign(map.source.size(), std::nullopt);

  // High-degree vertices.
  std::vector<Vertex> matched_high(nh);
  if (mode == LabelMode::strict) {
    for (std::size_t r = 0; r < nh; ++r) matched_high[r] = hs.high[r].vertex;
  } else {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> costs;
    costs.reserve(nh * hs.high.size());
    for (std::size_t r = 0; r < nh; ++r)
      for (std::size_t k = 0; k < hs.high.size(); ++k)
        costs.emplace_back(second_order_distance(g_labels.high[r], hs.high[k]), r, k);
    auto assigned = detail::greedy_assign(nh, hs.high.size(), costs);
    for (std::size_t r = 0; r < nh; ++r) matched_high[r] = hs.high[*assigned[r]].vertex;
  }
  for (std::size_t r = 0; r < nh; ++r) map.image[r] = matched_high[r];

  // Medium-degree vertices, with H's bit vectors taken against the matched high vertices.
  std::vector<Vertex> h_medium;
  h_medium.reserve(hs.medium.size());
  for (const auto& m : hs.medium) h_medium.push_back(m.vertex);
  const auto h_bits = detail::adjacency_bits(h, matched_high, h_medium);

  if (mode == LabelMode::strict) {
    std::vector<char> used(h_medium.size(), 0);
    for (std::size_t i = 0; i < nm; ++i) {
      std::size_t best = std::numeric_limits<std::size_t>::max();
      std::size_t arg = 0;
      for (std::size_t k = 0; k < h_medium.size(); ++k) {
        const auto d = hamming(g_labels.medium[i].bits, h_bits[k]);
        if (d < best) {
          best = d;
          arg = k;
        }
      }
      if (h_medium.empty()) break;
      if (used[arg]) {
        result.failure = "suspect vertex " + std::to_string(h_medium[arg]) + " matched twice";
        return result;
      }
      used[arg] = 1;
      map.image[nh + i] = h_medium[arg];
    }
  } else {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> costs;
    costs.reserve(nm * h_medium.size());
    for (std::size_t i = 0; i < nm; ++i)
      for (std::size_t k = 0; k < h_medium.size(); ++k)
        costs.emplace_back(hamming(g_labels.medium[i].bits, h_bits[k]), i, k);
    auto assigned = detail::greedy_assign(nm, h_medium.size(), costs);
    for (std::size_t i = 0; i < nm; ++i)
      if (assigned[i]) map.image[nh + i] = h_medium[*assigned[i]];
  }
  result.mapping = std::move(map);
  return result;
}

inline MatchResult approximate_isomorphism(const Graph& g, const Graph& h,
                                           const SeparationThresholds& t, LabelMode mode) {
  auto gl = label(g, t, mode);
  if (!gl) {
    MatchResult r;
    r.failure = std::string("labeling the original failed: ") + to_string(gl.failure);
    return r;
  }
  return approximate_isomorphism(*gl.labels, h, t, mode);
}

// ---------------------------------------------------------------------------
// Identification

struct IdentifyOptions {
  /// Return no match when the closest id is farther than this.
  std::optional<std::size_t> max_distance;
};

struct IdentifyResult {
  std::optional<std::size_t> index;  // position in the candidate list; empty = failure
  WatermarkId extracted;
  std::size_t distance = 0;
  std::string failure;

  bool failed() const { return !index.has_value(); }
};

/// Bits read from `suspect` at the mapped key positions; unmapped endpoints read as 0.
inline WatermarkId extract_bits(const MarkKey& key, const VertexCorrespondence& map,
                                const Graph& suspect) {
  WatermarkId bits(key.pairs.size());
  for (std::size_t j = 0; j < key.pairs.size(); ++j) {
    const auto& p = key.pairs[j];
    if (p.v > map.image.size()) throw WatermarkError("key rank exceeds labeled vertex count");
    const auto a = map.image[p.u - 1];
    const auto b = map.image[p.v - 1];
    if (a && b && *a != *b) bits.set(j, suspect.has_edge(*a, *b));
  }
  return bits;
}

/// Index of the closest id by Hamming distance, lowest index on ties.
inline std::pair<std::size_t, std::size_t> closest_id(const std::vector<WatermarkId>& ids,
                                                      const WatermarkId& bits) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto d = hamming(ids[i], bits);
    if (d < best) {
      best = d;
      arg = i;
    }
  }
  return {arg, best};
}

inline IdentifyResult identify(const MarkKey& key, const LabelSet& g_labels,
                               const std::vector<WatermarkId>& ids, const Graph& suspect,
                               const SeparationThresholds& t, LabelMode mode,
                               std::size_t original_order, const IdentifyOptions& opts = {}) {
  if (ids.empty()) throw WatermarkError("identify needs at least one candidate id");
  for (const auto& id : ids)
    if (id.size() != key.pairs.size())
      throw WatermarkError("candidate id length differs from key length");
  IdentifyResult r;
  r.extracted = WatermarkId(key.pairs.size());
  if (suspect.num_vertices() != original_order) {
    r.failure = "suspect vertex count differs from the original";
    return r;
  }
  if (key.max_rank() > g_labels.size()) {
    r.failure = "key rank exceeds labeled vertex count";
    return r;
  }
  auto match = approximate_isomorphism(g_labels, suspect, t, mode);
  if (!match) {
    r.failure = match.failure;
    return r;
  }
  r.extracted = extract_bits(key, *match.mapping, suspect);
  auto [arg, dist] = closest_id(ids, r.extracted);
  r.distance = dist;
  if (opts.max_distance && dist > *opts.max_distance) {
    r.failure = "closest id is farther than the cutoff";
    return r;
  }
  r.index = arg;
  return r;
}

/// identify(z, G, id_1..id_k, H): labels G, maps it into H, reads the key bits and
/// returns the closest candidate. Failure (no index) on any labeling or matching failure.
inline IdentifyResult identify(const MarkKey& key, const Graph& g,
                               const std::vector<WatermarkId>& ids, const Graph& suspect,
                               const SeparationThresholds& t, LabelMode mode,
                               const IdentifyOptions& opts = {}) {
  if (ids.empty()) throw WatermarkError("identify needs at least one candidate id");
  auto gl = label(g, t, mode);
  if (!gl) {
    IdentifyResult r;
    r.extracted = WatermarkId(key.pairs.size());
    r.failure = std::string("labeling the original failed: ") + to_string(gl.failure);
    return r;
  }
  return identify(key, *gl.labels, ids, suspect, t, mode, g.num_vertices(), opts);
}

}  // namespace gwm
