#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "gwm/bit_vector.hpp"
#include "gwm/graph.hpp"
#include "gwm/key_values.hpp"
#include "gwm/random_models.hpp"

namespace gwm {

class ThresholdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sizes of the high- and medium-degree classes plus the separation targets.
struct SeparationThresholds {
  std::size_t high = 1;
  /// Number of medium-degree vertices; empty means every non-high vertex.
  std::optional<std::size_t> medium;
  double degree_gap = 3.0;         // d
  double neighborhood_gap = 1.0;   // d'
  // Constants the thresholds were derived from (0 when not applicable).
  double epsilon1 = 0.0, c1 = 0.0, epsilon2 = 0.0, c2 = 0.0;
  double gamma_exponent = 0.0;     // Gamma of the medium threshold
  double high_real = 0.0;          // h_m (power-law) or n^((1-eps)/8) (G(n,p))
  double medium_limit_real = 0.0;  // m_l, power-law only
  std::vector<std::string> warnings;

  std::size_t medium_count(std::size_t n) const {
    const std::size_t rest = n > high ? n - high : 0;
    return medium ? std::min(*medium, rest) : rest;
  }

  /// Explicit class sizes, as used by experiments tuned on real data.
  SeparationThresholds with_counts(std::size_t high_count,
                                   std::optional<std::size_t> medium_count) const {
    if (high_count == 0) throw ThresholdError("at least one high-degree vertex is required");
    auto t = *this;
    t.high = high_count;
    t.medium = medium_count;
    return t;
  }

  KeyValues to_key_values() const {
    KeyValues kv;
    kv.set("high", high);
    kv.set("medium", medium ? std::to_string(*medium) : std::string("all"));
    kv.set("d", degree_gap);
    kv.set("d_prime", neighborhood_gap);
    kv.set("h_real", high_real);
    if (medium_limit_real > 0.0) kv.set("ml_real", medium_limit_real);
    if (gamma_exponent != 0.0) kv.set("Gamma", gamma_exponent);
    return kv;
  }
};

inline SeparationThresholds explicit_thresholds(std::size_t high,
                                                std::optional<std::size_t> medium) {
  return SeparationThresholds{}.with_counts(high, medium);
}

/// High-degree count for G(n, p): h = floor(n^((1-eps)/8)), d = 3, d' = C log n.
inline SeparationThresholds er_thresholds(std::size_t n, double p, double epsilon,
                                          double d = 3.0, double c = 3.0) {
  if (!(epsilon > 0.0 && epsilon < 1.0 / 9.0))
    throw ThresholdError("G(n,p) thresholds need 0 < epsilon < 1/9");
  if (!(p > 0.0 && p <= 0.5)) throw ThresholdError("G(n,p) thresholds need 0 < p <= 1/2");
  if (d < 3.0 || c < 3.0) throw ThresholdError("G(n,p) thresholds need d >= 3 and C >= 3");
  SeparationThresholds t;
  t.epsilon1 = epsilon;
  t.high_real = std::pow(static_cast<double>(n), (1.0 - epsilon) / 8.0);
  t.high = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(t.high_real)));
  t.degree_gap = d;
  t.neighborhood_gap = c * std::log(static_cast<double>(n));
  return t;
}

/// Gamma = -(2 gamma^2 - 8 gamma + 5) / (2 gamma - 1), the growth exponent of m_l.
inline double medium_growth_exponent(double gamma) {
  return -(2.0 * gamma * gamma - 8.0 * gamma + 5.0) / (2.0 * gamma - 1.0);
}

/// K1(eps1, C1) of the high-degree threshold.
inline double high_threshold_constant(double gamma, double avg_degree, double epsilon1,
                                      double c1) {
  return std::pow((gamma - 2.0) / std::pow(gamma - 1.0, 3.0) * avg_degree * epsilon1 * epsilon1 /
                      (16.0 * c1),
                  (gamma - 1.0) / (2.0 * gamma - 1.0));
}

/// h_m = K1 n^(1/(2 gamma - 1)) (log n)^(-(gamma-1)/(2 gamma - 1)).
inline double high_index_threshold(const PowerLawParams& p, double epsilon1, double c1) {
  const double n = static_cast<double>(p.n);
  const double g = p.gamma;
  return high_threshold_constant(g, p.avg_degree, epsilon1, c1) * std::pow(n, 1.0 / (2.0 * g - 1.0)) *
         std::pow(std::log(n), -(g - 1.0) / (2.0 * g - 1.0));
}

/// log(K0^(gamma-1) K1^(gamma-2)), which the medium threshold assumes positive.
inline double medium_log_term(const PowerLawParams& p, double epsilon1, double c1) {
  const double g = p.gamma;
  return (g - 1.0) * std::log(p.k0) +
         (g - 2.0) * std::log(high_threshold_constant(g, p.avg_degree, epsilon1, c1));
}

/// m_l = K2 n^Gamma (log n)^(-3 (gamma-1)^2 / (2 gamma - 1)).
inline double medium_index_threshold(const PowerLawParams& p, double epsilon1, double c1,
                                     double epsilon2, double c2) {
  const double n = static_cast<double>(p.n);
  const double g = p.gamma;
  const double big_gamma = medium_growth_exponent(g);
  const double log_a = medium_log_term(p, epsilon1, c1);
  const double base = c2 + 2.0 * big_gamma + 2.0 * log_a + 2.0 * epsilon2;
  if (base <= 0.0)
    throw ThresholdError("medium threshold undefined: C2 + 2 Gamma + 2 log(K0^(g-1) K1^(g-2)) + "
                         "2 eps2 <= 0");
  const double k2 = std::exp(log_a) / std::pow(base, g - 1.0);
  return k2 * std::pow(n, big_gamma) *
         std::pow(std::log(n), -3.0 * (g - 1.0) * (g - 1.0) / (2.0 * g - 1.0));
}

/// Analytic class boundaries for the power-law model. Both are index thresholds;
/// h = floor(h_m), medium indices are (h, m_l].
inline SeparationThresholds plg_thresholds(const PowerLawParams& p, double epsilon1 = 1.0,
                                           double c1 = 1.0, double epsilon2 = 1.0,
                                           double c2 = 1.0) {
  if (!(p.gamma > 2.5 && p.gamma < 3.0))
    throw ThresholdError("power-law thresholds need 5/2 < gamma < 3");
  if (!(epsilon1 > 0.0 && epsilon1 <= 1.0)) throw ThresholdError("epsilon1 must lie in (0, 1]");
  if (c1 <= 0.0 || c2 <= 0.0 || epsilon2 <= 0.0)
    throw ThresholdError("C1, C2 and epsilon2 must be positive");
  SeparationThresholds t;
  t.epsilon1 = epsilon1;
  t.c1 = c1;
  t.epsilon2 = epsilon2;
  t.c2 = c2;
  t.gamma_exponent = medium_growth_exponent(p.gamma);
  t.high_real = high_index_threshold(p, epsilon1, c1);
  t.medium_limit_real = medium_index_threshold(p, epsilon1, c1, epsilon2, c2);
  if (medium_log_term(p, epsilon1, c1) < 0.0)
    t.warnings.push_back("log(K0^(gamma-1) K1^(gamma-2)) < 0; medium threshold assumes large n");
  if (t.high_real <= p.i0)
    throw ThresholdError("infeasible thresholds: h_m = " + std::to_string(t.high_real) +
                         " <= i0 = " + std::to_string(p.i0));
  if (t.high_real >= t.medium_limit_real)
    throw ThresholdError("infeasible thresholds: h_m = " + std::to_string(t.high_real) +
                         " >= m_l = " + std::to_string(t.medium_limit_real));
  const double n = static_cast<double>(p.n);
  t.high = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(t.high_real)));
  const auto ml = static_cast<std::size_t>(std::min(std::floor(t.medium_limit_real), n));
  t.medium = ml > t.high ? ml - t.high : 0;
  t.degree_gap = epsilon2 * std::pow(n, 1.0 / (2.0 * p.gamma - 1.0));
  t.neighborhood_gap = epsilon2 * std::log(n);
  return t;
}

/// Lower and upper bounds on delta_i = |w_{i+1} - w_i| / 2.
struct DeltaBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline DeltaBounds delta_bounds(const PowerLawParams& p, double i) {
  const double scale = p.c / (2.0 * (p.gamma - 1.0));
  const double e = -p.gamma / (p.gamma - 1.0);
  return {scale * std::pow(i + 1.0, e), scale * std::pow(i, e)};
}

inline double delta(const PowerLawParams& p, double i) {
  return std::abs(p.weight(i + 1.0) - p.weight(i)) / 2.0;
}

// ---------------------------------------------------------------------------
// Labeling

enum class LabelMode { strict, relaxed };

enum class LabelFailure { none, high_degree_collision, bit_vector_collision };

inline const char* to_string(LabelFailure f) {
  switch (f) {
    case LabelFailure::none: return "none";
    case LabelFailure::high_degree_collision: return "high-degree collision";
    case LabelFailure::bit_vector_collision: return "bit-vector collision";
  }
  return "?";
}

struct HighLabel {
  Vertex vertex = 0;
  std::size_t rank = 0;
  std::size_t degree = 0;
  /// Degrees of the neighbours in decreasing order (relaxed mode only).
  std::vector<std::size_t> neighbor_degrees;
};

struct MediumLabel {
  Vertex vertex = 0;
  std::size_t degree = 0;
  std::size_t degree_rank = 0;  // position in the degree ordering
  BitVector bits;               // bit r: adjacent to the high vertex of rank r
};

struct LabelSet {
  LabelMode mode = LabelMode::strict;
  std::vector<HighLabel> high;      // by rank
  std::vector<MediumLabel> medium;  // lexicographic by bit vector

  std::size_t size() const { return high.size() + medium.size(); }

  /// Labeled vertices in canonical order: high by rank, then medium.
  std::vector<Vertex> ordered() const {
    std::vector<Vertex> v;
    v.reserve(size());
    for (const auto& h : high) v.push_back(h.vertex);
    for (const auto& m : medium) v.push_back(m.vertex);
    return v;
  }

  /// Position in the degree ordering of each labeled vertex, canonical order.
  std::vector<std::size_t> degree_ranks() const {
    std::vector<std::size_t> r;
    r.reserve(size());
    for (const auto& h : high) r.push_back(h.rank);
    for (const auto& m : medium) r.push_back(m.degree_rank);
    return r;
  }
};

struct LabelResult {
  std::optional<LabelSet> labels;
  LabelFailure failure = LabelFailure::none;
  std::string detail;

  explicit operator bool() const { return labels.has_value(); }
};

namespace detail {

inline std::vector<std::size_t> neighbor_degree_list(const Graph& g, Vertex v) {
  std::vector<std::size_t> d;
  d.reserve(g.degree(v));
  for (Vertex u : g.neighbors(v)) d.push_back(g.degree(u));
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

/// Vertices by decreasing degree, ties by id.
inline std::vector<Vertex> degree_order(const Graph& g) {
  std::vector<Vertex> order(g.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
  return order;
}

inline void check_threshold_size(const Graph& g, const SeparationThresholds& t) {
  if (t.high == 0) throw ThresholdError("at least one high-degree vertex is required");
  if (t.high > g.num_vertices())
    throw ThresholdError("high-degree count " + std::to_string(t.high) + " exceeds n = " +
                         std::to_string(g.num_vertices()));
}

/// Bit vectors of `members` against the ordered `high` vertices.
inline std::vector<BitVector> adjacency_bits(const Graph& g, std::span<const Vertex> high,
                                             std::span<const Vertex> members) {
  std::vector<std::int64_t> slot(g.num_vertices(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) slot[members[i]] = static_cast<std::int64_t>(i);
  std::vector<BitVector> bits(members.size(), BitVector(high.size()));
  for (std::size_t r = 0; r < high.size(); ++r)
    for (Vertex u : g.neighbors(high[r]))
      if (slot[u] >= 0) bits[static_cast<std::size_t>(slot[u])].set(r);
  return bits;
}

}  // namespace detail

/// Vertices of g in the order used for class membership: decreasing degree,
/// and in relaxed mode the top group is further ordered by neighbour-degree lists.
inline std::vector<Vertex> class_order(const Graph& g, std::size_t high, LabelMode mode) {
  auto order = detail::degree_order(g);
  if (mode == LabelMode::relaxed && high > 0 && high <= order.size()) {
    const auto cutoff = g.degree(order[high - 1]);
    std::size_t prefix = high;
    while (prefix < order.size() && g.degree(order[prefix]) == cutoff) ++prefix;
    std::vector<std::pair<std::vector<std::size_t>, Vertex>> keyed;
    keyed.reserve(prefix);
    for (std::size_t i = 0; i < prefix; ++i)
      keyed.emplace_back(detail::neighbor_degree_list(g, order[i]), order[i]);
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      const auto da = g.degree(a.second), db = g.degree(b.second);
      if (da != db) return da > db;
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < prefix; ++i) order[i] = keyed[i].second;
  }
  return order;
}

/// Labels the high- and medium-degree vertices of g. Strict mode fails on
/// repeated high degrees (including a tie at the class boundary) or repeated
/// bit vectors; relaxed mode orders ties deterministically and never fails.
inline LabelResult label(const Graph& g, const SeparationThresholds& t, LabelMode mode) {
  detail::check_threshold_size(g, t);
  const std::size_t h = t.high;
  const std::size_t m = t.medium_count(g.num_vertices());
  const auto order = class_order(g, h, mode);

  LabelResult result;
  if (mode == LabelMode::strict) {
    for (std::size_t i = 0; i < h; ++i) {
      if (i + 1 < order.size() && g.degree(order[i]) == g.degree(order[i + 1])) {
        result.failure = LabelFailure::high_degree_collision;
        result.detail = "vertices " + std::to_string(order[i]) + " and " +
                        std::to_string(order[i + 1]) + " share degree " +
                        std::to_string(g.degree(order[i]));
        return result;
      }
    }
  }

  LabelSet set;
  set.mode = mode;
  set.high.reserve(h);
  for (std::size_t r = 0; r < h; ++r) {
    HighLabel hl;
    hl.vertex = order[r];
    hl.rank = r;
    hl.degree = g.degree(order[r]);
    if (mode == LabelMode::relaxed) hl.neighbor_degrees = detail::neighbor_degree_list(g, order[r]);
    set.high.push_back(std::move(hl));
  }

  std::span<const Vertex> high_vertices(order.data(), h);
  std::span<const Vertex> medium_vertices(order.data() + h, m);
  auto bits = detail::adjacency_bits(g, high_vertices, medium_vertices);
  set.medium.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    set.medium.push_back(
        MediumLabel{medium_vertices[i], g.degree(medium_vertices[i]), h + i, std::move(bits[i])});
  std::sort(set.medium.begin(), set.medium.end(), [](const MediumLabel& a, const MediumLabel& b) {
    if (auto c = a.bits <=> b.bits; c != 0) return c < 0;
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.vertex < b.vertex;
  });
  if (mode == LabelMode::strict) {
    for (std::size_t i = 1; i < set.medium.size(); ++i) {
      if (set.medium[i].bits == set.medium[i - 1].bits) {
        result.failure = LabelFailure::bit_vector_collision;
        result.detail = "vertices " + std::to_string(set.medium[i - 1].vertex) + " and " +
                        std::to_string(set.medium[i].vertex) + " share bit vector " +
                        set.medium[i].bits.to_string();
        return result;
      }
    }
  }
  result.labels = std::move(set);
  return result;
}

/// Largest number of medium vertices, taken in degree order after the top `high`,
/// whose high-adjacency bit vectors are pairwise distinct.
inline std::size_t max_collision_free_medium(const Graph& g, std::size_t high,
                                             LabelMode mode = LabelMode::relaxed) {
  if (high == 0 || high > g.num_vertices()) throw ThresholdError("invalid high-degree count");
  const auto order = class_order(g, high, mode);
  std::span<const Vertex> hv(order.data(), high);
  std::span<const Vertex> rest(order.data() + high, order.size() - high);
  const auto bits = detail::adjacency_bits(g, hv, rest);
  std::unordered_set<BitVector, BitVectorHash> seen;
  std::size_t count = 0;
  for (const auto& b : bits) {
    if (!seen.insert(b).second) break;
    ++count;
  }
  return count;
}

/// Number of leading vertices (by decreasing degree) whose degree is unique.
inline std::size_t unique_degree_prefix(const Graph& g) {
  const auto order = detail::degree_order(g);
  std::size_t i = 0;
  while (i < order.size()) {
    const bool tie_next = i + 1 < order.size() && g.degree(order[i]) == g.degree(order[i + 1]);
    if (tie_next) break;
    ++i;
  }
  return i;
}

/// |{k in high_set : exactly one of (u,k), (v,k) is an edge}|.
inline std::size_t neighborhood_distance(const Graph& g, Vertex u, Vertex v,
                                         std::span<const Vertex> high_set) {
  if (u == v) throw GraphError("neighborhood distance needs two distinct vertices");
  std::size_t d = 0;
  for (Vertex k : high_set)
    if (g.has_edge(u, k) != g.has_edge(v, k)) ++d;
  return d;
}

struct SeparationReport {
  bool separated = false;
  std::size_t min_degree_gap = std::numeric_limits<std::size_t>::max();
  std::pair<Vertex, Vertex> degree_witness{0, 0};
  std::size_t min_neighborhood_distance = std::numeric_limits<std::size_t>::max();
  std::pair<Vertex, Vertex> neighborhood_witness{0, 0};

  KeyValues to_key_values() const {
    KeyValues kv;
    auto fmt = [](std::size_t x) {
      return x == std::numeric_limits<std::size_t>::max() ? std::string("inf") : std::to_string(x);
    };
    kv.set("separated", std::string(separated ? "true" : "false"));
    kv.set("min_degree_gap", fmt(min_degree_gap));
    kv.set("degree_witness",
           std::to_string(degree_witness.first) + "," + std::to_string(degree_witness.second));
    kv.set("min_neighborhood_distance", fmt(min_neighborhood_distance));
    kv.set("neighborhood_witness", std::to_string(neighborhood_witness.first) + "," +
                                       std::to_string(neighborhood_witness.second));
    return kv;
  }
};

/// (d, d')-separation: each high vertex is at least d above the next vertex in
/// degree order, and medium vertices are pairwise at neighbourhood distance >= d'.
inline SeparationReport check_separation(const Graph& g, const SeparationThresholds& t, double d,
                                         double d_prime) {
  detail::check_threshold_size(g, t);
  const std::size_t h = t.high;
  const std::size_t m = t.medium_count(g.num_vertices());
  const auto order = detail::degree_order(g);
  SeparationReport rep;
  for (std::size_t i = 0; i < h && i + 1 < order.size(); ++i) {
    const auto gap = g.degree(order[i]) - g.degree(order[i + 1]);
    if (gap < rep.min_degree_gap) {
      rep.min_degree_gap = gap;
      rep.degree_witness = {order[i], order[i + 1]};
    }
  }
  std::span<const Vertex> hv(order.data(), h);
  std::span<const Vertex> mv(order.data() + h, m);
  const auto bits = detail::adjacency_bits(g, hv, mv);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto dist = hamming(bits[a], bits[b]);
      if (dist < rep.min_neighborhood_distance) {
        rep.min_neighborhood_distance = dist;
        rep.neighborhood_witness = {mv[a], mv[b]};
      }
    }
  const bool high_ok = rep.min_degree_gap == std::numeric_limits<std::size_t>::max() ||
                       static_cast<double>(rep.min_degree_gap) >= d;
  const bool medium_ok = rep.min_neighborhood_distance == std::numeric_limits<std::size_t>::max() ||
                         static_cast<double>(rep.min_neighborhood_distance) >= d_prime;
  rep.separated = high_ok && medium_ok;
  return rep;
}

}  // namespace gwm
