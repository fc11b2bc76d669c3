#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "gwm/graph.hpp"

namespace gwm {

/// Largest vertex count accepted by the exact (all bijections) distances.
inline constexpr std::size_t kExactDistanceCap = 8;

struct IdentityDistances {
  std::size_t edit = 0;
  std::size_t vertex = 0;
  friend bool operator==(const IdentityDistances&, const IdentityDistances&) = default;
};

namespace detail {

inline void require_same_order(const Graph& g, const Graph& h) {
  if (g.num_vertices() != h.num_vertices())
    throw GraphError("graphs differ in vertex count: " + std::to_string(g.num_vertices()) +
                     " vs " + std::to_string(h.num_vertices()));
}

inline void require_exact_cap(const Graph& g, std::size_t cap) {
  if (g.num_vertices() > cap)
    throw GraphError("exact distance limited to n <= " + std::to_string(cap) + " (got n = " +
                     std::to_string(g.num_vertices()) +
                     "); use identity_distances when the correspondence is known");
}

inline std::vector<std::vector<char>> adjacency_matrix(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) m[u][v] = 1;
  return m;
}

// Per-vertex mismatch counts of g against h under correspondence u -> perm[u].
inline std::vector<std::size_t> mismatch_per_vertex(const std::vector<std::vector<char>>& g,
                                                    const std::vector<std::vector<char>>& h,
                                                    const std::vector<std::size_t>& perm) {
  const std::size_t n = g.size();
  std::vector<std::size_t> c(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (g[u][v] != h[perm[u]][perm[v]]) {
        ++c[u];
        ++c[v];
      }
  return c;
}

}  // namespace detail

/// Edge-set symmetric difference and worst per-vertex difference under the identity map.
inline IdentityDistances identity_distances(const Graph& g, const Graph& h) {
  detail::require_same_order(g, h);
  IdentityDistances d;
  std::vector<Vertex> diff;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    diff.clear();
    auto a = g.neighbors(v);
    auto b = h.neighbors(v);
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    d.edit += diff.size();
    d.vertex = std::max(d.vertex, diff.size());
  }
  d.edit /= 2;
  return d;
}

/// Graph edit distance: min over bijections of |E(g) xor E(h)|. Brute force, n <= cap.
inline std::size_t edit_distance_exact(const Graph& g, const Graph& h,
                                       std::size_t cap = kExactDistanceCap) {
  detail::require_same_order(g, h);
  detail::require_exact_cap(g, cap);
  const auto mg = detail::adjacency_matrix(g);
  const auto mh = detail::adjacency_matrix(h);
  std::vector<std::size_t> perm(g.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = potential_edges(g.num_vertices());
  do {
    auto c = detail::mismatch_per_vertex(mg, mh, perm);
    best = std::min(best, std::accumulate(c.begin(), c.end(), std::size_t{0}) / 2);
    if (best == 0) break;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Vertex distance: min over bijections of the max per-vertex incident-edge difference.
inline std::size_t vertex_distance_exact(const Graph& g, const Graph& h,
                                         std::size_t cap = kExactDistanceCap) {
  detail::require_same_order(g, h);
  detail::require_exact_cap(g, cap);
  const auto mg = detail::adjacency_matrix(g);
  const auto mh = detail::adjacency_matrix(h);
  std::vector<std::size_t> perm(g.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = g.num_vertices();
  do {
    auto c = detail::mismatch_per_vertex(mg, mh, perm);
    best = std::min(best, c.empty() ? std::size_t{0} : *std::max_element(c.begin(), c.end()));
    if (best == 0) break;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace gwm
