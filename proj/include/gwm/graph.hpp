#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gwm {

using Vertex = std::uint32_t;

/// Unordered vertex pair, always stored with u < v.
struct VertexPair {
  Vertex u = 0;
  Vertex v = 0;

  VertexPair() = default;
  VertexPair(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(const VertexPair& p) {
  return "(" + std::to_string(p.u) + "," + std::to_string(p.v) + ")";
}

/// Undirected simple graph over dense ids 0..n-1, stored as sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  /// Builds a graph from an arbitrary edge list. Pairs are canonicalized and
  /// duplicates dropped; self-loops and out-of-range ids throw.
  static Graph from_edges(std::size_t n, std::span<const VertexPair> edges) {
    Graph g(n);
    for (const auto& e : edges) {
      if (e.u == e.v) throw GraphError("self-loop " + to_string(e));
      if (e.v >= n) throw GraphError("vertex id out of range in " + to_string(e));
      g.adj_[e.u].push_back(e.v);
      g.adj_[e.v].push_back(e.u);
    }
    for (auto& row : g.adj_) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      g.num_edges_ += row.size();
    }
    g.num_edges_ /= 2;
    return g;
  }

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b || a >= adj_.size() || b >= adj_.size()) return false;
    const auto& row = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
    const Vertex other = adj_[a].size() <= adj_[b].size() ? b : a;
    return std::binary_search(row.begin(), row.end(), other);
  }
  bool has_edge(const VertexPair& p) const { return has_edge(p.u, p.v); }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(adj_.size());
    for (std::size_t v = 0; v < adj_.size(); ++v) d[v] = adj_[v].size();
    return d;
  }

  /// Canonical edge list sorted by (u, v).
  std::vector<VertexPair> edges() const {
    std::vector<VertexPair> out;
    out.reserve(num_edges_);
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Toggles membership of one pair. Returns true if the edge is present afterwards.
  bool toggle(const VertexPair& p) {
    check_pair(p);
    auto& ru = adj_[p.u];
    auto it = std::lower_bound(ru.begin(), ru.end(), p.v);
    if (it != ru.end() && *it == p.v) {
      ru.erase(it);
      auto& rv = adj_[p.v];
      rv.erase(std::lower_bound(rv.begin(), rv.end(), p.u));
      --num_edges_;
      return false;
    }
    ru.insert(it, p.v);
    auto& rv = adj_[p.v];
    rv.insert(std::lower_bound(rv.begin(), rv.end(), p.u), p.u);
    ++num_edges_;
    return true;
  }

  void set_edge(const VertexPair& p, bool present) {
    if (has_edge(p) != present) toggle(p);
  }

  /// Toggles every pair in the list. Pairs listed an even number of times cancel.
  /// Runs in O(|E| + k log k), which matters for attacks flipping ~10^5 pairs.
  void toggle_all(std::span<const VertexPair> pairs) {
    std::vector<std::vector<Vertex>> delta(adj_.size());
    for (const auto& p : pairs) {
      check_pair(p);
      delta[p.u].push_back(p.v);
      delta[p.v].push_back(p.u);
    }
    std::size_t total = 0;
    std::vector<Vertex> merged;
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      auto& d = delta[v];
      if (!d.empty()) {
        std::sort(d.begin(), d.end());
        // collapse repeated toggles: keep ids that occur an odd number of times
        std::size_t w = 0;
        for (std::size_t i = 0; i < d.size();) {
          std::size_t j = i;
          while (j < d.size() && d[j] == d[i]) ++j;
          if ((j - i) % 2 == 1) d[w++] = d[i];
          i = j;
        }
        d.resize(w);
        merged.clear();
        std::set_symmetric_difference(adj_[v].begin(), adj_[v].end(), d.begin(), d.end(),
                                      std::back_inserter(merged));
        adj_[v].swap(merged);
      }
      total += adj_[v].size();
    }
    num_edges_ = total / 2;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

 private:
  void check_pair(const VertexPair& p) const {
    if (p.u == p.v) throw GraphError("self-loop " + to_string(p));
    if (p.v >= adj_.size()) throw GraphError("vertex id out of range in " + to_string(p));
  }

  std::vector<std::vector<Vertex>> adj_;
  std::size_t num_edges_ = 0;
};

inline Graph build_graph(std::size_t n, std::span<const VertexPair> edges) {
  return Graph::from_edges(n, edges);
}

inline Graph build_graph(std::size_t n, std::initializer_list<VertexPair> edges) {
  return Graph::from_edges(n, std::span<const VertexPair>(edges.begin(), edges.size()));
}

/// Returns a copy of g with the membership of p toggled.
inline Graph flip_edge(Graph g, const VertexPair& p) {
  g.toggle(p);
  return g;
}

inline Graph complete_graph(std::size_t n) {
  std::vector<VertexPair> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

inline Graph path_graph(std::size_t n) {
  std::vector<VertexPair> e;
  for (Vertex u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph::from_edges(n, e);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<VertexPair> e;
  for (Vertex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e);
}

/// Number of unordered vertex pairs, C(n, 2).
constexpr std::uint64_t potential_edges(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace gwm
