#pragma once

// Reference implementations written independently of the library, used as
// test oracles. They work on plain edge sets and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "gwm/graph.hpp"

namespace oracle {

using EdgeSet = std::set<std::pair<int, int>>;

inline EdgeSet edge_set(const gwm::Graph& g) {
  EdgeSet s;
  for (const auto& e : g.edges()) s.emplace(static_cast<int>(e.u), static_cast<int>(e.v));
  return s;
}

inline std::pair<int, int> canon(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

inline EdgeSet permute(const EdgeSet& e, const std::vector<int>& pi) {
  EdgeSet out;
  for (auto [a, b] : e) out.insert(canon(pi[a], pi[b]));
  return out;
}

// Heap's algorithm, calling visit(pi) for every permutation of 0..n-1.
template <typename Visit>
void heap_permutations(int n, Visit&& visit) {
  std::vector<int> a(n);
  std::iota(a.begin(), a.end(), 0);
  std::vector<int> c(n, 0);
  visit(a);
  int i = 0;
  while (i < n) {
    if (c[i] < i) {
      if (i % 2 == 0)
        std::swap(a[0], a[i]);
      else
        std::swap(a[c[i]], a[i]);
      visit(a);
      ++c[i];
      i = 0;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

struct Distances {
  std::size_t edit;
  std::size_t vertex;
};

// min over pi of |E(g) xor pi(E(h))| and of max_v per-vertex symmetric difference.
inline Distances exact_distances(int n, const EdgeSet& g, const EdgeSet& h) {
  Distances best{SIZE_MAX, SIZE_MAX};
  heap_permutations(n, [&](const std::vector<int>& pi) {
    const EdgeSet ph = permute(h, pi);
    std::vector<std::size_t> per(n, 0);
    std::size_t total = 0;
    for (const auto& e : g)
      if (!ph.count(e)) {
        ++total;
        ++per[e.first];
        ++per[e.second];
      }
    for (const auto& e : ph)
      if (!g.count(e)) {
        ++total;
        ++per[e.first];
        ++per[e.second];
      }
    best.edit = std::min(best.edit, total);
    best.vertex = std::min(best.vertex, *std::max_element(per.begin(), per.end()));
  });
  return best;
}

inline gwm::Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<gwm::VertexPair> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(static_cast<gwm::Vertex>(u), static_cast<gwm::Vertex>(v));
  return gwm::build_graph(n, e);
}

inline gwm::Graph relabel(const gwm::Graph& g, const std::vector<gwm::Vertex>& pi) {
  std::vector<gwm::VertexPair> e;
  for (const auto& p : g.edges()) e.emplace_back(pi[p.u], pi[p.v]);
  return gwm::build_graph(g.num_vertices(), e);
}

inline std::vector<gwm::Vertex> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<gwm::Vertex> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);
  return pi;
}

// Joint degree counts straight from the edge list.
inline std::map<std::pair<std::size_t, std::size_t>, std::size_t> dk2(const gwm::Graph& g) {
  std::vector<std::size_t> deg(g.num_vertices(), 0);
  const auto edges = g.edges();
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> m;
  for (const auto& e : edges) {
    const auto a = deg[e.u], b = deg[e.v];
    ++m[{std::min(a, b), std::max(a, b)}];
  }
  return m;
}

inline double dk2_deviation(const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& a,
                            const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& b) {
  std::set<std::pair<std::size_t, std::size_t>> keys;
  for (const auto& [k, c] : a) keys.insert(k);
  for (const auto& [k, c] : b) keys.insert(k);
  if (keys.empty()) return 0.0;
  double sq = 0.0;
  for (const auto& k : keys) {
    const double x = a.count(k) ? static_cast<double>(a.at(k)) : 0.0;
    const double y = b.count(k) ? static_cast<double>(b.at(k)) : 0.0;
    sq += (x - y) * (x - y);
  }
  return std::sqrt(sq) / static_cast<double>(keys.size());
}

// Discrete power law on {x_min, x_min+1, ...} by inversion of a truncated table,
// with the far tail approximated continuously. Independent of the library sampler.
class DiscretePowerLaw {
 public:
  DiscretePowerLaw(double gamma, long x_min, long table = 1000000) : gamma_(gamma), x_min_(x_min) {
    double z = 0.0;
    // tail beyond the table via integral of x^-gamma from table+x_min-0.5
    for (long k = 0; k < table; ++k) z += std::pow(static_cast<double>(x_min + k), -gamma);
    const double edge = static_cast<double>(x_min + table) - 0.5;
    const double tail = std::pow(edge, 1.0 - gamma) / (gamma - 1.0);
    z += tail;
    cdf_.reserve(table);
    double acc = 0.0;
    for (long k = 0; k < table; ++k) {
      acc += std::pow(static_cast<double>(x_min + k), -gamma) / z;
      cdf_.push_back(acc);
    }
    edge_ = edge;
  }

  template <typename Engine>
  long operator()(Engine& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double u = u01(rng);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it != cdf_.end()) return x_min_ + static_cast<long>(it - cdf_.begin());
    const double r = u01(rng);
    return static_cast<long>(std::floor(edge_ * std::pow(1.0 - r, -1.0 / (gamma_ - 1.0)) + 0.5));
  }

 private:
  double gamma_;
  long x_min_;
  double edge_ = 0.0;
  std::vector<double> cdf_;
};

}  // namespace oracle
