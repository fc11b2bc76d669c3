#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gwm/graph.hpp"
#include "gwm/key_values.hpp"
#include "gwm/parallel.hpp"
#include "gwm/rng.hpp"

namespace gwm {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ErdosRenyiParams {
  std::size_t n = 0;
  double p = 0.0;

  double q() const { return 1.0 - p; }
  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw ModelError("G(n,p): p must lie in [0, 1]");
  }
};

/// Random power-law graph G(w^gamma). Vertex k (0-based) carries the real
/// index i0 + k; expected degree of index i is c * i^(-1/(gamma-1)).
struct PowerLawParams {
  std::size_t n = 0;
  double max_degree = 0.0;  // m
  double avg_degree = 0.0;  // w
  double gamma = 0.0;
  double c = 0.0;   // weight scale
  double i0 = 0.0;  // lowest index
  double k0 = 0.0;  // probability constant
  std::vector<std::string> warnings;

  double index_of(std::size_t vertex) const { return i0 + static_cast<double>(vertex); }
  double weight(double index) const { return c * std::pow(index, -1.0 / (gamma - 1.0)); }
  /// Unclipped edge probability for real indices.
  double raw_probability(double i, double j) const {
    return k0 * std::pow(std::pow(static_cast<double>(n), gamma - 3.0) * i * j,
                         -1.0 / (gamma - 1.0));
  }
};

/// Derives (c, i0, K0) from (n, m, w, gamma). gamma must lie in (5/2, 3).
inline PowerLawParams derive_constants(std::size_t n, double max_degree, double avg_degree,
                                       double gamma) {
  if (!(gamma > 2.5 && gamma < 3.0))
    throw ModelError("power-law exponent gamma must lie in (5/2, 3), got " +
                     std::to_string(gamma));
  if (!(avg_degree > 0.0 && max_degree > avg_degree))
    throw ModelError("power-law degrees must satisfy m > w > 0");
  if (n < 2) throw ModelError("power-law graph needs n >= 2");
  PowerLawParams p;
  p.n = n;
  p.max_degree = max_degree;
  p.avg_degree = avg_degree;
  p.gamma = gamma;
  const double nn = static_cast<double>(n);
  const double ratio = (gamma - 2.0) / (gamma - 1.0);
  p.c = ratio * avg_degree * std::pow(nn, 1.0 / (gamma - 1.0));
  p.i0 = nn * std::pow(avg_degree * (gamma - 2.0) / (max_degree * (gamma - 1.0)), gamma - 1.0);
  p.k0 = ratio * ratio * avg_degree;
  const double top = p.raw_probability(p.i0, p.i0);
  if (top >= 1.0)
    p.warnings.push_back("P[i0,i0] = " + std::to_string(top) +
                         " >= 1; edge probabilities are clipped to 1");
  double total_weight = 0.0;
  if (n <= 10'000'000) {
    for (std::size_t k = 0; k < n; ++k) total_weight += p.weight(p.index_of(k));
  } else {
    // integral of c x^-a over [i0, i0 + n] plus the trapezoid end correction
    const double b = 1.0 - 1.0 / (gamma - 1.0);
    total_weight = p.c * (std::pow(p.i0 + nn, b) - std::pow(p.i0, b)) / b +
                   0.5 * (p.weight(p.i0) + p.weight(p.i0 + nn));
  }
  const double w_max = p.weight(p.i0);
  if (w_max * w_max >= total_weight)
    p.warnings.push_back("max_i w_i^2 >= sum_k w_k; expected degrees are not attained exactly");
  return p;
}

/// Edge probability for model indices i, j in [i0, i0 + n], clipped to 1.
inline double edge_probability(const PowerLawParams& params, double i, double j) {
  const double lo = params.i0;
  const double hi = params.i0 + static_cast<double>(params.n);
  const double slack = 1e-9 * hi;
  if (i < lo - slack || i > hi + slack || j < lo - slack || j > hi + slack)
    throw ModelError("index outside [i0, i0 + n]");
  return std::min(1.0, params.raw_probability(i, j));
}

/// Probability of the pair of internal vertices (a, b).
inline double vertex_pair_probability(const PowerLawParams& params, std::size_t a,
                                      std::size_t b) {
  return std::min(1.0, params.raw_probability(params.index_of(a), params.index_of(b)));
}

namespace detail {

template <typename RowSampler>
Graph sample_rows(std::size_t n, std::uint64_t seed, RowSampler&& sample_row) {
  std::vector<std::vector<VertexPair>> rows(n);
  parallel_for(n, [&](std::size_t u) {
    Rng rng(derive_seed(seed, {u}));
    sample_row(static_cast<Vertex>(u), rng, rows[u]);
  });
  std::vector<VertexPair> edges;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  edges.reserve(total);
  for (const auto& r : rows) edges.insert(edges.end(), r.begin(), r.end());
  return Graph::from_edges(n, edges);
}

}  // namespace detail

/// G(n, p) by per-row geometric skipping; expected cost O(n + |E|).
inline Graph sample_er(const ErdosRenyiParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.n;
  return detail::sample_rows(n, seed, [&](Vertex u, Rng& rng, std::vector<VertexPair>& out) {
    if (params.p <= 0.0) return;
    std::uint64_t v = u + 1;
    while (true) {
      const auto skip = rng.geometric_skip(params.p);
      if (skip >= n) break;
      v += skip;
      if (v >= n) break;
      out.emplace_back(u, static_cast<Vertex>(v));
      ++v;
    }
  });
}

/// G(w^gamma): each pair independently with the clipped edge probability.
/// Rows are sampled with a decreasing upper bound and thinning, which is exact
/// because probabilities are non-increasing along a row.
inline Graph sample_power_law(const PowerLawParams& params, std::uint64_t seed) {
  const std::size_t n = params.n;
  return detail::sample_rows(n, seed, [&](Vertex u, Rng& rng, std::vector<VertexPair>& out) {
    std::uint64_t v = u + 1;
    if (v >= n) return;
    double bound = vertex_pair_probability(params, u, v);
    while (bound > 0.0) {
      const auto skip = rng.geometric_skip(bound);
      if (skip >= n) break;
      v += skip;
      if (v >= n) break;
      const double p = vertex_pair_probability(params, u, v);
      if (rng.uniform() * bound < p) out.emplace_back(u, static_cast<Vertex>(v));
      bound = p;
      ++v;
    }
  });
}

/// A generator configuration as read from / written to a key=value block.
struct ModelSpec {
  std::variant<ErdosRenyiParams, PowerLawParams> params;
  std::uint64_t seed = 0;

  std::size_t n() const {
    return std::visit([](const auto& p) { return p.n; }, params);
  }
  bool is_power_law() const { return std::holds_alternative<PowerLawParams>(params); }

  Graph sample(std::uint64_t s) const {
    if (auto* er = std::get_if<ErdosRenyiParams>(&params)) return sample_er(*er, s);
    return sample_power_law(std::get<PowerLawParams>(params), s);
  }
  Graph sample() const { return sample(seed); }

  static ModelSpec from_key_values(const KeyValues& kv) {
    ModelSpec spec;
    spec.seed = kv.integer_or("seed", 0);
    const auto model = kv.str("model");
    const auto n = static_cast<std::size_t>(kv.integer("n"));
    if (model == "er") {
      ErdosRenyiParams er{n, kv.real("p")};
      er.validate();
      spec.params = er;
    } else if (model == "plg") {
      spec.params = derive_constants(n, kv.real("m"), kv.real("w"), kv.real("gamma"));
    } else {
      throw ConfigError("unknown model '" + model + "' (expected er or plg)");
    }
    return spec;
  }

  KeyValues to_key_values() const {
    KeyValues kv;
    if (auto* er = std::get_if<ErdosRenyiParams>(&params)) {
      kv.set("model", std::string("er"));
      kv.set("n", er->n);
      kv.set("p", er->p);
    } else {
      const auto& pl = std::get<PowerLawParams>(params);
      kv.set("model", std::string("plg"));
      kv.set("n", pl.n);
      kv.set("m", pl.max_degree);
      kv.set("w", pl.avg_degree);
      kv.set("gamma", pl.gamma);
    }
    kv.set("seed", seed);
    return kv;
  }
};

}  // namespace gwm
