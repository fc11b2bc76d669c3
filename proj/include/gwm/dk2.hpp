#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "gwm/graph.hpp"

namespace gwm {

/// Joint degree distribution: edge counts keyed by (k1, k2) with k1 <= k2.
class DK2Series {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  void add(std::size_t k1, std::size_t k2, std::uint64_t count = 1) {
    if (count == 0) return;
    counts_[{std::min(k1, k2), std::max(k1, k2)}] += count;
  }

  std::uint64_t count(std::size_t k1, std::size_t k2) const {
    auto it = counts_.find({std::min(k1, k2), std::max(k1, k2)});
    return it == counts_.end() ? 0 : it->second;
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [k, c] : counts_) t += c;
    return t;
  }

  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  const std::map<Key, std::uint64_t>& entries() const { return counts_; }

  friend bool operator==(const DK2Series&, const DK2Series&) = default;

 private:
  std::map<Key, std::uint64_t> counts_;
};

inline DK2Series dk2_series(const Graph& g) {
  DK2Series s;
  for (Vertex u = 0; u < g.num_vertices(); ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v) s.add(g.degree(u), g.degree(v));
  return s;
}

namespace detail {

// Squared Euclidean distance and the size of the union of supports.
inline std::pair<double, std::size_t> dk2_compare(const DK2Series& a, const DK2Series& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  auto ia = ea.begin();
  auto ib = eb.begin();
  double sq = 0.0;
  std::size_t keys = 0;
  while (ia != ea.end() || ib != eb.end()) {
    double diff = 0.0;
    if (ib == eb.end() || (ia != ea.end() && ia->first < ib->first)) {
      diff = static_cast<double>(ia->second);
      ++ia;
    } else if (ia == ea.end() || ib->first < ia->first) {
      diff = static_cast<double>(ib->second);
      ++ib;
    } else {
      diff = static_cast<double>(ia->second) - static_cast<double>(ib->second);
      ++ia;
      ++ib;
    }
    sq += diff * diff;
    ++keys;
  }
  return {sq, keys};
}

}  // namespace detail

/// Plain Euclidean distance between two series (a metric on series).
inline double dk2_distance(const DK2Series& a, const DK2Series& b) {
  return std::sqrt(detail::dk2_compare(a, b).first);
}

/// Euclidean distance divided by the number of keys in the union of the supports;
/// zero when both are empty. The division makes it fail the triangle inequality.
inline double dk2_deviation(const DK2Series& a, const DK2Series& b) {
  const auto [sq, keys] = detail::dk2_compare(a, b);
  return keys == 0 ? 0.0 : std::sqrt(sq) / static_cast<double>(keys);
}

inline double dk2_deviation(const Graph& a, const Graph& b) {
  return dk2_deviation(dk2_series(a), dk2_series(b));
}

/// Lines "k1 k2 count", sorted by (k1, k2).
inline void write_dk2(const DK2Series& s, std::ostream& out) {
  for (const auto& [k, c] : s.entries()) out << k.first << ' ' << k.second << ' ' << c << '\n';
}

inline DK2Series read_dk2(std::istream& in) {
  DK2Series s;
  std::size_t k1 = 0, k2 = 0;
  std::uint64_t c = 0;
  while (in >> k1 >> k2 >> c) s.add(k1, k2, c);
  if (!in.eof()) throw std::runtime_error("dk2 series: malformed line");
  return s;
}

}  // namespace gwm
