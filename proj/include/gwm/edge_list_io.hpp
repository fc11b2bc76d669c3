#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gwm/graph.hpp"

namespace gwm {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_u64(std::string_view tok, std::uint64_t& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && p == tok.data() + tok.size();
}

}  // namespace detail

/// Reads a SNAP-style edge list: '#' comment lines, "u v" per line, ids remapped to
/// 0..n-1 in first-seen order. A "# Nodes: N" comment reserves ids for isolated
/// vertices; when every id is already below the declared N, ids are kept as is.
inline Graph read_edge_list(std::istream& in) {
  static const std::regex nodes_re(R"(Nodes:\s*(\d+))", std::regex::icase);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::size_t declared = 0;
  std::uint64_t max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.front().front() == '#') {
      std::smatch m;
      if (std::regex_search(line, m, nodes_re)) declared = std::stoull(m[1].str());
      continue;
    }
    if (toks.size() < 2) throw ParseError(lineno, "expected two vertex ids");
    std::uint64_t a = 0, b = 0;
    if (!detail::parse_u64(toks[0], a))
      throw ParseError(lineno, "not an integer: '" + std::string(toks[0]) + "'");
    if (!detail::parse_u64(toks[1], b))
      throw ParseError(lineno, "not an integer: '" + std::string(toks[1]) + "'");
    if (a == b) throw ParseError(lineno, "self-loop on vertex " + std::to_string(a));
    max_id = std::max({max_id, a, b});
    raw.emplace_back(a, b);
  }
  std::vector<VertexPair> edges;
  edges.reserve(raw.size());
  if (declared > 0 && max_id < declared) {
    for (auto [a, b] : raw) edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
    return Graph::from_edges(declared, edges);
  }
  std::unordered_map<std::uint64_t, Vertex> ids;
  auto intern = [&](std::uint64_t r) {
    return ids.try_emplace(r, static_cast<Vertex>(ids.size())).first->second;
  };
  for (auto [a, b] : raw) {
    const Vertex u = intern(a);
    edges.emplace_back(u, intern(b));
  }
  return Graph::from_edges(std::max(declared, ids.size()), edges);
}

inline Graph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# Nodes: " << g.num_vertices() << " Edges: " << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

}  // namespace gwm
