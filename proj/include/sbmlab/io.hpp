#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/sbm.hpp"

namespace sbmlab::io {

// Edge list: "# n <count>" header, then one "u v" per line, 0-based, u < v,
// lexicographic, LF endings.
inline void write_edges(std::ostream& os, const Graph& g) {
  os << "# n " << g.num_vertices() << '\n';
  for (auto [u, v] : g.edge_list()) os << u << ' ' << v << '\n';
}

// Labels: one community id per line, line i is vertex i.
inline void write_labels(std::ostream& os, std::span<const Community> labels) {
  for (auto c : labels) os << c << '\n';
}

namespace detail {

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path + "' for writing");
  return out;
}

inline bool parse_uint(std::string_view tok, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace detail

/// Parses an edge list. When n is 0 the vertex count comes from a "# n"
/// header, else max id + 1.
inline Graph read_edges(std::istream& in, std::size_t n = 0, const std::string& name = "<stream>") {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_id = 0;
  bool any = false;
  std::size_t header_n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# n ", 0) == 0) {
      std::uint64_t declared = 0;
      if (!detail::parse_uint(std::string_view(line).substr(4), declared))
        throw Error(Errc::io_error, name + ":" + std::to_string(lineno) + ": malformed '# n' header");
      header_n = static_cast<std::size_t>(declared);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    std::uint64_t u = 0, v = 0;
    if (!(ls >> a >> b) || (ls >> extra) || !detail::parse_uint(a, u) || !detail::parse_uint(b, v))
      throw Error(Errc::io_error, name + ":" + std::to_string(lineno) + ": expected 'u v'");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    max_id = std::max({max_id, u, v});
    any = true;
  }
  const std::size_t needed = any ? static_cast<std::size_t>(max_id) + 1 : 0;
  if (n == 0) n = std::max(header_n, needed);
  if (needed > n) throw Error(Errc::io_error, name + ": vertex id exceeds declared n");
  return Graph::from_edges(n, edges);
}

inline std::vector<Community> read_label_values(std::istream& in, const std::string& name = "<stream>") {
  std::vector<Community> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::uint64_t c = 0;
    if (!detail::parse_uint(line, c))
      throw Error(Errc::io_error, name + ":" + std::to_string(lineno) + ": expected a community id");
    out.push_back(static_cast<Community>(c));
  }
  return out;
}

inline Graph read_edges_file(const std::string& path, std::size_t n = 0) {
  auto in = detail::open_in(path);
  return read_edges(in, n, path);
}

/// k defaults to max label + 1.
inline Labeling read_labels_file(const std::string& path, std::uint32_t k = 0) {
  auto in = detail::open_in(path);
  auto values = read_label_values(in, path);
  std::uint32_t kk = 0;
  for (auto c : values) kk = std::max<std::uint32_t>(kk, c + 1);
  if (k == 0) k = std::max<std::uint32_t>(kk, 2);
  return Labeling(std::move(values), k);
}

inline void write_edges_file(const std::string& path, const Graph& g) {
  auto out = detail::open_out(path);
  write_edges(out, g);
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

inline void write_labels_file(const std::string& path, std::span<const Community> labels) {
  auto out = detail::open_out(path);
  write_labels(out, labels);
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

}  // namespace sbmlab::io
