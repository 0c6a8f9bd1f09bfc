#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bgc/bipartite_graph.hpp"
#include "bgc/errors.hpp"
#include "bgc/ordering.hpp"

namespace bgc {

namespace detail {

inline void put_u64le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline void put_u32le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

inline std::uint64_t get_u64le(std::istream& in) {
  char b[8];
  if (!in.read(b, 8)) throw FormatError("truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline std::uint32_t get_u32le(std::istream& in) {
  char b[4];
  if (!in.read(b, 4)) throw FormatError("truncated stream");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

}  // namespace detail

inline constexpr char cache_magic[4] = {'B', 'G', 'Z', '1'};

// Text edge list: one edge per line as "bot top" decimal ids; lines starting
// with '%' or '#' are comments, blank lines are skipped, extra columns after
// the two ids (weights, timestamps) are ignored. Ids are densified per side
// in first-appearance order, duplicate edges collapse to one.
inline BipartiteGraph load_edge_list(std::istream& in) {
  std::unordered_map<std::uint64_t, vertex_id> bot_ids, top_ids;
  std::vector<std::vector<vertex_id>> adj;
  vertex_id n_top = 0;
  std::uint64_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i == line.size() || line[i] == '%' || line[i] == '#') continue;
    std::uint64_t raw[2];
    for (int field = 0; field < 2; ++field) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size() || line[i] < '0' || line[i] > '9')
        throw ParseError("line " + std::to_string(line_no) + ": expected two integer ids");
      std::uint64_t v = 0;
      while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
        if (v > (std::numeric_limits<std::uint64_t>::max() - 9) / 10)
          throw ParseError("line " + std::to_string(line_no) + ": id overflows 64 bits");
        v = v * 10 + static_cast<std::uint64_t>(line[i] - '0');
        ++i;
      }
      raw[field] = v;
    }
    if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      throw ParseError("line " + std::to_string(line_no) + ": malformed id");
    const auto [bit, binserted] = bot_ids.try_emplace(raw[0], static_cast<vertex_id>(adj.size()));
    if (binserted) adj.emplace_back();
    const auto [tit, tinserted] = top_ids.try_emplace(raw[1], n_top);
    if (tinserted) ++n_top;
    adj[bit->second].push_back(tit->second);
  }
  if (adj.empty()) throw ParseError("empty input: no edges");
  return BipartiteGraph::from_lists(n_top, std::move(adj));
}

// "BGZ1" adjacency cache: magic, n_top/n_bot/m as u64 LE, per-query degree
// array then concatenated neighbor arrays, both u32 LE.
inline void write_cache(const BipartiteGraph& g, std::ostream& out) {
  out.write(cache_magic, 4);
  detail::put_u64le(out, g.n_top());
  detail::put_u64le(out, g.n_bot());
  detail::put_u64le(out, g.edge_count());
  const vertex_id nb = g.n_bot();
  for (vertex_id q = 0; q < nb; ++q) {
    if (g.degree(q) > std::numeric_limits<std::uint32_t>::max())
      throw FormatError("degree exceeds the cache format's 32-bit fields");
    detail::put_u32le(out, static_cast<std::uint32_t>(g.degree(q)));
  }
  for (vertex_id q = 0; q < nb; ++q)
    for (vertex_id u : g.neighbors(q)) {
      if (u > std::numeric_limits<std::uint32_t>::max())
        throw FormatError("vertex id exceeds the cache format's 32-bit fields");
      detail::put_u32le(out, static_cast<std::uint32_t>(u));
    }
  if (!out) throw FormatError("write failed");
}

inline BipartiteGraph read_cache(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, cache_magic))
    throw FormatError("missing BGZ1 magic");
  const std::uint64_t n_top = detail::get_u64le(in);
  const std::uint64_t n_bot = detail::get_u64le(in);
  const std::uint64_t m = detail::get_u64le(in);
  if (n_top > std::numeric_limits<vertex_id>::max() || n_bot > std::numeric_limits<vertex_id>::max())
    throw FormatError("graph too large for this build's vertex_id width");
  std::vector<std::uint64_t> offsets(n_bot + 1, 0);
  for (std::uint64_t q = 0; q < n_bot; ++q) offsets[q + 1] = offsets[q] + detail::get_u32le(in);
  if (offsets.back() != m) throw FormatError("degree sum does not match edge count");
  std::vector<vertex_id> neighbors(m);
  for (std::uint64_t i = 0; i < m; ++i) neighbors[i] = static_cast<vertex_id>(detail::get_u32le(in));
  try {
    return BipartiteGraph::from_csr(static_cast<vertex_id>(n_top), std::move(offsets),
                                    std::move(neighbors));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid cached adjacency: ") + e.what());
  }
}

// Reads either format, sniffing the cache magic.
inline BipartiteGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::equal(magic, magic + 4, cache_magic)) return read_cache(in);
  try {
    return load_edge_list(in);
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_cache_file(const BipartiteGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_cache(g, out);
}

// Ordering files: line i holds the position of vertex i.
inline void write_ordering_file(const Ordering& o, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  for (vertex_id v = 0; v < o.size(); ++v) out << o.position(v) << '\n';
  if (!out) throw FormatError("write failed: " + path);
}

inline Ordering read_ordering_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<vertex_id> positions;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      positions.push_back(static_cast<vertex_id>(std::stoull(line)));
    } catch (const std::exception&) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected a position");
    }
  }
  try {
    return Ordering::from_positions(std::move(positions));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace bgc
