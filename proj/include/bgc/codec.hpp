#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bgc/bipartite_graph.hpp"
#include "bgc/bitstream.hpp"
#include "bgc/codes.hpp"
#include "bgc/errors.hpp"
#include "bgc/io.hpp"
#include "bgc/types.hpp"

namespace bgc {

// Compressed form of a (relabeled) bipartite graph. Records are stored per
// bottom vertex: degree, reference offset (0 = none), the reference's copy
// bit array when present, residual count, then delta-coded residual gaps.
// `forward` switches to the experimental layout where records appear in
// reference-topological order, each prefixed by its position.
struct EncodedGraph {
  vertex_id n_top = 0;
  vertex_id n_bot = 0;
  std::uint64_t m = 0;
  CodeParams params;
  bool forward = false;
  std::vector<std::uint8_t> payload;
  std::uint64_t payload_bits = 0;

  double bits_per_edge() const {
    return m == 0 ? 0.0 : static_cast<double>(payload_bits) / static_cast<double>(m);
  }
};

// Which bottom vertex each bottom vertex copies from; backward references
// only, so the parent relation is a forest rooted at reference-free records.
struct ReferenceForest {
  std::vector<vertex_id> parent;       // invalid_vertex = no reference
  std::vector<std::int64_t> gain_bits; // record bits saved vs encoding without a reference
};

namespace detail {

struct RefSplit {
  std::vector<std::uint8_t> copy;      // one flag per reference neighbor
  std::vector<vertex_id> residuals;    // neighbors not covered by the copy array
};

inline void split_against_reference(std::span<const vertex_id> nbrs,
                                    std::span<const vertex_id> ref, RefSplit& out) {
  out.copy.assign(ref.size(), 0);
  out.residuals.clear();
  std::size_t i = 0, j = 0;
  while (i < nbrs.size()) {
    if (j == ref.size() || nbrs[i] < ref[j]) {
      out.residuals.push_back(nbrs[i]);
      ++i;
    } else if (ref[j] < nbrs[i]) {
      ++j;
    } else {
      out.copy[j] = 1;
      ++i;
      ++j;
    }
  }
}

// Residuals travel as first value + 1, then strictly positive differences,
// so every coded integer is at least 1.
inline std::uint64_t residual_bits(std::span<const vertex_id> xs, CodeKind kind, unsigned k) {
  if (xs.empty()) return 0;
  std::uint64_t bits = code_length(xs.front(), kind, k);
  for (std::size_t i = 1; i < xs.size(); ++i)
    bits += code_length(xs[i] - xs[i - 1] - 1, kind, k);
  return bits;
}

inline void put_residuals(BitWriter& w, std::span<const vertex_id> xs, CodeKind kind, unsigned k) {
  if (xs.empty()) return;
  put_code(w, xs.front(), kind, k);
  for (std::size_t i = 1; i < xs.size(); ++i) put_code(w, xs[i] - xs[i - 1] - 1, kind, k);
}

inline std::vector<vertex_id> get_residuals(BitReader& r, std::uint64_t count, CodeKind kind,
                                            unsigned k, vertex_id n_top, vertex_id record) {
  std::vector<vertex_id> xs;
  xs.reserve(count);
  std::uint64_t prev = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t value = i == 0 ? get_code(r, kind, k)
                                       : prev + get_code(r, kind, k) + 1;
    if (value >= n_top)
      throw CorruptStreamError("record " + std::to_string(record) + ": residual out of range");
    xs.push_back(static_cast<vertex_id>(value));
    prev = value;
  }
  return xs;
}

// Record cost without the degree field (identical across candidates).
inline std::uint64_t no_reference_cost(std::span<const vertex_id> nbrs, const CodeParams& p) {
  return code_length(0, CodeKind::gamma) + code_length(nbrs.size(), CodeKind::gamma) +
         residual_bits(nbrs, p.residual_code, p.zeta_k);
}

inline std::uint64_t with_reference_cost(std::uint64_t offset_field, std::size_t ref_degree,
                                         std::span<const vertex_id> residuals,
                                         const CodeParams& p) {
  return code_length(offset_field, CodeKind::gamma) + ref_degree +
         code_length(residuals.size(), CodeKind::gamma) +
         residual_bits(residuals, p.residual_code, p.zeta_k);
}

// Sequential backward reference selection: every candidate in the previous W
// records whose chain stays within L is costed exactly against the
// reference-free record; ties prefer no reference, then the smallest offset.
inline std::vector<vertex_id> select_backward_references(const BipartiteGraph& g,
                                                         const CodeParams& p) {
  const vertex_id nb = g.n_bot();
  std::vector<vertex_id> offset(nb, 0);
  std::vector<std::uint32_t> depth(nb, 0);
  RefSplit split;
  for (vertex_id q = 0; q < nb; ++q) {
    const auto nbrs = g.neighbors(q);
    std::uint64_t best_cost = no_reference_cost(nbrs, p);
    const vertex_id max_r = static_cast<vertex_id>(std::min<std::uint64_t>(p.window, q));
    if (p.max_chain > 0) {
      for (vertex_id r = 1; r <= max_r; ++r) {
        const vertex_id ref = q - r;
        if (depth[ref] + 1 > p.max_chain) continue;
        split_against_reference(nbrs, g.neighbors(ref), split);
        const std::uint64_t cost =
            with_reference_cost(r, g.degree(ref), split.residuals, p);
        if (cost < best_cost) {
          best_cost = cost;
          offset[q] = r;
        }
      }
    }
    if (offset[q] > 0) depth[q] = depth[q - offset[q]] + 1;
  }
  return offset;
}

}  // namespace detail

// Encodes a graph whose vertices are already relabeled by the chosen
// orderings. Lossless: decode_graph inverts it exactly.
inline EncodedGraph encode_graph(const BipartiteGraph& g, const CodeParams& params) {
  EncodedGraph e;
  e.n_top = g.n_top();
  e.n_bot = g.n_bot();
  e.m = g.edge_count();
  e.params = params;

  const auto offsets = detail::select_backward_references(g, params);
  BitWriter w;
  detail::RefSplit split;
  const vertex_id nb = g.n_bot();
  for (vertex_id q = 0; q < nb; ++q) {
    const auto nbrs = g.neighbors(q);
    put_code(w, nbrs.size(), CodeKind::gamma);
    const vertex_id r = offsets[q];
    put_code(w, r, CodeKind::gamma);
    if (r == 0) {
      put_code(w, nbrs.size(), CodeKind::gamma);
      detail::put_residuals(w, nbrs, params.residual_code, params.zeta_k);
    } else {
      detail::split_against_reference(nbrs, g.neighbors(q - r), split);
      for (std::uint8_t bit : split.copy) w.put_bit(bit != 0);
      put_code(w, split.residuals.size(), CodeKind::gamma);
      detail::put_residuals(w, split.residuals, params.residual_code, params.zeta_k);
    }
  }
  e.payload_bits = w.bit_count();
  e.payload = w.take();
  return e;
}

namespace detail {

[[noreturn]] inline void corrupt_record(vertex_id record, const char* what) {
  throw CorruptStreamError("record " + std::to_string(record) + ": " + what);
}

inline void check_padding(BitReader& r) {
  if (r.remaining() >= 8) throw CorruptStreamError("trailing data after the last record");
  while (r.remaining() > 0)
    if (r.get_bit()) throw CorruptStreamError("nonzero padding after the last record");
}

// One record body (everything after the optional position prefix): degree,
// offset field, copy bits against `ref_list`, residual count, residual gaps.
// `offset_field` is returned raw; the caller interprets it.
struct RecordBody {
  std::uint64_t degree = 0;
  std::uint64_t offset_field = 0;
  std::vector<vertex_id> copied;
  std::vector<vertex_id> residuals;
};

inline std::vector<vertex_id> merge_record(vertex_id q, RecordBody& body) {
  if (body.copied.empty()) return std::move(body.residuals);
  if (body.residuals.empty()) return std::move(body.copied);
  std::vector<vertex_id> out;
  out.reserve(body.copied.size() + body.residuals.size());
  std::size_t i = 0, j = 0;
  while (i < body.copied.size() || j < body.residuals.size()) {
    if (j == body.residuals.size() ||
        (i < body.copied.size() && body.copied[i] < body.residuals[j]))
      out.push_back(body.copied[i++]);
    else if (i == body.copied.size() || body.residuals[j] < body.copied[i])
      out.push_back(body.residuals[j++]);
    else
      corrupt_record(q, "residual duplicates a copied neighbor");
  }
  return out;
}

// Reads the offset field and the rest of the body; the caller must resolve
// the reference list itself (backward and forward layouts differ there).
template <class ResolveRef>
RecordBody read_record_body(BitReader& r, vertex_id q, vertex_id n_top, const CodeParams& p,
                            ResolveRef&& resolve_ref) {
  RecordBody body;
  body.degree = get_code(r, CodeKind::gamma);
  if (body.degree > n_top) corrupt_record(q, "degree exceeds the top side");
  body.offset_field = get_code(r, CodeKind::gamma);
  if (body.offset_field > 0) {
    const std::vector<vertex_id>& ref_list = resolve_ref(body.offset_field);
    body.copied.reserve(body.degree);
    for (vertex_id u : ref_list)
      if (r.get_bit()) body.copied.push_back(u);
    if (body.copied.size() > body.degree) corrupt_record(q, "copy array larger than degree");
  }
  const std::uint64_t residual_count = get_code(r, CodeKind::gamma);
  if (body.copied.size() + residual_count != body.degree)
    corrupt_record(q, "copy array and residual count do not match degree");
  body.residuals = get_residuals(r, residual_count, p.residual_code, p.zeta_k, n_top, q);
  return body;
}

// Backward-layout record walk; fills adjacency and optionally reports
// per-record reference offsets and bit extents.
inline void decode_records(const EncodedGraph& e, std::vector<std::vector<vertex_id>>& adj,
                           std::vector<vertex_id>* ref_offsets,
                           std::vector<std::uint64_t>* record_bits) {
  BitReader r(e.payload, e.payload_bits);
  adj.assign(e.n_bot, {});
  if (ref_offsets) ref_offsets->assign(e.n_bot, 0);
  if (record_bits) record_bits->assign(e.n_bot, 0);
  std::vector<std::uint32_t> depth(e.n_bot, 0);
  std::uint64_t total_edges = 0;
  for (vertex_id q = 0; q < e.n_bot; ++q) {
    const std::uint64_t start = r.position();
    auto body = read_record_body(r, q, e.n_top, e.params,
                                 [&](std::uint64_t offset) -> const std::vector<vertex_id>& {
                                   if (offset > q || offset > e.params.window)
                                     corrupt_record(q, "reference offset out of window");
                                   const vertex_id ref = q - static_cast<vertex_id>(offset);
                                   depth[q] = depth[ref] + 1;
                                   if (depth[q] > e.params.max_chain)
                                     corrupt_record(q, "reference chain exceeds the depth cap");
                                   return adj[ref];
                                 });
    if (ref_offsets) (*ref_offsets)[q] = static_cast<vertex_id>(body.offset_field);
    if (record_bits) (*record_bits)[q] = r.position() - start;
    adj[q] = merge_record(q, body);
    total_edges += adj[q].size();
  }
  if (total_edges != e.m) throw CorruptStreamError("decoded edge count does not match header");
  check_padding(r);
}

}  // namespace detail

inline BipartiteGraph decode_graph_forward(const EncodedGraph& e);

// Exact reconstruction of the encoded adjacency.
inline BipartiteGraph decode_graph(const EncodedGraph& e) {
  if (e.forward) return decode_graph_forward(e);
  std::vector<std::vector<vertex_id>> adj;
  detail::decode_records(e, adj, nullptr, nullptr);
  return BipartiteGraph::from_sorted(e.n_top, adj);
}

// Forward-layout walk: records in reference-topological order, each prefixed
// by its position; the reference field is 0 = none, 2r-1 = backward r,
// 2r = forward r. Referenced records always precede their dependents.
inline BipartiteGraph decode_graph_forward(const EncodedGraph& e) {
  BitReader r(e.payload, e.payload_bits);
  std::vector<std::vector<vertex_id>> adj(e.n_bot);
  std::vector<std::uint8_t> seen(e.n_bot, 0);
  std::vector<std::uint32_t> depth(e.n_bot, 0);
  std::uint64_t total_edges = 0;
  for (vertex_id i = 0; i < e.n_bot; ++i) {
    const std::uint64_t pos = get_code(r, CodeKind::gamma);
    if (pos >= e.n_bot || seen[pos]) throw CorruptStreamError("bad record position prefix");
    const vertex_id q = static_cast<vertex_id>(pos);
    seen[q] = 1;
    auto body = detail::read_record_body(
        r, q, e.n_top, e.params, [&](std::uint64_t field) -> const std::vector<vertex_id>& {
          const std::uint64_t off = (field + 1) / 2;
          const bool is_forward = field % 2 == 0;
          if (off > e.params.window) detail::corrupt_record(q, "reference offset out of window");
          if (!is_forward && off > q) detail::corrupt_record(q, "backward reference before start");
          if (is_forward && pos + off >= e.n_bot)
            detail::corrupt_record(q, "forward reference past the end");
          const vertex_id ref = is_forward ? q + static_cast<vertex_id>(off)
                                           : q - static_cast<vertex_id>(off);
          if (!seen[ref]) detail::corrupt_record(q, "reference target not yet decoded");
          depth[q] = depth[ref] + 1;
          if (depth[q] > e.params.max_chain)
            detail::corrupt_record(q, "reference chain exceeds the depth cap");
          return adj[ref];
        });
    adj[q] = detail::merge_record(q, body);
    total_edges += adj[q].size();
  }
  if (total_edges != e.m) throw CorruptStreamError("decoded edge count does not match header");
  detail::check_padding(r);
  return BipartiteGraph::from_sorted(e.n_top, adj);
}

// Parent map of the backward references together with the exact bits each
// reference saved over a reference-free record.
inline ReferenceForest extract_reference_forest(const EncodedGraph& e) {
  if (e.forward)
    throw std::invalid_argument("reference forests are defined for backward streams only");
  std::vector<std::vector<vertex_id>> adj;
  std::vector<vertex_id> offsets;
  std::vector<std::uint64_t> record_bits;
  detail::decode_records(e, adj, &offsets, &record_bits);
  ReferenceForest forest;
  forest.parent.assign(e.n_bot, invalid_vertex);
  forest.gain_bits.assign(e.n_bot, 0);
  for (vertex_id q = 0; q < e.n_bot; ++q) {
    const std::uint64_t noref =
        code_length(adj[q].size(), CodeKind::gamma) + detail::no_reference_cost(adj[q], e.params);
    forest.gain_bits[q] = static_cast<std::int64_t>(noref) - static_cast<std::int64_t>(record_bits[q]);
    if (offsets[q] > 0) forest.parent[q] = q - offsets[q];
  }
  return forest;
}

inline constexpr char compressed_magic[4] = {'B', 'G', 'C', '1'};
inline constexpr char compressed_forward_magic[4] = {'B', 'G', 'F', '1'};

// "BGC1"/"BGF1" container: magic, n_top/n_bot/m as u64 LE, one byte code
// kind, one byte zeta k, two bytes window LE, one byte chain cap, then the
// MSB-first payload zero-padded to a byte.
inline void write_compressed(const EncodedGraph& e, std::ostream& out) {
  out.write(e.forward ? compressed_forward_magic : compressed_magic, 4);
  detail::put_u64le(out, e.n_top);
  detail::put_u64le(out, e.n_bot);
  detail::put_u64le(out, e.m);
  out.put(static_cast<char>(e.params.residual_code));
  out.put(static_cast<char>(e.params.zeta_k));
  out.put(static_cast<char>(e.params.window & 0xff));
  out.put(static_cast<char>(e.params.window >> 8));
  out.put(static_cast<char>(e.params.max_chain));
  out.write(reinterpret_cast<const char*>(e.payload.data()),
            static_cast<std::streamsize>(e.payload.size()));
  if (!out) throw FormatError("write failed");
}

inline EncodedGraph read_compressed(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw FormatError("truncated header");
  EncodedGraph e;
  if (std::equal(magic, magic + 4, compressed_forward_magic))
    e.forward = true;
  else if (!std::equal(magic, magic + 4, compressed_magic))
    throw FormatError("missing BGC1 magic");
  const std::uint64_t n_top = detail::get_u64le(in);
  const std::uint64_t n_bot = detail::get_u64le(in);
  e.m = detail::get_u64le(in);
  if (n_top > std::numeric_limits<vertex_id>::max() || n_bot > std::numeric_limits<vertex_id>::max())
    throw FormatError("graph too large for this build's vertex_id width");
  e.n_top = static_cast<vertex_id>(n_top);
  e.n_bot = static_cast<vertex_id>(n_bot);
  char fields[5];
  if (!in.read(fields, 5)) throw FormatError("truncated header");
  const auto kind = static_cast<std::uint8_t>(fields[0]);
  if (kind > static_cast<std::uint8_t>(CodeKind::zeta)) throw FormatError("unknown code kind");
  e.params.residual_code = static_cast<CodeKind>(kind);
  e.params.zeta_k = static_cast<std::uint8_t>(fields[1]);
  e.params.window = static_cast<std::uint16_t>(static_cast<std::uint8_t>(fields[2]) |
                                               (static_cast<std::uint8_t>(fields[3]) << 8));
  e.params.max_chain = static_cast<std::uint8_t>(fields[4]);
  e.payload.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  e.payload_bits = static_cast<std::uint64_t>(e.payload.size()) * 8;
  return e;
}

inline void write_compressed_file(const EncodedGraph& e, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_compressed(e, out);
}

inline EncodedGraph read_compressed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_compressed(in);
}

}  // namespace bgc
