#pragma once

#include <array>
#include <chrono>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bgc/codec.hpp"
#include "bgc/extensions.hpp"
#include "bgc/objective.hpp"
#include "bgc/recbis.hpp"
#include "bgc/shingle.hpp"

namespace bgc {

struct PipelineParams {
  CodeParams codec;
  RecBisParams recbis;
  SimRefParams simref;
  std::uint64_t seed = 0;
  bool transpose = false;           // switch roles before ordering
  bool auto_transpose = false;      // dual tries both orientations, keeps the cheaper
  bool post_forest_reorder = false; // regroup reference trees and re-encode
  bool forward_refs = false;        // forward-layout encoding
};

struct BenchRow {
  std::string method;
  double bits_per_edge = 0;
  double log_gap = 0;        // gap objective of the top ordering
  double adj_jaccard = 0;    // mean Jaccard of consecutive bottom vertices
  double order_seconds = 0;
  double encode_seconds = 0;
  std::uint64_t payload_bits = 0;
  std::uint64_t edges = 0;
  std::uint64_t seed = 0;
  bool transposed = false;
};

inline constexpr std::array<const char*, 7> bench_methods = {
    "natural", "random", "shingle", "simref", "recbis-u", "recbis-b", "dual"};

// Orderings implied by a method name over the given (already oriented) graph.
inline std::pair<Ordering, Ordering> method_orderings(const BipartiteGraph& g,
                                                      const std::string& method,
                                                      const PipelineParams& p) {
  RecBisParams rb = p.recbis;
  rb.seed = p.seed;
  if (method == "natural")
    return {Ordering::identity(g.n_top()), Ordering::identity(g.n_bot())};
  if (method == "random")
    return {Ordering::random(g.n_top(), mix64(p.seed ^ 0x746f70ULL)),
            Ordering::random(g.n_bot(), mix64(p.seed ^ 0x626f74ULL))};
  if (method == "shingle")
    return {Ordering::identity(g.n_top()), shingle_order(g, p.seed, p.simref.levels)};
  if (method == "simref")
    return {Ordering::identity(g.n_top()), simref_order(g, p.seed, p.simref)};
  if (method == "recbis-u") return recbis_unipartite(g, rb);
  if (method == "recbis-b") {
    RecBisParams rb2 = rb;
    rb2.seed = mix64(rb.seed ^ 0x626f74746f6dULL);
    return {recbis_order(g, Side::top, rb), recbis_order(g, Side::bottom, rb2)};
  }
  if (method == "dual")
    return {recbis_order(g, Side::top, rb), simref_order(g, p.seed, p.simref)};
  throw std::invalid_argument("unknown method: " + method);
}

// Relabel + encode, honoring the post-reorder and forward-layout options.
inline EncodedGraph encode_pipeline(const BipartiteGraph& g, const Ordering& pi,
                                    const Ordering& phi, const PipelineParams& p) {
  BipartiteGraph relabeled = g.relabeled(pi, phi);
  if (p.post_forest_reorder) {
    const EncodedGraph first = encode_graph(relabeled, p.codec);
    const Ordering shifted =
        forest_reorder(Ordering::identity(relabeled.n_bot()), extract_reference_forest(first));
    relabeled = relabeled.relabeled(Ordering::identity(relabeled.n_top()), shifted);
  }
  return p.forward_refs ? encode_graph_forward(relabeled, p.codec)
                        : encode_graph(relabeled, p.codec);
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline BenchRow run_method_oriented(const BipartiteGraph& g, const std::string& method,
                                    const PipelineParams& p, bool transposed) {
  BenchRow row;
  row.method = method;
  row.seed = p.seed;
  row.transposed = transposed;
  row.edges = g.edge_count();
  const auto t0 = std::chrono::steady_clock::now();
  const auto [pi, phi] = method_orderings(g, method, p);
  row.order_seconds = seconds_since(t0);
  row.log_gap = bim_log_gap(g, pi);
  row.adj_jaccard = adjacent_jaccard(g, phi);
  const auto t1 = std::chrono::steady_clock::now();
  const EncodedGraph e = encode_pipeline(g, pi, phi, p);
  row.encode_seconds = seconds_since(t1);
  row.payload_bits = e.payload_bits;
  row.bits_per_edge = e.bits_per_edge();
  return row;
}

}  // namespace detail

// One bench row; with auto_transpose enabled, `dual` is evaluated in both
// orientations and the cheaper encoding wins.
inline BenchRow run_method(const BipartiteGraph& g, const std::string& method,
                           const PipelineParams& p) {
  const BipartiteGraph* oriented = &g;
  BipartiteGraph t;
  if (p.transpose) {
    t = g.transposed();
    oriented = &t;
  }
  BenchRow row = detail::run_method_oriented(*oriented, method, p, p.transpose);
  if (method == "dual" && p.auto_transpose) {
    const BipartiteGraph other = oriented->transposed();
    BenchRow alt = detail::run_method_oriented(other, method, p, !p.transpose);
    if (alt.payload_bits < row.payload_bits) row = std::move(alt);
  }
  return row;
}

inline std::vector<BenchRow> run_bench(const BipartiteGraph& g, const PipelineParams& p) {
  std::vector<BenchRow> rows;
  rows.reserve(bench_methods.size());
  for (const char* method : bench_methods) rows.push_back(run_method(g, method, p));
  return rows;
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "method,bits_per_edge,log_gap,adj_jaccard,order_seconds,encode_seconds,"
         "payload_bits,edges,seed,transposed\n";
  for (const BenchRow& r : rows) {
    out << r.method << ',' << r.bits_per_edge << ',' << r.log_gap << ',' << r.adj_jaccard << ','
        << r.order_seconds << ',' << r.encode_seconds << ',' << r.payload_bits << ',' << r.edges
        << ',' << r.seed << ',' << (r.transposed ? 1 : 0) << '\n';
  }
}

}  // namespace bgc
