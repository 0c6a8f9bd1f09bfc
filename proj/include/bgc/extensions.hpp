#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "bgc/codec.hpp"
#include "bgc/ordering.hpp"
#include "bgc/types.hpp"

namespace bgc {

// Reference choices when forward targets are allowed; an acyclic relation
// rather than a forest. topo_order lists records so that every target
// precedes its dependents, which is the order the encoder stores them in.
struct ReferenceDag {
  enum class Direction : std::uint8_t { none, backward, forward };
  std::vector<vertex_id> target;        // invalid_vertex when none
  std::vector<Direction> direction;
  std::vector<std::int64_t> gain_bits;  // record bits saved vs no reference
  std::vector<vertex_id> topo_order;
};

// New bottom ordering where each reference tree occupies a contiguous block.
// Trees are placed by their root's (= minimum member's) old position and
// members keep their relative order, so no intra-tree reference offset can
// grow: the new offset counts only tree members between the two endpoints
// where the old one also counted outsiders. The forest is indexed by old
// positions, i.e. by the encode order of the relabeled graph.
inline Ordering forest_reorder(const Ordering& phi, const ReferenceForest& forest) {
  const vertex_id n = phi.size();
  if (forest.parent.size() != n)
    throw std::invalid_argument("forest does not cover the ordering");
  std::vector<vertex_id> root(n);
  for (vertex_id p = 0; p < n; ++p) {
    const vertex_id parent = forest.parent[p];
    if (parent == invalid_vertex) {
      root[p] = p;
    } else {
      if (parent >= p)
        throw std::invalid_argument("reference parents must point strictly backward");
      root[p] = root[parent];
    }
  }
  std::vector<vertex_id> seq(n);
  std::iota(seq.begin(), seq.end(), vertex_id{0});
  std::stable_sort(seq.begin(), seq.end(),
                   [&](vertex_id a, vertex_id b) { return root[a] < root[b]; });
  std::vector<vertex_id> new_pos(n);
  for (vertex_id i = 0; i < n; ++i) new_pos[seq[i]] = i;
  std::vector<vertex_id> positions(n);
  for (vertex_id v = 0; v < n; ++v) positions[v] = new_pos[phi.position(v)];
  return Ordering::from_positions(std::move(positions));
}

namespace detail {

// Chain length above q (number of reference hops to the root); bounded walks
// only, chains are kept within the depth cap.
inline std::uint32_t chain_length(const std::vector<vertex_id>& parent, vertex_id q) {
  std::uint32_t len = 0;
  for (vertex_id x = parent[q]; x != invalid_vertex; x = parent[x]) ++len;
  return len;
}

}  // namespace detail

// Picks each record's best reference among the W predecessors and W
// successors by exact record-bit gain (backward wins ties, then smaller
// offsets), then accepts edges greedily in descending gain, rejecting any
// that would close a cycle or stretch a chain past the depth cap. With
// allow_forward = false this is exactly the codec's backward selection.
inline ReferenceDag forward_reference_select(const BipartiteGraph& g, const CodeParams& p,
                                             bool allow_forward = true) {
  const vertex_id nb = g.n_bot();
  ReferenceDag dag;
  dag.target.assign(nb, invalid_vertex);
  dag.direction.assign(nb, ReferenceDag::Direction::none);
  dag.gain_bits.assign(nb, 0);

  detail::RefSplit split;
  if (!allow_forward) {
    const auto offsets = detail::select_backward_references(g, p);
    for (vertex_id q = 0; q < nb; ++q) {
      if (offsets[q] == 0) continue;
      const vertex_id ref = q - offsets[q];
      detail::split_against_reference(g.neighbors(q), g.neighbors(ref), split);
      const std::int64_t noref =
          static_cast<std::int64_t>(detail::no_reference_cost(g.neighbors(q), p));
      const std::int64_t cost = static_cast<std::int64_t>(
          detail::with_reference_cost(offsets[q], g.degree(ref), split.residuals, p));
      dag.target[q] = ref;
      dag.direction[q] = ReferenceDag::Direction::backward;
      dag.gain_bits[q] = noref - cost;
    }
  } else if (p.max_chain > 0) {
    struct Candidate {
      std::int64_t gain;
      vertex_id from;
      vertex_id to;
      bool forward;
    };
    std::vector<Candidate> candidates;
    for (vertex_id q = 0; q < nb; ++q) {
      const auto nbrs = g.neighbors(q);
      const std::int64_t noref = static_cast<std::int64_t>(detail::no_reference_cost(nbrs, p));
      Candidate best{0, q, invalid_vertex, false};
      auto consider = [&](vertex_id ref, std::uint64_t field, bool fwd) {
        detail::split_against_reference(nbrs, g.neighbors(ref), split);
        const std::int64_t gain =
            noref - static_cast<std::int64_t>(
                        detail::with_reference_cost(field, g.degree(ref), split.residuals, p));
        if (gain > best.gain) best = {gain, q, ref, fwd};
      };
      for (vertex_id r = 1; r <= p.window && r <= q; ++r) consider(q - r, 2 * r - 1, false);
      for (vertex_id r = 1; r <= p.window && q + r < nb; ++r) consider(q + r, 2 * r, true);
      if (best.to != invalid_vertex) candidates.push_back(best);
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.gain > b.gain || (a.gain == b.gain && a.from < b.from);
    });

    std::vector<std::uint32_t> height_down(nb, 0);  // longest dependent chain below
    for (const Candidate& c : candidates) {
      bool cycle = false;
      std::uint32_t above = 0;
      for (vertex_id x = c.to; x != invalid_vertex; x = dag.target[x]) {
        if (x == c.from) {
          cycle = true;
          break;
        }
        if (x != c.to) ++above;
      }
      if (cycle) continue;
      if (height_down[c.from] + 1 + above > p.max_chain) continue;
      dag.target[c.from] = c.to;
      dag.direction[c.from] =
          c.forward ? ReferenceDag::Direction::forward : ReferenceDag::Direction::backward;
      dag.gain_bits[c.from] = c.gain;
      std::uint32_t reach = height_down[c.from] + 1;
      for (vertex_id x = c.to; x != invalid_vertex; x = dag.target[x]) {
        height_down[x] = std::max(height_down[x], reach);
        ++reach;
      }
    }
  }

  std::vector<std::uint32_t> depth(nb, 0);
  for (vertex_id q = 0; q < nb; ++q) depth[q] = detail::chain_length(dag.target, q);
  dag.topo_order.resize(nb);
  std::iota(dag.topo_order.begin(), dag.topo_order.end(), vertex_id{0});
  std::stable_sort(dag.topo_order.begin(), dag.topo_order.end(),
                   [&](vertex_id a, vertex_id b) { return depth[a] < depth[b]; });
  return dag;
}

// Forward-layout encoding: records in topological order, each prefixed by its
// position; references may point either way. decode_graph inverts it.
inline EncodedGraph encode_graph_forward(const BipartiteGraph& g, const CodeParams& params) {
  const ReferenceDag dag = forward_reference_select(g, params, true);
  EncodedGraph e;
  e.n_top = g.n_top();
  e.n_bot = g.n_bot();
  e.m = g.edge_count();
  e.params = params;
  e.forward = true;

  BitWriter w;
  detail::RefSplit split;
  for (vertex_id q : dag.topo_order) {
    const auto nbrs = g.neighbors(q);
    put_code(w, q, CodeKind::gamma);
    put_code(w, nbrs.size(), CodeKind::gamma);
    if (dag.target[q] == invalid_vertex) {
      put_code(w, 0, CodeKind::gamma);
      put_code(w, nbrs.size(), CodeKind::gamma);
      detail::put_residuals(w, nbrs, params.residual_code, params.zeta_k);
    } else {
      const vertex_id ref = dag.target[q];
      const std::uint64_t r = dag.direction[q] == ReferenceDag::Direction::forward
                                  ? static_cast<std::uint64_t>(ref - q)
                                  : static_cast<std::uint64_t>(q - ref);
      const std::uint64_t field =
          dag.direction[q] == ReferenceDag::Direction::forward ? 2 * r : 2 * r - 1;
      put_code(w, field, CodeKind::gamma);
      detail::split_against_reference(nbrs, g.neighbors(ref), split);
      for (std::uint8_t bit : split.copy) w.put_bit(bit != 0);
      put_code(w, split.residuals.size(), CodeKind::gamma);
      detail::put_residuals(w, split.residuals, params.residual_code, params.zeta_k);
    }
  }
  e.payload_bits = w.bit_count();
  e.payload = w.take();
  return e;
}

}  // namespace bgc
