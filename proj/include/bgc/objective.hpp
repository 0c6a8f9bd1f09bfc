#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bgc/bipartite_graph.hpp"
#include "bgc/ordering.hpp"
#include "bgc/shingle.hpp"

namespace bgc {

namespace detail {

// Sum of log2 of consecutive differences after sorting; the first position is
// never charged. Degree <= 1 contributes nothing.
inline double sorted_gap_cost(std::vector<vertex_id>& positions) {
  if (positions.size() < 2) return 0.0;
  std::sort(positions.begin(), positions.end());
  double cost = 0.0;
  for (std::size_t i = 1; i < positions.size(); ++i)
    cost += std::log2(static_cast<double>(positions[i] - positions[i - 1]));
  return cost;
}

}  // namespace detail

// Gap cost of the top ordering: for every query, its neighbors' positions
// under pi are sorted and the base-2 logs of consecutive gaps are summed.
// Reads only pi; zero iff every query's neighbors sit on consecutive
// positions.
inline double bim_log_gap(const BipartiteGraph& g, const Ordering& pi) {
  if (pi.size() != g.n_top()) throw std::invalid_argument("pi does not cover the top side");
  double total = 0.0;
  std::vector<vertex_id> positions;
  const vertex_id nb = g.n_bot();
  for (vertex_id q = 0; q < nb; ++q) {
    const auto nbrs = g.neighbors(q);
    if (nbrs.size() < 2) continue;
    positions.clear();
    for (vertex_id u : nbrs) positions.push_back(pi.position(u));
    total += detail::sorted_gap_cost(positions);
  }
  return total;
}

// Gap cost of a single ordering over both sides treated as one vertex set.
// Union ids place the top side first: top u -> u, bottom q -> n_top + q.
// Every vertex's neighborhood contributes, so each edge is charged from both
// endpoints.
inline double log_gap_union(const BipartiteGraph& g, const Ordering& order) {
  const std::uint64_t n_union = static_cast<std::uint64_t>(g.n_top()) + g.n_bot();
  if (order.size() != n_union) throw std::invalid_argument("order does not cover both sides");
  double total = 0.0;
  std::vector<vertex_id> positions;
  const vertex_id nb = g.n_bot();
  for (vertex_id q = 0; q < nb; ++q) {
    const auto nbrs = g.neighbors(q);
    if (nbrs.size() < 2) continue;
    positions.clear();
    for (vertex_id u : nbrs) positions.push_back(order.position(u));
    total += detail::sorted_gap_cost(positions);
  }
  const BipartiteGraph gt = g.transposed();
  const vertex_id nt = gt.n_bot();
  for (vertex_id u = 0; u < nt; ++u) {
    const auto nbrs = gt.neighbors(u);
    if (nbrs.size() < 2) continue;
    positions.clear();
    for (vertex_id q : nbrs) positions.push_back(order.position(g.n_top() + q));
    total += detail::sorted_gap_cost(positions);
  }
  return total;
}

// Mean Jaccard similarity of consecutive bottom vertices under phi; a
// diagnostic for how referencing-friendly an ordering is. 0 when n_bot < 2.
inline double adjacent_jaccard(const BipartiteGraph& g, const Ordering& phi) {
  if (phi.size() != g.n_bot()) throw std::invalid_argument("phi does not cover the bottom side");
  const vertex_id nb = g.n_bot();
  if (nb < 2) return 0.0;
  double total = 0.0;
  for (vertex_id p = 0; p + 1 < nb; ++p)
    total += jaccard(g.neighbors(phi.vertex_at(p)), g.neighbors(phi.vertex_at(p + 1)));
  return total / static_cast<double>(nb - 1);
}

}  // namespace bgc
