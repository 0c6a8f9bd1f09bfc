#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bgc/ordering.hpp"
#include "bgc/types.hpp"

namespace bgc {

// Immutable bipartite graph stored as one ascending adjacency list per
// bottom (query) vertex; list entries are top (data) vertex ids. Ids are
// dense per side, multi-edges are collapsed. Safe to read from any number
// of threads once constructed.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // CSR input. offsets has n_bot+1 entries starting at 0; each list must be
  // strictly increasing with values in [0, n_top).
  static BipartiteGraph from_csr(vertex_id n_top, std::vector<std::uint64_t> offsets,
                                 std::vector<vertex_id> neighbors) {
    if (offsets.empty() || offsets.front() != 0 || offsets.back() != neighbors.size())
      throw std::invalid_argument("bad adjacency offsets");
    for (std::size_t q = 0; q + 1 < offsets.size(); ++q) {
      if (offsets[q] > offsets[q + 1]) throw std::invalid_argument("bad adjacency offsets");
      for (std::uint64_t i = offsets[q]; i < offsets[q + 1]; ++i) {
        if (neighbors[i] >= n_top)
          throw std::invalid_argument("neighbor id out of range in list " + std::to_string(q));
        if (i > offsets[q] && neighbors[i - 1] >= neighbors[i])
          throw std::invalid_argument("adjacency list " + std::to_string(q) +
                                      " is not strictly increasing");
      }
    }
    BipartiteGraph g;
    g.n_top_ = n_top;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    return g;
  }

  // Lists already strictly increasing (validated).
  static BipartiteGraph from_sorted(vertex_id n_top,
                                    const std::vector<std::vector<vertex_id>>& adj) {
    return from_csr(n_top, flat_offsets(adj), flat_neighbors(adj));
  }

  // Sorts each list and collapses duplicates.
  static BipartiteGraph from_lists(vertex_id n_top, std::vector<std::vector<vertex_id>> adj) {
    for (auto& list : adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return from_sorted(n_top, adj);
  }

  vertex_id n_top() const noexcept { return n_top_; }
  vertex_id n_bot() const noexcept { return static_cast<vertex_id>(offsets_.size() - 1); }
  std::uint64_t edge_count() const noexcept { return neighbors_.size(); }

  vertex_id degree(vertex_id q) const {
    return static_cast<vertex_id>(offsets_[q + 1] - offsets_[q]);
  }

  std::span<const vertex_id> neighbors(vertex_id q) const {
    return {neighbors_.data() + offsets_[q], offsets_[q + 1] - offsets_[q]};
  }

  // Roles exchanged: queries become data and vice versa. Involution.
  BipartiteGraph transposed() const {
    std::vector<std::uint64_t> off(static_cast<std::size_t>(n_top_) + 1, 0);
    for (vertex_id u : neighbors_) ++off[static_cast<std::size_t>(u) + 1];
    for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
    std::vector<vertex_id> nbr(neighbors_.size());
    std::vector<std::uint64_t> cursor(off.begin(), off.end() - 1);
    const vertex_id nb = n_bot();
    for (vertex_id q = 0; q < nb; ++q)
      for (vertex_id u : neighbors(q)) nbr[cursor[u]++] = q;  // q ascending keeps lists sorted
    BipartiteGraph g;
    g.n_top_ = nb;
    g.offsets_ = std::move(off);
    g.neighbors_ = std::move(nbr);
    return g;
  }

  // Relabels every vertex to its position under (pi, phi) and re-sorts the
  // lists; the edge multiset is preserved under the renaming.
  BipartiteGraph relabeled(const Ordering& pi, const Ordering& phi) const {
    if (pi.size() != n_top_ || phi.size() != n_bot())
      throw std::invalid_argument("ordering size does not match graph side");
    const vertex_id nb = n_bot();
    std::vector<std::uint64_t> off(static_cast<std::size_t>(nb) + 1, 0);
    for (vertex_id q = 0; q < nb; ++q)
      off[static_cast<std::size_t>(phi.position(q)) + 1] = degree(q);
    for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
    std::vector<vertex_id> nbr(neighbors_.size());
    for (vertex_id q = 0; q < nb; ++q) {
      std::uint64_t at = off[phi.position(q)];
      const std::uint64_t begin = at;
      for (vertex_id u : neighbors(q)) nbr[at++] = pi.position(u);
      std::sort(nbr.begin() + static_cast<std::ptrdiff_t>(begin),
                nbr.begin() + static_cast<std::ptrdiff_t>(at));
    }
    BipartiteGraph g;
    g.n_top_ = n_top_;
    g.offsets_ = std::move(off);
    g.neighbors_ = std::move(nbr);
    return g;
  }

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  static std::vector<std::uint64_t> flat_offsets(const std::vector<std::vector<vertex_id>>& adj) {
    std::vector<std::uint64_t> off(adj.size() + 1, 0);
    for (std::size_t q = 0; q < adj.size(); ++q) off[q + 1] = off[q] + adj[q].size();
    return off;
  }
  static std::vector<vertex_id> flat_neighbors(const std::vector<std::vector<vertex_id>>& adj) {
    std::vector<vertex_id> nbr;
    std::uint64_t total = 0;
    for (const auto& list : adj) total += list.size();
    nbr.reserve(total);
    for (const auto& list : adj) nbr.insert(nbr.end(), list.begin(), list.end());
    return nbr;
  }

  vertex_id n_top_ = 0;
  std::vector<std::uint64_t> offsets_{0};  // n_bot+1
  std::vector<vertex_id> neighbors_;       // ascending per list
};

}  // namespace bgc
