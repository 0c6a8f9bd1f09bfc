#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "bgc/rng.hpp"
#include "bgc/types.hpp"

namespace bgc {

// A bijection between the vertex ids of one side and the positions
// [0, n), kept in both directions: position(v) and vertex_at(p).
class Ordering {
 public:
  Ordering() = default;

  static Ordering identity(vertex_id n) {
    std::vector<vertex_id> perm(n);
    std::iota(perm.begin(), perm.end(), vertex_id{0});
    Ordering o;
    o.perm_ = perm;
    o.inv_ = std::move(perm);
    return o;
  }

  // Uniform random bijection, deterministic in the seed.
  static Ordering random(vertex_id n, std::uint64_t seed) {
    std::vector<vertex_id> inv(n);
    std::iota(inv.begin(), inv.end(), vertex_id{0});
    SplitMix64 rng(seed);
    shuffle_span(std::span<vertex_id>(inv), rng);
    return from_vertex_sequence(std::move(inv));
  }

  // positions[v] = position assigned to vertex v; must be a bijection.
  static Ordering from_positions(std::vector<vertex_id> positions) {
    const auto n = positions.size();
    std::vector<vertex_id> inv(n, invalid_vertex);
    for (std::size_t v = 0; v < n; ++v) {
      const vertex_id p = positions[v];
      if (p >= n || inv[p] != invalid_vertex)
        throw std::invalid_argument("ordering is not a bijection");
      inv[p] = static_cast<vertex_id>(v);
    }
    Ordering o;
    o.perm_ = std::move(positions);
    o.inv_ = std::move(inv);
    return o;
  }

  // vertices[p] = vertex placed at position p; must be a bijection.
  static Ordering from_vertex_sequence(std::vector<vertex_id> vertices) {
    const auto n = vertices.size();
    std::vector<vertex_id> perm(n, invalid_vertex);
    for (std::size_t p = 0; p < n; ++p) {
      const vertex_id v = vertices[p];
      if (v >= n || perm[v] != invalid_vertex)
        throw std::invalid_argument("ordering is not a bijection");
      perm[v] = static_cast<vertex_id>(p);
    }
    Ordering o;
    o.perm_ = std::move(perm);
    o.inv_ = std::move(vertices);
    return o;
  }

  vertex_id size() const noexcept { return static_cast<vertex_id>(perm_.size()); }
  vertex_id position(vertex_id v) const { return perm_[v]; }
  vertex_id vertex_at(vertex_id pos) const { return inv_[pos]; }

  std::span<const vertex_id> positions() const noexcept { return perm_; }
  std::span<const vertex_id> vertices_by_position() const noexcept { return inv_; }

  friend bool operator==(const Ordering&, const Ordering&) = default;

 private:
  std::vector<vertex_id> perm_;  // vertex -> position
  std::vector<vertex_id> inv_;   // position -> vertex
};

}  // namespace bgc
