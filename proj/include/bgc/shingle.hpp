#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "bgc/bipartite_graph.hpp"
#include "bgc/ordering.hpp"
#include "bgc/rng.hpp"
#include "bgc/types.hpp"

namespace bgc {

// Exact Jaccard index of two strictly increasing id lists. Both empty -> 0,
// so zero-degree vertices cluster together without attracting anything.
inline double jaccard(std::span<const vertex_id> a, std::span<const vertex_id> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

// Min-hash fingerprint of a neighborhood: the minimum of mix64(u ^ level_seed)
// over the neighbors u. Two neighborhoods collide on one level with
// probability equal to their Jaccard index. Empty neighborhoods carry the
// all-ones sentinel and sort last.
inline std::uint64_t neighborhood_shingle(std::span<const vertex_id> nbrs,
                                          std::uint64_t level_seed) {
  std::uint64_t best = ~std::uint64_t{0};
  for (vertex_id u : nbrs) best = std::min(best, mix64(static_cast<std::uint64_t>(u) ^ level_seed));
  return best;
}

struct Fingerprint {
  std::uint64_t shingle1;
  std::uint64_t shingle2;  // equals shingle1's sentinel story; unused when levels == 1
  vertex_id degree;
  vertex_id id;
};

struct SimRefParams {
  int levels = 2;                        // 1 or 2 hash levels
  vertex_id max_quadratic_bucket = 2048; // larger buckets switch to the degree window
  vertex_id degree_window = 64;          // candidates kept per step in window mode
};

// Per-bottom-vertex fingerprints; level seeds derive from the main seed.
inline std::vector<Fingerprint> fingerprints(const BipartiteGraph& g, std::uint64_t seed,
                                             int levels) {
  SplitMix64 rng(seed);
  const std::uint64_t s1 = rng.next();
  const std::uint64_t s2 = rng.next();
  const vertex_id nb = g.n_bot();
  std::vector<Fingerprint> fp(nb);
  for (vertex_id q = 0; q < nb; ++q) {
    const auto nbrs = g.neighbors(q);
    fp[q].shingle1 = neighborhood_shingle(nbrs, s1);
    fp[q].shingle2 = levels >= 2 ? neighborhood_shingle(nbrs, s2) : 0;
    fp[q].degree = g.degree(q);
    fp[q].id = q;
  }
  return fp;
}

namespace detail {

inline std::vector<Fingerprint> sorted_fingerprints(const BipartiteGraph& g, std::uint64_t seed,
                                                    int levels) {
  auto fp = fingerprints(g, seed, levels);
  std::sort(fp.begin(), fp.end(), [](const Fingerprint& a, const Fingerprint& b) {
    return std::tie(a.shingle1, a.shingle2, a.degree, a.id) <
           std::tie(b.shingle1, b.shingle2, b.degree, b.id);
  });
  return fp;
}

// Greedy chain over one bucket, in place: position i takes the unordered
// vertex most similar to the one at i-1, ties to the smallest current index.
inline void simref_bucket_quadratic(const BipartiteGraph& g, std::span<vertex_id> bucket) {
  for (std::size_t i = 1; i < bucket.size(); ++i) {
    const auto prev = g.neighbors(bucket[i - 1]);
    std::size_t best = i;
    double best_j = jaccard(prev, g.neighbors(bucket[i]));
    for (std::size_t j = i + 1; j < bucket.size(); ++j) {
      const double jj = jaccard(prev, g.neighbors(bucket[j]));
      if (jj > best_j) {
        best_j = jj;
        best = j;
      }
    }
    std::swap(bucket[i], bucket[best]);
  }
}

// Window variant for oversized buckets: each step considers only the
// `window` remaining vertices minimizing (|deg - deg(prev)|, deg, c-position),
// then picks the Jaccard argmax among them (ties to smallest c-position).
inline void simref_bucket_window(const BipartiteGraph& g, std::span<vertex_id> bucket,
                                 vertex_id window) {
  const std::size_t k = bucket.size();
  const std::vector<vertex_id> corder(bucket.begin(), bucket.end());
  std::set<std::pair<vertex_id, std::size_t>> remaining;  // (degree, c-position)
  for (std::size_t c = 1; c < k; ++c) remaining.emplace(g.degree(corder[c]), c);

  for (std::size_t i = 1; i < k; ++i) {
    const vertex_id target = g.degree(bucket[i - 1]);
    const auto prev = g.neighbors(bucket[i - 1]);

    // Gather up to `window` candidates by walking degree levels outward.
    std::vector<std::size_t> cand;
    auto right = remaining.lower_bound({target, 0});
    auto left = right;
    auto take_level = [&](std::set<std::pair<vertex_id, std::size_t>>::iterator run_begin,
                          vertex_id deg) {
      // run_begin points at the first entry of the degree run; entries within
      // a run come out in ascending c-position already.
      auto it = run_begin;
      while (it != remaining.end() && it->first == deg && cand.size() < window) {
        cand.push_back(it->second);
        ++it;
      }
      return it;
    };
    while (cand.size() < window && (left != remaining.begin() || right != remaining.end())) {
      const bool has_left = left != remaining.begin();
      const bool has_right = right != remaining.end();
      vertex_id dl = 0, dr = 0;
      if (has_left) dl = std::prev(left)->first;
      if (has_right) dr = right->first;
      const std::uint64_t gap_l = has_left ? static_cast<std::uint64_t>(target - dl) : ~0ull;
      const std::uint64_t gap_r = has_right ? static_cast<std::uint64_t>(dr - target) : ~0ull;
      if (gap_l <= gap_r) {
        // step left to the start of the dl run, then take it in c order
        auto run_begin = std::prev(left);
        while (run_begin != remaining.begin() && std::prev(run_begin)->first == dl) --run_begin;
        take_level(run_begin, dl);
        left = run_begin;
      } else {
        right = take_level(right, dr);
      }
    }

    // Exact argmax over the window; smaller c-position wins ties.
    std::sort(cand.begin(), cand.end());
    std::size_t best_c = cand.front();
    double best_j = -1.0;
    for (std::size_t c : cand) {
      const double jj = jaccard(prev, g.neighbors(corder[c]));
      if (jj > best_j) {
        best_j = jj;
        best_c = c;
      }
    }
    bucket[i] = corder[best_c];
    remaining.erase({g.degree(corder[best_c]), best_c});
  }
}

inline void simref_bucket(const BipartiteGraph& g, std::span<vertex_id> bucket,
                          const SimRefParams& params) {
  if (bucket.size() <= 1) return;
  if (bucket.size() <= params.max_quadratic_bucket)
    simref_bucket_quadratic(g, bucket);
  else
    simref_bucket_window(g, bucket, std::max<vertex_id>(1, params.degree_window));
}

}  // namespace detail

// Bottom vertices sorted by (shingle1[, shingle2], degree, id); vertices with
// similar neighborhoods land near each other with probability ~ Jaccard.
inline Ordering shingle_order(const BipartiteGraph& g, std::uint64_t seed, int levels = 2) {
  const auto fp = detail::sorted_fingerprints(g, seed, levels);
  std::vector<vertex_id> ids(fp.size());
  for (std::size_t p = 0; p < fp.size(); ++p) ids[p] = fp[p].id;
  return Ordering::from_vertex_sequence(std::move(ids));
}

// Shingle buckets (equal shingle1 runs) refined by a greedy similarity chain
// inside each bucket. The bucket multiset matches shingle_order exactly.
inline Ordering simref_order(const BipartiteGraph& g, std::uint64_t seed,
                             const SimRefParams& params = {}) {
  const auto fp = detail::sorted_fingerprints(g, seed, params.levels);
  std::vector<vertex_id> ids(fp.size());
  for (std::size_t p = 0; p < fp.size(); ++p) ids[p] = fp[p].id;
  std::size_t begin = 0;
  while (begin < ids.size()) {
    std::size_t end = begin + 1;
    while (end < ids.size() && fp[end].shingle1 == fp[begin].shingle1) ++end;
    detail::simref_bucket(g, std::span<vertex_id>(ids.data() + begin, end - begin), params);
    begin = end;
  }
  return Ordering::from_vertex_sequence(std::move(ids));
}

}  // namespace bgc
