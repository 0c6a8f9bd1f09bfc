#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "bgc/bipartite_graph.hpp"
#include "bgc/ordering.hpp"
#include "bgc/rng.hpp"
#include "bgc/types.hpp"

namespace bgc {

enum class Side { top, bottom };

struct RecBisParams {
  vertex_id leaf_size = 32;  // subsets at most this large keep their current order
  int max_passes = 10;       // refinement passes per bisection
  std::uint64_t seed = 0;
  bool swapflip = true;      // choose half order and flips at each node
  bool parallel = false;     // recurse the two halves concurrently
};

// Smallest/largest 1-based inner positions of one spanning query's neighbors
// in each half.
struct QueryBoundary {
  std::int64_t min1 = 0, max1 = 0, min2 = 0, max2 = 0;
};

struct SwapFlipChoice {
  bool swap = false;  // true: the second half precedes the first
  bool flip1 = false;
  bool flip2 = false;
};

// Gap between the two halves charged to one spanning query under a
// configuration: |V_first| + min_second - max_first. Flipping half i mirrors
// its positions, exchanging min/max as |V_i|+1-max and |V_i|+1-min.
// Always >= 1.
inline std::int64_t boundary_gap(const QueryBoundary& b, std::int64_t n1, std::int64_t n2,
                                 const SwapFlipChoice& c) {
  std::int64_t min1 = b.min1, max1 = b.max1, min2 = b.min2, max2 = b.max2;
  if (c.flip1) {
    const std::int64_t lo = n1 + 1 - max1, hi = n1 + 1 - min1;
    min1 = lo;
    max1 = hi;
  }
  if (c.flip2) {
    const std::int64_t lo = n2 + 1 - max2, hi = n2 + 1 - min2;
    min2 = lo;
    max2 = hi;
  }
  return c.swap ? n2 + min1 - max2 : n1 + min2 - max1;
}

inline double boundary_cost(std::span<const QueryBoundary> spanning, std::int64_t n1,
                            std::int64_t n2, const SwapFlipChoice& c) {
  double cost = 0.0;
  for (const QueryBoundary& b : spanning)
    cost += std::log2(static_cast<double>(boundary_gap(b, n1, n2, c)));
  return cost;
}

// Evaluates all 8 half-order/flip configurations on the spanning queries and
// returns the cheapest. Ties keep (V1 V2, no flips), then fewer flips.
inline SwapFlipChoice swap_flip_decide(std::int64_t n1, std::int64_t n2,
                                       std::span<const QueryBoundary> spanning) {
  static constexpr SwapFlipChoice preference[8] = {
      {false, false, false}, {true, false, false}, {false, false, true},
      {false, true, false},  {true, false, true},  {true, true, false},
      {false, true, true},   {true, true, true},
  };
  SwapFlipChoice best = preference[0];
  double best_cost = boundary_cost(spanning, n1, n2, best);
  for (int i = 1; i < 8; ++i) {
    const double cost = boundary_cost(spanning, n1, n2, preference[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = preference[i];
    }
  }
  return best;
}

namespace detail {

// Reordering works on an abstract instance: data vertices to be placed, each
// holding the list of (locally dense) query ids it belongs to, plus the
// reverse member lists. Covers top-side, bottom-side and union drivers.
struct ReorderInstance {
  vertex_id n_queries = 0;
  std::vector<std::uint64_t> off;   // n_data + 1
  std::vector<vertex_id> qids;
  std::vector<std::uint64_t> qoff;  // n_queries + 1
  std::vector<vertex_id> members;   // data indices per query

  vertex_id n_data() const { return static_cast<vertex_id>(off.size() - 1); }
  std::span<const vertex_id> queries_of(vertex_id d) const {
    return {qids.data() + off[d], off[d + 1] - off[d]};
  }
  std::span<const vertex_id> members_of(vertex_id q) const {
    return {members.data() + qoff[q], qoff[q + 1] - qoff[q]};
  }

  void build_members() {
    qoff.assign(static_cast<std::size_t>(n_queries) + 1, 0);
    for (vertex_id q : qids) ++qoff[static_cast<std::size_t>(q) + 1];
    for (std::size_t i = 1; i < qoff.size(); ++i) qoff[i] += qoff[i - 1];
    members.resize(qids.size());
    std::vector<std::uint64_t> cursor(qoff.begin(), qoff.end() - 1);
    const vertex_id nd = n_data();
    for (vertex_id d = 0; d < nd; ++d)
      for (vertex_id q : queries_of(d)) members[cursor[q]++] = d;
  }
};

inline ReorderInstance instance_for_side(const BipartiteGraph& g, Side side) {
  ReorderInstance inst;
  const BipartiteGraph* base = &g;
  BipartiteGraph t;
  if (side == Side::top) {
    t = g.transposed();  // data = top vertices, their query lists are bottom ids
    base = &t;
    inst.n_queries = g.n_bot();
  } else {
    inst.n_queries = g.n_top();
  }
  const vertex_id nd = base->n_bot();
  inst.off.assign(static_cast<std::size_t>(nd) + 1, 0);
  inst.qids.reserve(base->edge_count());
  for (vertex_id d = 0; d < nd; ++d) {
    const auto nbrs = base->neighbors(d);
    inst.qids.insert(inst.qids.end(), nbrs.begin(), nbrs.end());
    inst.off[static_cast<std::size_t>(d) + 1] = inst.qids.size();
  }
  inst.build_members();
  return inst;
}

// Union driver: both sides are data and both sides are queries; ids place the
// top side first. Every edge appears in both endpoint lists.
inline ReorderInstance instance_union(const BipartiteGraph& g) {
  const BipartiteGraph gt = g.transposed();
  const vertex_id nt = g.n_top(), nb = g.n_bot();
  ReorderInstance inst;
  inst.n_queries = nt + nb;
  inst.off.assign(static_cast<std::size_t>(nt) + nb + 1, 0);
  inst.qids.reserve(2 * g.edge_count());
  for (vertex_id u = 0; u < nt; ++u) {
    for (vertex_id q : gt.neighbors(u)) inst.qids.push_back(nt + q);
    inst.off[static_cast<std::size_t>(u) + 1] = inst.qids.size();
  }
  for (vertex_id q = 0; q < nb; ++q) {
    const auto nbrs = g.neighbors(q);
    inst.qids.insert(inst.qids.end(), nbrs.begin(), nbrs.end());
    inst.off[static_cast<std::size_t>(nt) + q + 1] = inst.qids.size();
  }
  inst.build_members();
  return inst;
}

// Sub-instance over the kept data vertices (given in their current order);
// queries are re-densified to the touched ones.
inline ReorderInstance filter_instance(const ReorderInstance& parent,
                                       std::span<const vertex_id> keep) {
  ReorderInstance inst;
  std::vector<vertex_id> qmap(parent.n_queries, invalid_vertex);
  inst.off.assign(keep.size() + 1, 0);
  inst.qids.reserve(parent.qids.size() / 2);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (vertex_id q : parent.queries_of(keep[i])) {
      if (qmap[q] == invalid_vertex) qmap[q] = inst.n_queries++;
      inst.qids.push_back(qmap[q]);
    }
    inst.off[i + 1] = inst.qids.size();
  }
  inst.build_members();
  return inst;
}

// One bisection with Fiduccia-Mattheyses-style refinement of the expected
// cost model. The model charges a query d_i * log2(n_i / d_i) per half it
// touches (neighbors assumed evenly spread over the half's n_i slots) plus
// log2(n1/(d1+1) + n2/(d2+1)) when it spans both halves. Half capacities are
// held fixed during a pass; only balanced prefixes are committed.
class Bisection {
 public:
  Bisection(const ReorderInstance& inst, std::uint64_t seed) : inst_(inst) {
    const vertex_id n = inst.n_data();
    cap1_ = (static_cast<std::int64_t>(n) + 1) / 2;
    cap2_ = static_cast<std::int64_t>(n) - cap1_;
    std::vector<vertex_id> ids(n);
    std::iota(ids.begin(), ids.end(), vertex_id{0});
    SplitMix64 rng(seed);
    shuffle_span(std::span<vertex_id>(ids), rng);
    side_.assign(n, 1);
    for (std::int64_t i = 0; i < cap1_; ++i) side_[ids[i]] = 0;
    n1_ = static_cast<vertex_id>(cap1_);
    n2_ = static_cast<vertex_id>(cap2_);
    deg1_.assign(inst.n_queries, 0);
    deg2_.assign(inst.n_queries, 0);
    for (vertex_id d = 0; d < n; ++d)
      for (vertex_id q : inst.queries_of(d)) (side_[d] == 0 ? deg1_[q] : deg2_[q])++;
  }

  double model_cost() const {
    double total = 0.0;
    for (vertex_id q = 0; q < inst_.n_queries; ++q) total += query_cost(deg1_[q], deg2_[q]);
    return total;
  }

  // One full pass: every vertex moves once (best verified gain first, from
  // the larger side, either side when balanced), then the best balanced
  // prefix is kept. Returns the committed gain, >= 0; the model cost never
  // increases across a pass.
  double run_pass() {
    const vertex_id n = inst_.n_data();
    if (n < 2) return 0.0;
    struct Entry {
      double gain;
      vertex_id v;
      std::uint64_t stamp;
    };
    struct Cmp {
      bool operator()(const Entry& a, const Entry& b) const {
        return a.gain < b.gain || (a.gain == b.gain && a.v > b.v);
      }
    };
    std::priority_queue<Entry, std::vector<Entry>, Cmp> heap[2];
    std::vector<double> gain(n);
    std::vector<std::uint64_t> stamp(n, 0);
    std::vector<std::uint8_t> locked(n, 0);
    std::uint64_t tick = 0;
    for (vertex_id v = 0; v < n; ++v) {
      gain[v] = move_gain(v);
      heap[side_[v]].push({gain[v], v, 0});
    }

    // Discards stale entries, re-checks drifted gains, and leaves the best
    // valid entry of side s on top.
    auto peek = [&](int s) -> std::optional<Entry> {
      while (!heap[s].empty()) {
        Entry e = heap[s].top();
        if (locked[e.v] || side_[e.v] != s || e.stamp != stamp[e.v]) {
          heap[s].pop();
          continue;
        }
        const double exact = move_gain(e.v);
        if (std::abs(exact - e.gain) > 1e-12) {
          heap[s].pop();
          gain[e.v] = exact;
          stamp[e.v] = ++tick;
          heap[s].push({exact, e.v, stamp[e.v]});
          continue;
        }
        return e;
      }
      return std::nullopt;
    };

    std::vector<vertex_id> moves;
    moves.reserve(n);
    double cum = 0.0, best_cum = 0.0;
    std::size_t best_len = 0;
    while (true) {
      std::optional<Entry> pick;
      if (n1_ > n2_) {
        pick = peek(0);
      } else if (n2_ > n1_) {
        pick = peek(1);
      } else {
        const auto a = peek(0), b = peek(1);
        if (a && b)
          pick = (b->gain > a->gain) ? b : a;  // ties stay on side 1 (first half)
        else
          pick = a ? a : b;
      }
      if (!pick) break;
      const vertex_id v = pick->v;
      locked[v] = 1;
      heap[side_[v]].pop();
      cum += pick->gain;
      move_and_update(v, locked, gain, stamp, tick, heap);
      moves.push_back(v);
      const std::int64_t diff = static_cast<std::int64_t>(n1_) - static_cast<std::int64_t>(n2_);
      if (std::abs(diff) <= 1 && cum > best_cum + 1e-9) {
        best_cum = cum;
        best_len = moves.size();
      }
    }
    for (std::size_t i = moves.size(); i-- > best_len;) move_back(moves[i]);
    return best_cum;
  }

  void run(int max_passes) {
    for (int pass = 0; pass < max_passes; ++pass)
      if (run_pass() <= 1e-9) break;
  }

  std::span<const std::uint8_t> sides() const { return side_; }
  vertex_id size1() const { return n1_; }
  vertex_id size2() const { return n2_; }

  // Exact decrease of the model if v switched sides right now.
  double move_gain(vertex_id v) const {
    double g = 0.0;
    const bool from1 = side_[v] == 0;
    for (vertex_id q : inst_.queries_of(v)) {
      const vertex_id d1 = deg1_[q], d2 = deg2_[q];
      g += query_cost(d1, d2) - (from1 ? query_cost(d1 - 1, d2 + 1) : query_cost(d1 + 1, d2 - 1));
    }
    return g;
  }

 private:
  double query_cost(vertex_id d1, vertex_id d2) const {
    double c = 0.0;
    if (d1 > 0) c += d1 * std::log2(static_cast<double>(cap1_) / d1);
    if (d2 > 0) c += d2 * std::log2(static_cast<double>(cap2_) / d2);
    if (d1 > 0 && d2 > 0)
      c += std::log2(static_cast<double>(cap1_) / (d1 + 1.0) +
                     static_cast<double>(cap2_) / (d2 + 1.0));
    return c;
  }

  template <class Heaps>
  void move_and_update(vertex_id v, const std::vector<std::uint8_t>& locked,
                       std::vector<double>& gain, std::vector<std::uint64_t>& stamp,
                       std::uint64_t& tick, Heaps& heap) {
    // Members of very heavy queries are refreshed lazily at pop time instead.
    constexpr std::size_t kUpdateFanoutCap = 1024;
    const bool from1 = side_[v] == 0;
    for (vertex_id q : inst_.queries_of(v)) {
      const vertex_id o1 = deg1_[q], o2 = deg2_[q];
      const vertex_id w1 = from1 ? o1 - 1 : o1 + 1;
      const vertex_id w2 = from1 ? o2 + 1 : o2 - 1;
      const auto mem = inst_.members_of(q);
      if (mem.size() <= kUpdateFanoutCap) {
        for (vertex_id u : mem) {
          if (u == v || locked[u]) continue;
          const bool u1 = side_[u] == 0;
          const double before =
              query_cost(o1, o2) - (u1 ? query_cost(o1 - 1, o2 + 1) : query_cost(o1 + 1, o2 - 1));
          const double after =
              query_cost(w1, w2) - (u1 ? query_cost(w1 - 1, w2 + 1) : query_cost(w1 + 1, w2 - 1));
          gain[u] += after - before;
          stamp[u] = ++tick;
          heap[side_[u]].push({gain[u], u, stamp[u]});
        }
      }
      deg1_[q] = w1;
      deg2_[q] = w2;
    }
    flip_side(v);
  }

  void move_back(vertex_id v) {
    const bool from1 = side_[v] == 0;
    for (vertex_id q : inst_.queries_of(v)) {
      deg1_[q] = from1 ? deg1_[q] - 1 : deg1_[q] + 1;
      deg2_[q] = from1 ? deg2_[q] + 1 : deg2_[q] - 1;
    }
    flip_side(v);
  }

  void flip_side(vertex_id v) {
    if (side_[v] == 0) {
      side_[v] = 1;
      --n1_;
      ++n2_;
    } else {
      side_[v] = 0;
      ++n1_;
      --n2_;
    }
  }

  const ReorderInstance& inst_;
  std::int64_t cap1_, cap2_;          // fixed model capacities
  std::vector<std::uint8_t> side_;    // 0 = first half
  std::vector<vertex_id> deg1_, deg2_;
  vertex_id n1_ = 0, n2_ = 0;
};

inline std::vector<vertex_id> recbis_solve(const ReorderInstance& inst, const RecBisParams& p,
                                           std::uint64_t task_seed, int depth) {
  const vertex_id n = inst.n_data();
  std::vector<vertex_id> order(n);
  std::iota(order.begin(), order.end(), vertex_id{0});
  if (n <= std::max<vertex_id>(p.leaf_size, 1)) return order;

  Bisection bisect(inst, task_seed);
  bisect.run(p.max_passes);
  const auto sides = bisect.sides();

  std::vector<vertex_id> keep1, keep2;
  keep1.reserve(bisect.size1());
  keep2.reserve(bisect.size2());
  for (vertex_id d = 0; d < n; ++d) (sides[d] == 0 ? keep1 : keep2).push_back(d);

  const ReorderInstance inst1 = filter_instance(inst, keep1);
  const ReorderInstance inst2 = filter_instance(inst, keep2);
  const std::uint64_t seed1 = mix64(task_seed ^ 0x517cc1b727220a95ULL);
  const std::uint64_t seed2 = mix64(task_seed ^ 0x6c62272e07bb0142ULL);

  std::vector<vertex_id> o1, o2;
  if (p.parallel && depth < 3) {
    auto f1 = std::async(std::launch::async,
                         [&] { return recbis_solve(inst1, p, seed1, depth + 1); });
    o2 = recbis_solve(inst2, p, seed2, depth + 1);
    o1 = f1.get();
  } else {
    o1 = recbis_solve(inst1, p, seed1, depth + 1);
    o2 = recbis_solve(inst2, p, seed2, depth + 1);
  }
  // back to parent-local data indices
  for (vertex_id& d : o1) d = keep1[d];
  for (vertex_id& d : o2) d = keep2[d];

  SwapFlipChoice choice;
  if (p.swapflip) {
    std::vector<vertex_id> zeta(n, 0);  // 1-based inner position within the half
    for (std::size_t i = 0; i < o1.size(); ++i) zeta[o1[i]] = static_cast<vertex_id>(i + 1);
    for (std::size_t i = 0; i < o2.size(); ++i) zeta[o2[i]] = static_cast<vertex_id>(i + 1);
    std::vector<QueryBoundary> spanning;
    for (vertex_id q = 0; q < inst.n_queries; ++q) {
      QueryBoundary b;
      bool in1 = false, in2 = false;
      for (vertex_id d : inst.members_of(q)) {
        const std::int64_t z = zeta[d];
        if (sides[d] == 0) {
          b.min1 = in1 ? std::min(b.min1, z) : z;
          b.max1 = in1 ? std::max(b.max1, z) : z;
          in1 = true;
        } else {
          b.min2 = in2 ? std::min(b.min2, z) : z;
          b.max2 = in2 ? std::max(b.max2, z) : z;
          in2 = true;
        }
      }
      if (in1 && in2) spanning.push_back(b);
    }
    choice = swap_flip_decide(static_cast<std::int64_t>(o1.size()),
                              static_cast<std::int64_t>(o2.size()), spanning);
  }

  if (choice.flip1) std::reverse(o1.begin(), o1.end());
  if (choice.flip2) std::reverse(o2.begin(), o2.end());
  std::vector<vertex_id>& first = choice.swap ? o2 : o1;
  std::vector<vertex_id>& second = choice.swap ? o1 : o2;
  first.insert(first.end(), second.begin(), second.end());
  return std::move(first);
}

}  // namespace detail

// Recursive bisection ordering of one side; the other side supplies the
// queries whose gaps the expected-cost model shrinks.
inline Ordering recbis_order(const BipartiteGraph& g, Side side, const RecBisParams& p = {}) {
  const auto inst = detail::instance_for_side(g, side);
  auto order = detail::recbis_solve(inst, p, mix64(p.seed ^ 0x2545f4914f6cdd1dULL), 0);
  return Ordering::from_vertex_sequence(std::move(order));
}

// Both sides ordered together as one vertex set, then the single ordering is
// projected to per-side orderings by relative rank.
inline std::pair<Ordering, Ordering> recbis_unipartite(const BipartiteGraph& g,
                                                       const RecBisParams& p = {}) {
  const auto inst = detail::instance_union(g);
  const auto order = detail::recbis_solve(inst, p, mix64(p.seed ^ 0x2545f4914f6cdd1dULL), 0);
  std::vector<vertex_id> top_seq, bot_seq;
  top_seq.reserve(g.n_top());
  bot_seq.reserve(g.n_bot());
  for (vertex_id u : order) {
    if (u < g.n_top())
      top_seq.push_back(u);
    else
      bot_seq.push_back(u - g.n_top());
  }
  return {Ordering::from_vertex_sequence(std::move(top_seq)),
          Ordering::from_vertex_sequence(std::move(bot_seq))};
}

}  // namespace bgc
