#include "fillvol/cayley.hpp"

#include "fillvol/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace fillvol {

namespace {

int chain_length(const IntegralChain& c) {
  std::int64_t total = 0;
  for (const auto& [e, coeff] : c.terms) total += coeff < 0 ? -coeff : coeff;
  return static_cast<int>(total);
}

class CycleSearch {
 public:
  CycleSearch(const CayleyBall& b, int max_length, bool lazy_rooted)
      : b_(b), max_length_(max_length), lazy_rooted_(lazy_rooted),
        buckets_(static_cast<std::size_t>(std::max(max_length, 0) + 1)) {}

  /// Cycles whose vertices other than `start` all satisfy allowed(v).
  template <typename Distance, typename Allowed>
  void from(Index start, const Distance& dist, const Allowed& allowed, int full_depth) {
    start_ = start;
    on_path_.clear();
    on_path_.insert(start);
    path_.clear();
    extend(start, dist, allowed, full_depth);
  }

  std::vector<IntegralChain> take() {
    std::vector<IntegralChain> out;
    for (auto& bucket : buckets_)
      for (auto& c : bucket) out.push_back(std::move(c));
    return out;
  }

 private:
  template <typename Distance, typename Allowed>
  void extend(Index v, const Distance& dist, const Allowed& allowed, int full_depth) {
    const int used = static_cast<int>(path_.size());
    if (used >= max_length_) return;
    // vertices beyond the fully expanded layers only need their edges back
    // towards the root, and those were recorded while expanding
    const bool expand = !lazy_rooted_ || dist(v) < full_depth;
    const auto nbrs = expand ? b_.adjacency(v) : b_.known_adjacency(v);
    for (const auto& a : nbrs) {
      if (a.neighbor == start_) {
        path_.push_back(a);
        record();
        path_.pop_back();
        continue;
      }
      if (on_path_.contains(a.neighbor) || !allowed(a.neighbor)) continue;
      if (used + 1 + dist(a.neighbor) > max_length_) continue;
      path_.push_back(a);
      on_path_.insert(a.neighbor);
      extend(a.neighbor, dist, allowed, full_depth);
      on_path_.erase(a.neighbor);
      path_.pop_back();
    }
  }

  void record() {
    std::vector<std::pair<Index, std::int64_t>> terms;
    for (const auto& a : path_) terms.emplace_back(a.edge, a.direction);
    auto chain = make_chain<std::int64_t>(1, std::move(terms));
    // a digon walked out and back along one edge cancels
    if (chain_length(chain) != static_cast<int>(path_.size())) return;
    buckets_[path_.size()].push_back(std::move(chain));
  }

  const CayleyBall& b_;
  int max_length_;
  bool lazy_rooted_;
  Index start_ = 0;
  std::set<Index> on_path_;
  std::vector<Adjacent> path_;
  std::vector<std::vector<IntegralChain>> buckets_;
};

std::vector<int> bfs_distances(const CayleyBall& b, Index source) {
  std::vector<int> dist(static_cast<std::size_t>(b.vertex_count()), -1);
  dist[static_cast<std::size_t>(source)] = 0;
  std::deque<Index> queue{source};
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (const auto& a : b.known_adjacency(v)) {
      if (dist[static_cast<std::size_t>(a.neighbor)] >= 0) continue;
      dist[static_cast<std::size_t>(a.neighbor)] = dist[static_cast<std::size_t>(v)] + 1;
      queue.push_back(a.neighbor);
    }
  }
  return dist;
}

}  // namespace

std::vector<IntegralChain> simple_cycles(const CayleyBall& b, int max_length, bool rooted) {
  if (max_length <= 0) return {};
  if (rooted) {
    const bool lazy = !b.complete();
    const int h = (max_length + 1) / 2;
    if (lazy) b.materialize_layers(h);
    CycleSearch search(b, max_length, lazy);
    // unknown distances exceed the materialized depth
    const auto dist = [&](Index v) { return b.distance(v).value_or(lazy ? h + 1 : max_length + 1); };
    search.from(b.root(), dist, [](Index) { return true; }, h);
    return search.take();
  }
  if (!b.complete()) throw InvalidArgument("cycle search over a whole ball needs a complete complex");
  CycleSearch search(b, max_length, false);
  for (Index s = 0; s < b.vertex_count(); ++s) {
    const auto d = bfs_distances(b, s);
    const auto dist = [&](Index v) {
      const int x = d[static_cast<std::size_t>(v)];
      return x < 0 ? max_length + 1 : x;
    };
    search.from(s, dist, [s](Index v) { return v > s; }, 0);
  }
  return search.take();
}

void for_each_conformal_sum(const std::vector<IntegralChain>& cycles, int max_length, const ConformalVisitor& visit) {
  std::vector<int> lengths;
  for (const auto& c : cycles) lengths.push_back(chain_length(c));
  std::unordered_map<Index, std::int64_t> sum;
  std::vector<std::size_t> members;
  int total = 0;

  auto conformal = [&](const IntegralChain& c) {
    for (const auto& [e, coeff] : c.terms) {
      const auto it = sum.find(e);
      if (it != sum.end() && (it->second > 0) != (coeff > 0)) return false;
    }
    return true;
  };
  auto apply = [&](const IntegralChain& c, int sign) {
    for (const auto& [e, coeff] : c.terms) {
      auto& slot = sum[e];
      slot += sign * coeff;
      if (slot == 0) sum.erase(e);
    }
  };

  auto recurse = [&](auto&& self, std::size_t first) -> void {
    for (std::size_t i = first; i < cycles.size(); ++i) {
      if (total + lengths[i] > max_length) break;  // sorted by length
      if (!conformal(cycles[i])) continue;
      apply(cycles[i], 1);
      total += lengths[i];
      members.push_back(i);
      bool descend = true;
      if (members.size() >= 2) {
        std::vector<std::pair<Index, std::int64_t>> terms(sum.begin(), sum.end());
        descend = visit(make_chain<std::int64_t>(1, std::move(terms)), total, members);
      }
      if (descend) self(self, i);
      members.pop_back();
      total -= lengths[i];
      apply(cycles[i], -1);
    }
  };
  recurse(recurse, 0);
}

std::vector<IntegralChain> enumerate_integral_cycles(const IntegralCycleLattice& lattice, int k,
                                                     const CycleEnumerationLimits& limits) {
  if (k < 0) throw InvalidArgument("k must be non-negative");
  std::vector<IntegralChain> out{IntegralChain{}};
  if (lattice.rank() == 0 || lattice.complex == nullptr) return out;
  const std::int64_t scale = std::max<std::int64_t>(lattice.scale, 1);
  const int reach = static_cast<int>(k / scale);

  const auto singles = simple_cycles(*lattice.complex, reach);
  std::set<std::vector<std::pair<Index, std::int64_t>>> seen;
  auto keep = [&](const IntegralChain& c) {
    if (!seen.insert(c.terms).second) return;
    if (seen.size() + 1 > limits.max_cycles) {
      throw Overflow("cycle enumeration exceeded " + std::to_string(limits.max_cycles) + " cycles");
    }
  };
  for (const auto& c : singles) keep(c);
  for_each_conformal_sum(singles, reach, [&](const IntegralChain& sum, int, const std::vector<std::size_t>&) {
    keep(sum);
    return true;
  });

  std::vector<IntegralChain> found;
  for (const auto& terms : seen) found.push_back(fillvol::scale(IntegralChain{1, terms}, scale));
  std::stable_sort(found.begin(), found.end(),
                   [](const IntegralChain& x, const IntegralChain& y) { return chain_length(x) < chain_length(y); });
  out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  return out;
}

}  // namespace fillvol
