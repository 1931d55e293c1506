#include "fillvol/filling.hpp"

#include "fillvol/error.hpp"
#include "fillvol/exactopt.hpp"
#include "fillvol/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace fillvol {

std::string to_string(FillStatus s) {
  switch (s) {
    case FillStatus::Filled: return "Filled";
    case FillStatus::Unfillable: return "Unfillable";
    case FillStatus::BoundExhausted: return "BoundExhausted";
  }
  return "?";
}

std::string to_string(LinearityVerdict v) {
  switch (v) {
    case LinearityVerdict::ConsistentWithLinear: return "ConsistentWithLinear";
    case LinearityVerdict::Superlinear: return "Superlinear";
    case LinearityVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

using CellKey = std::vector<std::pair<EdgeKey, std::int64_t>>;

// d2 x = gamma over a growing patch P of cells. Each solve also admits the
// frontier F (cells outside P meeting an edge of P) but constrains only the
// edges of P and gamma. Every filling of gamma restricts to a solution of this
// system, so it is a relaxation; a solution supported on P is therefore
// optimal over the whole ball, and an infeasibility certificate on the edges
// of P holds for every cell. Used frontier cells join P and the solve repeats.
// LP columns and rows follow cell and edge keys; branching variables are
// numbered in the order cells join P. Both orders are independent of how the
// ball was materialized, which keeps results reproducible under concurrency.
class FillingProblem {
 public:
  FillingProblem(const CayleyBall& b, const IntegralChain& gamma) : b_(b) {
    for (const auto& [e, coeff] : gamma.terms) gamma_[e] = coeff;
    std::vector<Index> start;
    for (const auto& [e, coeff] : gamma.terms)
      for (const Index c : b_.cells_on_edge(e)) start.push_back(c);
    add_cells(start);
  }

  [[nodiscard]] Index variable_count() const { return static_cast<Index>(cells_by_var_.size()); }

  /// LP optimum (or infeasibility) valid over every cell of the ball.
  /// Bounds and the returned witness use variable numbers.
  SolveResult relax(const std::vector<VarBound>& bounds) {
    for (;;) {
      build();
      std::vector<VarBound> mapped = bounds;
      for (auto& bd : mapped) bd.var = column_of_.at(cells_by_var_[static_cast<std::size_t>(bd.var)]);
      SolveResult res = l1_min_bounded(a_, rhs_, mapped);
      res.dual = res.dual.head(static_cast<Index>(rows_.size())).eval();
      if (!res.optimal()) return res;
      if (!grow(res.witness)) {
        VectorQ by_var = VectorQ::Zero(variable_count());
        for (std::size_t j = 0; j < patch_.size(); ++j)
          by_var(var_of_.at(patch_[j])) = res.witness(static_cast<Index>(j));
        res.witness = std::move(by_var);
        return res;
      }
    }
  }

  /// Solvability of d2 x = gamma over a ring, valid over every cell.
  lattice::RingSolve ring_solve(const lattice::RingMembership& in_ring) {
    for (;;) {
      build();
      const MatrixZ az = a_.unaryExpr([](const Rational& q) { return Integer(numerator_of(q)); });
      auto res = lattice::solve_in_ring(az, rhs_, in_ring);
      if (res.status != lattice::RingSolve::Status::Solvable || !grow(res.solution)) return res;
    }
  }

  [[nodiscard]] Chain chain(const VectorQ& by_var) const {
    std::vector<std::pair<Index, Rational>> terms;
    for (Index v = 0; v < by_var.size(); ++v)
      if (by_var(v) != 0) terms.emplace_back(cells_by_var_[static_cast<std::size_t>(v)], by_var(v));
    return make_chain<Rational>(2, std::move(terms));
  }

  [[nodiscard]] std::vector<std::pair<Index, Rational>> over_edges(const VectorQ& y) const {
    std::vector<std::pair<Index, Rational>> out;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (y(static_cast<Index>(r)) != 0) out.emplace_back(rows_[r], y(static_cast<Index>(r)));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const CellKey& key(Index c) {
    auto it = keys_.find(c);
    if (it == keys_.end()) it = keys_.emplace(c, b_.cell_key(c)).first;
    return it->second;
  }

  void add_cells(const std::vector<Index>& cells) {
    for (const Index c : cells) {
      if (var_of_.contains(c)) continue;
      var_of_.emplace(c, static_cast<Index>(cells_by_var_.size()));
      cells_by_var_.push_back(c);
      key(c);
      patch_.push_back(c);
      dirty_ = true;
    }
    std::sort(patch_.begin(), patch_.end(), [&](Index x, Index y) { return keys_.at(x) < keys_.at(y); });
  }

  /// Moves the frontier cells used by a solution into the patch.
  bool grow(const VectorQ& solution) {
    std::vector<Index> used;
    for (std::size_t j = 0; j < frontier_.size(); ++j)
      if (solution(static_cast<Index>(patch_.size() + j)) != 0) used.push_back(frontier_[j]);
    if (used.empty()) return false;
    add_cells(used);
    return true;
  }

  void build() {
    if (!dirty_) return;
    std::set<Index> edges;
    for (const auto& [e, coeff] : gamma_) edges.insert(e);
    for (const Index c : patch_)
      for (const auto& [e, coeff] : b_.cell(c).boundary.terms) edges.insert(e);
    std::vector<std::pair<EdgeKey, Index>> keyed;
    for (const Index e : edges) keyed.emplace_back(b_.edge_key(e), e);
    std::sort(keyed.begin(), keyed.end());
    rows_.clear();
    row_of_.clear();
    for (const auto& [k, e] : keyed) {
      row_of_.emplace(e, static_cast<Index>(rows_.size()));
      rows_.push_back(e);
    }

    std::set<Index> outside;
    for (const Index e : rows_)
      for (const Index c : b_.cells_on_edge(e))
        if (!var_of_.contains(c)) outside.insert(c);
    frontier_.assign(outside.begin(), outside.end());
    for (const Index c : frontier_) key(c);
    std::sort(frontier_.begin(), frontier_.end(), [&](Index x, Index y) { return keys_.at(x) < keys_.at(y); });

    column_of_.clear();
    const Index p = static_cast<Index>(patch_.size());
    a_ = MatrixQ::Zero(static_cast<Index>(rows_.size()), p + static_cast<Index>(frontier_.size()));
    auto fill_column = [&](Index c, Index j) {
      for (const auto& [e, coeff] : b_.cell(c).boundary.terms) {
        const auto it = row_of_.find(e);
        if (it != row_of_.end()) a_(it->second, j) += coeff;
      }
    };
    for (Index j = 0; j < p; ++j) {
      column_of_.emplace(patch_[static_cast<std::size_t>(j)], j);
      fill_column(patch_[static_cast<std::size_t>(j)], j);
    }
    for (std::size_t j = 0; j < frontier_.size(); ++j) fill_column(frontier_[j], p + static_cast<Index>(j));
    rhs_ = VectorQ::Zero(static_cast<Index>(rows_.size()));
    for (const auto& [e, coeff] : gamma_) rhs_(row_of_.at(e)) = coeff;
    dirty_ = false;
  }

  const CayleyBall& b_;
  std::map<Index, std::int64_t> gamma_;
  std::vector<Index> patch_;     // in key order
  std::vector<Index> frontier_;  // in key order
  std::unordered_map<Index, CellKey> keys_;
  std::unordered_map<Index, Index> var_of_;
  std::vector<Index> cells_by_var_;
  std::vector<Index> rows_;  // in key order
  std::unordered_map<Index, Index> row_of_;
  std::unordered_map<Index, Index> column_of_;
  MatrixQ a_;
  VectorQ rhs_;
  bool dirty_ = true;
};

void check_cycle(const CayleyBall& b, const IntegralChain& gamma) {
  const Index edges = b.edge_count();
  for (const auto& [e, coeff] : gamma.terms)
    if (e < 0 || e >= edges) throw InvalidArgument("edge index " + std::to_string(e) + " is not in the complex");
  if (!boundary_of_edges(b, gamma).empty()) throw InvalidArgument("chain is not a cycle");
}

void verify_filling(const CayleyBall& b, const IntegralChain& gamma, const Chain& witness) {
  std::map<Index, Rational> image;
  for (const auto& [c, x] : witness.terms)
    for (const auto& [e, coeff] : b.cell(c).boundary.terms) image[e] += x * coeff;
  std::erase_if(image, [](const auto& kv) { return kv.second == 0; });
  std::map<Index, Rational> want;
  for (const auto& [e, coeff] : gamma.terms) want[e] = coeff;
  if (image != want) throw std::logic_error("filling witness does not bound the cycle");
}

FillResult unfillable(const CoefficientRing& ring, std::vector<std::pair<Index, Rational>> certificate) {
  FillResult r;
  r.status = FillStatus::Unfillable;
  r.exact = true;
  r.ring = ring;
  r.certificate = std::move(certificate);
  return r;
}

/// Minimal integral filling; the rational root is solved first.
FillResult integral_fill(const CayleyBall& b, const IntegralChain& gamma) {
  const auto z = CoefficientRing::integers();
  FillingProblem problem(b, gamma);
  const SolveResult root = problem.relax({});
  if (!root.optimal()) return unfillable(z, problem.over_edges(root.dual));
  const bool integral_root =
      std::all_of(root.witness.begin(), root.witness.end(), [](const Rational& q) { return is_integral(q); });
  const auto lattice_check = integral_root ? lattice::RingSolve{lattice::RingSolve::Status::Solvable, {}, {}}
                                           : problem.ring_solve([](const Rational& q) { return is_integral(q); });
  if (lattice_check.status == lattice::RingSolve::Status::NotInRing) {
    auto r = unfillable(z, problem.over_edges(lattice_check.certificate));
    r.lower_bound = root.value;
    return r;
  }
  FillResult r;
  r.ring = z;
  r.exact = true;
  r.lower_bound = root.value;
  BranchOptions options;
  options.depth_cap = 10 * static_cast<std::size_t>(std::max<Index>(problem.variable_count(), 1));
  const SolveResult best = branch_and_bound(
      [&](const std::vector<VarBound>& bounds) { return bounds.empty() ? root : problem.relax(bounds); },
      problem.variable_count(), options);
  if (!best.optimal()) throw std::logic_error("integral filling: lattice-solvable system has no integral optimum");
  r.value = best.value;
  r.witness = problem.chain(best.witness);
  return r;
}

}  // namespace

FillResult fill_over(const CayleyBall& b, const IntegralChain& gamma, const CoefficientRing& ring,
                     std::int64_t search_bound) {
  if (search_bound < 0) throw InvalidArgument("search bound must be non-negative");
  check_cycle(b, gamma);
  FillResult out;
  out.ring = ring;
  out.search_bound = search_bound;
  if (gamma.empty()) {
    out.value = Rational(0);
    out.lower_bound = Rational(0);
    out.witness.degree = 2;
    out.exact = true;
    return out;
  }

  switch (ring.kind()) {
    case CoefficientRing::Kind::Rationals: {
      FillingProblem problem(b, gamma);
      const SolveResult r = problem.relax({});
      if (!r.optimal()) {
        out = unfillable(ring, problem.over_edges(r.dual));
        break;
      }
      out.value = r.value;
      out.lower_bound = r.value;
      out.witness = problem.chain(r.witness);
      out.exact = true;
      break;
    }
    case CoefficientRing::Kind::Integers:
      out = integral_fill(b, gamma);
      break;
    case CoefficientRing::Kind::Localization: {
      FillingProblem problem(b, gamma);
      const SolveResult r = problem.relax({});
      if (!r.optimal()) {
        out = unfillable(ring, problem.over_edges(r.dual));
        break;
      }
      out.lower_bound = r.value;
      const auto check = problem.ring_solve([&](const Rational& q) { return ring.contains(q); });
      if (check.status == lattice::RingSolve::Status::NotInRing) {
        out = unfillable(ring, problem.over_edges(check.certificate));
        out.lower_bound = r.value;
        break;
      }
      for (const std::int64_t m : ring.units_up_to(search_bound)) {
        const FillResult fz = integral_fill(b, scale(gamma, m));
        if (!fz.filled()) continue;
        const Rational candidate = *fz.value / m;
        if (!out.value || candidate < *out.value) {
          out.value = candidate;
          out.scale = m;
          std::vector<std::pair<Index, Rational>> terms;
          for (const auto& [c, x] : fz.witness.terms) terms.emplace_back(c, x / m);
          out.witness = make_chain<Rational>(2, std::move(terms));
        }
        if (*out.value == r.value) break;
      }
      if (!out.value) {
        out.status = FillStatus::BoundExhausted;
        out.exact = false;
      } else {
        out.exact = *out.value == r.value;
      }
      break;
    }
  }
  out.ring = ring;
  out.search_bound = search_bound;
  if (out.filled()) verify_filling(b, gamma, out.witness);
  return out;
}

namespace {

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FILLVOL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename F>
void parallel_for(std::size_t n, unsigned threads, const F& f) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          // report the failure of the earliest item, independent of scheduling
          std::lock_guard lock(error_mutex);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// nullopt stands for infinity.
using Extended = std::optional<Rational>;

bool less(const Extended& x, const Extended& y) {
  if (!y) return x.has_value();
  return x && *x < *y;
}

Extended add(const Extended& x, const Extended& y) {
  if (!x || !y) return std::nullopt;
  return *x + *y;
}

bool touches_ball_boundary(const CayleyBall& b, const Chain& witness) {
  const int limit = b.radius() - 1;
  for (const auto& [c, x] : witness.terms) {
    for (const auto& [e, coeff] : b.cell(c).boundary.terms) {
      const auto edge = b.edge(e);
      if (b.vertex_depth(edge.source) >= limit || b.vertex_depth(edge.target) >= limit) return true;
    }
  }
  return false;
}

int length_of(const IntegralChain& c) {
  std::int64_t total = 0;
  for (const auto& [e, x] : c.terms) total += x < 0 ? -x : x;
  return static_cast<int>(total);
}

}  // namespace

FVTable fv2_estimate(const CayleyBall& b, int k_max, const CoefficientRing& ring, const FVOptions& options) {
  if (k_max < 0) throw InvalidArgument("k_max must be non-negative");
  if (options.lattice_scale < 1) throw InvalidArgument("lattice scale must be positive");
  const std::int64_t m = options.lattice_scale;
  const int reach = static_cast<int>(k_max / m);
  const unsigned threads = thread_count(options.threads);

  if (options.scope == CycleScope::All && !b.complete()) b.materialize_all();
  const auto singles = simple_cycles(b, reach, options.scope == CycleScope::Rooted);

  auto evaluate = [&](const std::vector<IntegralChain>& cycles) {
    std::vector<FillResult> results(cycles.size());
    parallel_for(cycles.size(), threads,
                 [&](std::size_t i) { results[i] = fill_over(b, scale(cycles[i], m), ring, options.search_bound); });
    return results;
  };
  auto value_of = [](const FillResult& r) -> Extended { return r.filled() ? r.value : std::nullopt; };

  const auto single_results = evaluate(singles);

  // best single value among cycles of length <= L
  std::vector<Extended> best_upto(static_cast<std::size_t>(reach + 1), Rational(0));
  for (std::size_t i = 0; i < singles.size(); ++i) {
    const auto len = static_cast<std::size_t>(length_of(singles[i]));
    if (less(best_upto[len], value_of(single_results[i]))) best_upto[len] = value_of(single_results[i]);
  }
  for (std::size_t L = 1; L < best_upto.size(); ++L)
    if (less(best_upto[L], best_upto[L - 1])) best_upto[L] = best_upto[L - 1];

  // sums of cycles: subadditivity bounds their fillings over Z and Q
  const bool subadditive = ring.kind() != CoefficientRing::Kind::Localization;
  std::vector<Extended> knapsack(static_cast<std::size_t>(reach + 1), Rational(0));
  for (int r = 1; r <= reach; ++r) {
    auto& slot = knapsack[static_cast<std::size_t>(r)];
    slot = knapsack[static_cast<std::size_t>(r - 1)];
    for (std::size_t i = 0; i < singles.size(); ++i) {
      const int len = length_of(singles[i]);
      if (len > r) continue;
      const Extended v = add(knapsack[static_cast<std::size_t>(r - len)], value_of(single_results[i]));
      if (less(slot, v)) slot = v;
    }
  }

  std::vector<IntegralChain> sums;
  std::set<std::vector<std::pair<Index, std::int64_t>>> seen;
  const auto visit = [&](const IntegralChain& sum, int length, const std::vector<std::size_t>& members) {
    Extended bound = Rational(0);
    for (const auto i : members) bound = add(bound, value_of(single_results[i]));
    const auto L = static_cast<std::size_t>(length);
    if (!subadditive || less(best_upto[L], bound)) {
      if (seen.insert(sum.terms).second) sums.push_back(sum);
    }
    if (!subadditive) return true;
    for (int extra = 1; length + extra <= reach; ++extra) {
      if (less(best_upto[L + static_cast<std::size_t>(extra)], add(bound, knapsack[static_cast<std::size_t>(extra)]))) {
        return true;
      }
    }
    return false;
  };
  for_each_conformal_sum(singles, reach, visit);
  const auto sum_results = evaluate(sums);

  FVTable table;
  table.radius = b.radius();
  table.ring = ring;
  table.scope = options.scope;
  table.lattice_scale = m;
  table.cycles_evaluated = singles.size() + sums.size();

  struct Evaluated {
    const IntegralChain* cycle;
    const FillResult* fill;
    int l1;
  };
  std::vector<Evaluated> all;
  for (std::size_t i = 0; i < singles.size(); ++i)
    all.push_back({&singles[i], &single_results[i], static_cast<int>(m) * length_of(singles[i])});
  for (std::size_t i = 0; i < sums.size(); ++i)
    all.push_back({&sums[i], &sum_results[i], static_cast<int>(m) * length_of(sums[i])});

  const bool cayley = b.is_cayley();
  for (int k = 0; k <= k_max; ++k) {
    FVEntry entry;
    entry.k = k;
    entry.value = Rational(0);
    entry.witness_cycle.degree = 1;
    const Evaluated* arg = nullptr;
    for (const auto& ev : all) {
      if (ev.l1 > k) continue;
      entry.exact = entry.exact && ev.fill->exact;
      const Extended v = value_of(*ev.fill);
      if (less(entry.value, v)) {
        entry.value = v;
        arg = &ev;
      }
    }
    if (arg != nullptr) {
      entry.witness_cycle = scale(*arg->cycle, m);
      if (cayley) entry.ball_limited = !entry.value || touches_ball_boundary(b, arg->fill->witness);
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

RemarkRow rational_cycle_demo(int n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  const auto p = parse_presentation("gens: x y\nrels: x y X Y\n");
  const auto ball = CayleyBall::lazy(p, NormalFormStrategy::abelian(), 2 * n + 1);
  std::vector<Letter> letters;
  for (const Letter l : {1, 2, -1, -2}) letters.insert(letters.end(), static_cast<std::size_t>(n), l);
  const IntegralChain loop = path_chain(ball, GroupWord(letters));
  const Rational weight(1, 4 * n);
  const FillResult fill = fill_over(ball, loop, CoefficientRing::rationals());
  if (!fill.filled()) throw std::logic_error("commutator loop has no rational filling");
  // filling is homogeneous: fill(q gamma) = |q| fill(gamma)
  return {n, weight * l1_norm(loop), weight * *fill.value};
}

PreceqResult preceq_witness(const std::vector<Sample>& f, const std::vector<Sample>& g, int c_max,
                            Extension extension) {
  std::map<int, Extended> gs;
  for (const auto& [k, v] : g) gs[k] = v;
  PreceqResult out;
  auto g_at = [&](long x) -> Extended {
    if (gs.empty()) {
      out.range_limited = true;
      return Rational(0);
    }
    if (x > gs.rbegin()->first) {
      out.range_limited = true;
      return extension == Extension::LastValue ? gs.rbegin()->second : Extended(Rational(0));
    }
    auto it = gs.upper_bound(static_cast<int>(x));
    if (it == gs.begin()) return Rational(0);
    return std::prev(it)->second;
  };
  for (int c = 1; c <= c_max; ++c) {
    bool ok = true;
    for (const auto& [k, fv] : f) {
      const long x = static_cast<long>(c) * k + c;
      const Extended gv = g_at(x);
      const Extended rhs = gv ? Extended(Rational(c) * *gv + Rational(x)) : std::nullopt;
      if (less(rhs, fv)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.constant = c;
      return out;
    }
  }
  return out;
}

std::vector<Sample> samples(const FVTable& t) {
  std::vector<Sample> out;
  for (const auto& e : t.entries) out.emplace_back(e.k, e.value);
  return out;
}

LinearityReport linearity_probe(const FVTable& t) {
  LinearityReport report;
  std::vector<std::pair<int, Rational>> points;
  bool infinite = false;
  for (const auto& e : t.entries) {
    if (e.k <= 0) continue;
    if (!e.value) {
      infinite = true;
      continue;
    }
    points.emplace_back(e.k, *e.value);
    const Rational ratio = *e.value / e.k;
    if (ratio > report.slope_bound) report.slope_bound = ratio;
  }
  if (infinite || points.size() < 3) return report;

  std::vector<std::pair<int, Rational>> rises;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (i == 0 ? points[i].second > 0 : points[i].second > points[i - 1].second) rises.push_back(points[i]);
  if (rises.size() >= 3) {
    const auto& [k1, v1] = rises[rises.size() - 3];
    const auto& [k2, v2] = rises[rises.size() - 2];
    const auto& [k3, v3] = rises[rises.size() - 1];
    const bool ratios_rise = v1 / k1 < v2 / k2 && v2 / k2 < v3 / k3;
    const bool slopes_rise = (v2 - v1) / (k2 - k1) < (v3 - v2) / (k3 - k2);
    if (ratios_rise && slopes_rise) {
      report.verdict = LinearityVerdict::Superlinear;
      return report;
    }
  }

  int onset = points.front().first;
  for (const auto& [k, v] : points)
    if (v > 0) {
      onset = k;
      break;
    }
  const int k_max = points.back().first;
  const Rational middle = Rational(onset + k_max, 2);
  bool non_increasing = true;
  std::optional<Rational> previous;
  for (const auto& [k, v] : points) {
    if (k < middle) continue;
    const Rational ratio = v / k;
    if (previous && ratio > *previous) non_increasing = false;
    previous = ratio;
  }
  if (non_increasing) report.verdict = LinearityVerdict::ConsistentWithLinear;
  return report;
}

}  // namespace fillvol
