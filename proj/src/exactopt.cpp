#include "fillvol/exactopt.hpp"

#include "fillvol/error.hpp"
#include "fillvol/lattice.hpp"
#include "fillvol/linalg.hpp"

#include <cmath>
#include <optional>
#include <queue>

namespace fillvol {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

namespace {

// Dense tableau over [structural | artificial | rhs]; the cost row holds
// reduced costs and, in its last slot, minus the current objective value.
class Tableau {
 public:
  Tableau(const MatrixQ& a, const VectorQ& b, std::vector<bool> flipped)
      : m_(a.rows()), n_(a.cols()), t_(MatrixQ::Zero(a.rows(), a.cols() + a.rows() + 1)),
        cost_(VectorQ::Zero(a.cols() + a.rows() + 1)), basis_(static_cast<std::size_t>(m_)),
        flipped_(std::move(flipped)) {
    for (Index i = 0; i < m_; ++i) {
      const bool f = flipped_[static_cast<std::size_t>(i)];
      for (Index j = 0; j < n_; ++j)
        if (a(i, j) != 0) t_(i, j) = f ? Rational(-a(i, j)) : a(i, j);
      t_(i, n_ + i) = 1;
      t_(i, rhs()) = f ? Rational(-b(i)) : b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  [[nodiscard]] Index rhs() const { return n_ + m_; }

  void set_costs(const VectorQ& structural, bool artificial_cost) {
    cost_.setZero();
    for (Index j = 0; j < n_; ++j) cost_(j) = structural(j);
    if (artificial_cost)
      for (Index i = 0; i < m_; ++i) cost_(n_ + i) = 1;
    for (Index i = 0; i < m_; ++i) {
      const Rational cb = cost_(basis_[static_cast<std::size_t>(i)]);
      if (cb == 0) continue;
      for (Index j = 0; j <= rhs(); ++j)
        if (t_(i, j) != 0) cost_(j) -= cb * t_(i, j);
    }
  }

  /// Runs Dantzig's rule over columns [0, limit), falling back to Bland's
  /// rule after a run of degenerate pivots. Returns false when unbounded.
  bool optimize(Index limit) {
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate >= kDegenerateRun;
      Index enter = -1;
      for (Index j = 0; j < limit; ++j) {
        if (cost_(j) >= 0) continue;
        if (enter < 0 || (!bland && cost_(j) < cost_(enter))) enter = j;
        if (bland) break;
      }
      if (enter < 0) return true;
      Index leave = -1;
      for (Index i = 0; i < m_; ++i) {
        if (t_(i, enter) <= 0) continue;
        if (leave < 0) {
          leave = i;
          continue;
        }
        // ratio_i < ratio_leave without dividing
        mpq_mul(prod_a_.backend().data(), t_(i, rhs()).backend().data(), t_(leave, enter).backend().data());
        mpq_mul(prod_b_.backend().data(), t_(leave, rhs()).backend().data(), t_(i, enter).backend().data());
        const int cmp = mpq_cmp(prod_a_.backend().data(), prod_b_.backend().data());
        if (cmp < 0 || (cmp == 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]))
          leave = i;
      }
      if (leave < 0) return false;
      degenerate = t_(leave, rhs()) == 0 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

  void pivot(Index r, Index c) {
    const Rational inv = Rational(1) / t_(r, c);
    support_.clear();
    for (Index j = 0; j <= rhs(); ++j) {
      if (t_(r, j) == 0) continue;
      t_(r, j) *= inv;
      support_.push_back(j);
    }
    auto eliminate = [&](auto&& row_entry) {
      if (row_entry(c) == 0) return;
      factor_ = row_entry(c);
      for (const Index j : support_) {
        mpq_mul(prod_a_.backend().data(), factor_.backend().data(), t_(r, j).backend().data());
        mpq_ptr target = row_entry(j).backend().data();
        mpq_sub(target, target, prod_a_.backend().data());
      }
    };
    for (Index i = 0; i < m_; ++i)
      if (i != r) eliminate([&](Index j) -> Rational& { return t_(i, j); });
    eliminate([&](Index j) -> Rational& { return cost_(j); });
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Pivots basic artificials onto structural columns where possible.
  void drive_out_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      for (Index j = 0; j < n_; ++j)
        if (t_(i, j) != 0) {
          pivot(i, j);
          break;
        }
    }
  }

  [[nodiscard]] Rational objective() const { return -cost_(rhs()); }

  [[nodiscard]] VectorQ primal() const {
    VectorQ x = VectorQ::Zero(n_);
    for (Index i = 0; i < m_; ++i) {
      const Index b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) x(b) = t_(i, rhs());
    }
    return x;
  }

  /// y_i = c_art_i - reduced cost of artificial i, mapped back through row flips.
  [[nodiscard]] VectorQ dual(bool artificial_cost) const {
    VectorQ y(m_);
    for (Index i = 0; i < m_; ++i) {
      Rational v = (artificial_cost ? Rational(1) : Rational(0)) - cost_(n_ + i);
      y(i) = flipped_[static_cast<std::size_t>(i)] ? Rational(-v) : v;
    }
    return y;
  }

 private:
  Index m_, n_;
  MatrixQ t_;
  VectorQ cost_;
  std::vector<Index> basis_;
  std::vector<bool> flipped_;
  std::vector<Index> support_;
  Rational prod_a_, prod_b_, factor_;  // scratch, reused to avoid allocation

  static constexpr int kDegenerateRun = 50;
};

/// Empty when r is a valid certificate for lp, else the first failed check.
std::string certificate_error(const LinearProgram& lp, const SolveResult& r) {
  const MatrixQ& a = lp.constraints;
  if (r.dual.size() != a.rows()) return "dual has the wrong length";
  if (r.status == SolveStatus::Optimal) {
    if (r.witness.size() != a.cols()) return "witness has the wrong length";
    for (Index j = 0; j < r.witness.size(); ++j)
      if (r.witness(j) < 0) return "negative witness entry";
    for (Index i = 0; i < a.rows(); ++i) {
      Rational s = 0;
      for (Index j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0 && r.witness(j) != 0) s += a(i, j) * r.witness(j);
      if (s != lp.rhs(i)) return "witness violates a constraint";
    }
    if (lp.objective.dot(r.witness) != r.value) return "witness value mismatch";
    if (r.dual.dot(lp.rhs) != r.value) return "dual value mismatch";
  } else if (r.status == SolveStatus::Infeasible) {
    if (r.dual.dot(lp.rhs) <= 0) return "Farkas vector does not separate";
  }
  if (r.status != SolveStatus::Unbounded) {
    for (Index j = 0; j < a.cols(); ++j) {
      Rational s = 0;
      for (Index i = 0; i < a.rows(); ++i)
        if (a(i, j) != 0 && r.dual(i) != 0) s += r.dual(i) * a(i, j);
      const Rational limit = r.status == SolveStatus::Optimal ? lp.objective(j) : Rational(0);
      if (s > limit) return "dual infeasible";
    }
  }
  return {};
}

void verify(const LinearProgram& lp, const SolveResult& r) {
  const std::string error = certificate_error(lp, r);
  if (!error.empty()) throw std::logic_error("simplex: " + error);
}

// Double-precision two-phase simplex on the same layout as Tableau. Returns
// the final basis (columns of [a | I] after row flips) and whether phase one
// ended feasible; nullopt when it gives up.
struct FloatBasis {
  std::vector<Index> basis;
  bool feasible = false;
};

std::optional<FloatBasis> float_basis(const LinearProgram& lp, const std::vector<bool>& flipped) {
  constexpr double eps = 1e-9;
  const Index m = lp.constraints.rows(), n = lp.constraints.cols();
  const Index rhs = n + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, n + m + 1);
  for (Index i = 0; i < m; ++i) {
    const double sign = flipped[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    for (Index j = 0; j < n; ++j)
      if (lp.constraints(i, j) != 0) t(i, j) = sign * lp.constraints(i, j).convert_to<double>();
    t(i, n + i) = 1;
    t(i, rhs) = sign * lp.rhs(i).convert_to<double>();
  }
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
  Eigen::VectorXd cost(n + m + 1);

  auto set_costs = [&](bool phase_one) {
    cost.setZero();
    if (phase_one)
      cost.segment(n, m).setOnes();
    else
      for (Index j = 0; j < n; ++j) cost(j) = lp.objective(j).convert_to<double>();
    for (Index i = 0; i < m; ++i) {
      const double cb = cost(basis[static_cast<std::size_t>(i)]);
      if (cb != 0) cost -= cb * t.row(i).transpose();
    }
  };
  auto pivot = [&](Index r, Index c) {
    t.row(r) /= t(r, c);
    for (Index i = 0; i < m; ++i)
      if (i != r && t(i, c) != 0) t.row(i) -= t(i, c) * t.row(r);
    cost -= cost(c) * t.row(r).transpose();
    basis[static_cast<std::size_t>(r)] = c;
  };
  const Index cap = 50 * (n + m) + 100;
  Index steps = 0;
  auto optimize = [&](Index limit) -> bool {
    int degenerate = 0;
    for (;;) {
      if (++steps > cap) return false;
      const bool bland = degenerate >= 50;
      Index enter = -1;
      for (Index j = 0; j < limit; ++j) {
        if (cost(j) >= -eps) continue;
        if (enter < 0 || (!bland && cost(j) < cost(enter))) enter = j;
        if (bland) break;
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = 0;
      for (Index i = 0; i < m; ++i) {
        if (t(i, enter) <= eps) continue;
        const double ratio = t(i, rhs) / t(i, enter);
        if (leave < 0 || ratio < best - eps ||
            (ratio <= best + eps && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      degenerate = std::abs(t(leave, rhs)) <= eps ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  };

  set_costs(true);
  if (!optimize(n + m)) return std::nullopt;
  if (-cost(rhs) > 1e-7) return FloatBasis{std::move(basis), false};
  for (Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    Index best = -1;
    for (Index j = 0; j < n; ++j)
      if (std::abs(t(i, j)) > 1e-7 && (best < 0 || std::abs(t(i, j)) > std::abs(t(i, best)))) best = j;
    if (best >= 0) pivot(i, best);
  }
  set_costs(false);
  if (!optimize(n)) return std::nullopt;
  return FloatBasis{std::move(basis), true};
}

// Exact primal and dual of a proposed basis; nullopt when the basis matrix is
// singular. Phase-one bases yield a Farkas candidate, phase-two bases an
// optimum candidate. Either is only trusted after certificate_error.
std::optional<SolveResult> exact_from_basis(const LinearProgram& lp, const std::vector<bool>& flipped,
                                            const FloatBasis& fb) {
  const Index m = lp.constraints.rows(), n = lp.constraints.cols();
  MatrixQ b = MatrixQ::Zero(m, m);
  VectorQ cb = VectorQ::Zero(m);
  for (Index k = 0; k < m; ++k) {
    const Index col = fb.basis[static_cast<std::size_t>(k)];
    if (col < n) {
      for (Index i = 0; i < m; ++i)
        if (lp.constraints(i, col) != 0)
          b(i, k) = flipped[static_cast<std::size_t>(i)] ? Rational(-lp.constraints(i, col)) : lp.constraints(i, col);
      if (fb.feasible) cb(k) = lp.objective(col);
    } else {
      b(col - n, k) = 1;
      if (!fb.feasible) cb(k) = 1;
    }
  }
  const auto inv = linalg::inverse<Rational>(b);
  if (!inv) return std::nullopt;
  VectorQ rhs(m);
  for (Index i = 0; i < m; ++i) rhs(i) = flipped[static_cast<std::size_t>(i)] ? Rational(-lp.rhs(i)) : lp.rhs(i);
  VectorQ xb = VectorQ::Zero(m), y_flipped = VectorQ::Zero(m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const Rational& e = (*inv)(i, j);
      if (e == 0) continue;
      if (rhs(j) != 0) xb(i) += e * rhs(j);
      if (cb(i) != 0) y_flipped(j) += cb(i) * e;
    }

  SolveResult out;
  out.dual.resize(m);
  for (Index i = 0; i < m; ++i)
    out.dual(i) = flipped[static_cast<std::size_t>(i)] ? Rational(-y_flipped(i)) : y_flipped(i);
  if (!fb.feasible) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.witness = VectorQ::Zero(n);
  for (Index k = 0; k < m; ++k) {
    const Index col = fb.basis[static_cast<std::size_t>(k)];
    if (col < n)
      out.witness(col) = xb(k);
    else if (xb(k) != 0)
      return std::nullopt;  // an artificial stays positive
  }
  out.value = lp.objective.dot(out.witness);
  return out;
}

}  // namespace

SolveResult simplex_solve(const LinearProgram& lp, bool float_guided) {
  const MatrixQ& a = lp.constraints;
  const Index m = a.rows(), n = a.cols();
  if (lp.rhs.size() != m || lp.objective.size() != n)
    throw DimensionMismatch("linear program dimensions disagree");

  std::vector<bool> flipped(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) flipped[static_cast<std::size_t>(i)] = lp.rhs(i) < 0;

  if (float_guided && m > 0) {
    if (const auto fb = float_basis(lp, flipped)) {
      auto candidate = exact_from_basis(lp, flipped, *fb);
      if (candidate && certificate_error(lp, *candidate).empty()) return std::move(*candidate);
    }
  }

  Tableau tab(a, lp.rhs, std::move(flipped));

  SolveResult out;
  tab.set_costs(VectorQ::Zero(n), true);
  tab.optimize(n + m);
  if (tab.objective() > 0) {
    out.status = SolveStatus::Infeasible;
    out.dual = tab.dual(true);
    verify(lp, out);
    return out;
  }
  tab.drive_out_artificials();
  tab.set_costs(lp.objective, false);
  if (!tab.optimize(n)) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.witness = tab.primal();
  out.value = tab.objective();
  out.dual = tab.dual(false);
  verify(lp, out);
  return out;
}

SolveResult l1_min_bounded(const MatrixQ& a, const VectorQ& b, const std::vector<VarBound>& bounds) {
  const Index m = a.rows(), n = a.cols();
  const Index nb = static_cast<Index>(bounds.size());
  if (b.size() != m) throw DimensionMismatch("l1_min: right-hand side length");

  LinearProgram lp;
  lp.constraints = MatrixQ::Zero(m + nb, 2 * n + nb);
  lp.rhs = VectorQ::Zero(m + nb);
  lp.objective = VectorQ::Zero(2 * n + nb);
  for (Index j = 0; j < n; ++j) {
    lp.objective(2 * j) = 1;
    lp.objective(2 * j + 1) = 1;
    for (Index i = 0; i < m; ++i) {
      if (a(i, j) == 0) continue;
      lp.constraints(i, 2 * j) = a(i, j);
      lp.constraints(i, 2 * j + 1) = -a(i, j);
    }
  }
  lp.rhs.head(m) = b;
  for (Index k = 0; k < nb; ++k) {
    const auto& bd = bounds[static_cast<std::size_t>(k)];
    if (bd.var < 0 || bd.var >= n) throw DimensionMismatch("l1_min: bound on unknown variable");
    lp.constraints(m + k, 2 * bd.var) = 1;
    lp.constraints(m + k, 2 * bd.var + 1) = -1;
    lp.constraints(m + k, 2 * n + k) = bd.upper ? 1 : -1;
    lp.rhs(m + k) = Rational(bd.value);
  }

  auto res = simplex_solve(lp);
  SolveResult out;
  out.status = res.status;
  out.dual = std::move(res.dual);
  if (res.status != SolveStatus::Optimal) return out;
  out.witness.resize(n);
  for (Index j = 0; j < n; ++j) out.witness(j) = res.witness(2 * j) - res.witness(2 * j + 1);
  out.value = res.value;
  if (l1_norm(out.witness) != out.value) throw std::logic_error("l1_min: split variables not complementary");
  return out;
}

SolveResult l1_min_rational(const MatrixQ& a, const VectorQ& b) { return l1_min_bounded(a, b, {}); }

SolveResult branch_and_bound(const Relaxation& relax, Index variables, const BranchOptions& options) {
  const std::size_t cap =
      options.depth_cap ? options.depth_cap : 10 * static_cast<std::size_t>(std::max<Index>(variables, 1));

  struct Node {
    std::vector<VarBound> bounds;
    SolveResult lp;
    std::size_t order;
  };
  // Lowest bound first, then creation order, so exploration is deterministic.
  auto worse = [](const Node& x, const Node& y) {
    if (x.lp.value != y.lp.value) return x.lp.value > y.lp.value;
    return x.order > y.order;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
  std::size_t created = 0;

  auto push = [&](std::vector<VarBound> bounds) {
    SolveResult lp = relax(bounds);
    if (lp.status == SolveStatus::Unbounded) throw std::logic_error("branch_and_bound: unbounded relaxation");
    if (lp.optimal()) open.push(Node{std::move(bounds), std::move(lp), created++});
  };

  const auto first_fractional = [](const SolveResult& r) -> std::optional<std::pair<Index, Rational>> {
    for (Index j = 0; j < r.witness.size(); ++j)
      if (!is_integral(r.witness(j))) return std::make_pair(j, r.witness(j));
    return std::nullopt;
  };
  const BranchPick pick = options.pick ? options.pick : BranchPick(first_fractional);

  SolveResult root = relax({});
  if (!root.optimal()) return root;
  open.push(Node{{}, std::move(root), created++});

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    const auto branch = pick(node.lp);
    if (!branch) return std::move(node.lp);
    if (node.bounds.size() >= cap) throw Overflow("branch and bound exceeded depth cap " + std::to_string(cap));

    const auto& [frac, x] = *branch;
    Integer lo = numerator_of(x) / denominator_of(x);  // truncates toward zero
    if (x < 0) lo -= 1;
    auto down = node.bounds;
    down.push_back({frac, true, lo});
    auto up = std::move(node.bounds);
    up.push_back({frac, false, lo + 1});
    push(std::move(down));
    push(std::move(up));
  }
  SolveResult none;
  none.status = SolveStatus::Infeasible;
  return none;
}

SolveResult l1_min_integral(const MatrixZ& a, const VectorZ& b, const BranchOptions& options) {
  const VectorQ bq = b.unaryExpr([](const Integer& z) { return Rational(z); });
  const auto lat = lattice::solve_in_ring(a, bq, [](const Rational& q) { return is_integral(q); });
  if (lat.status == lattice::RingSolve::Status::NotInRing) {
    SolveResult out;
    out.status = SolveStatus::Infeasible;
    out.dual = lat.certificate;
    return out;
  }
  const MatrixQ aq = a.unaryExpr([](const Integer& z) { return Rational(z); });
  return branch_and_bound([&](const std::vector<VarBound>& bounds) { return l1_min_bounded(aq, bq, bounds); },
                          a.cols(), options);
}

}  // namespace fillvol
