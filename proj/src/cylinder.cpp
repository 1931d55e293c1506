#include "fillvol/cylinder.hpp"

#include <algorithm>
#include <type_traits>

namespace fillvol {

namespace {

template <typename Scalar>
void require_shape(const Matrix<Scalar>& a, Index rows, Index cols, const std::string& what) {
  if (a.rows() != rows || a.cols() != cols)
    throw DimensionMismatch(what + " is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

template <typename Scalar>
MatrixQ as_rational(const Matrix<Scalar>& a) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return a;
  else
    return a.unaryExpr([](const Integer& z) { return Rational(z); });
}

template <typename Scalar>
bool same_ranks(const ChainComplex<Scalar>& a, const ChainComplex<Scalar>& b) {
  const auto [lo_a, hi_a] = a.support();
  const auto [lo_b, hi_b] = b.support();
  for (int i = std::min(lo_a, lo_b); i <= std::max(hi_a, hi_b); ++i)
    if (a.rank(i) != b.rank(i)) return false;
  return true;
}

/// Degrees where either complex can be nonzero, widened by `extra` above.
template <typename Scalar>
std::pair<int, int> joint_range(const ChainComplex<Scalar>& a, const ChainComplex<Scalar>& b, int extra = 0) {
  const auto [lo_a, hi_a] = a.support();
  const auto [lo_b, hi_b] = b.support();
  const bool empty_a = lo_a > hi_a, empty_b = lo_b > hi_b;
  if (empty_a && empty_b) return {0, -1};
  const int lo = empty_a ? lo_b : empty_b ? lo_a : std::min(lo_a, lo_b);
  const int hi = empty_a ? hi_b + extra : empty_b ? hi_a : std::max(hi_a, hi_b + extra);
  return {lo, hi};
}

// Coordinates on a complement of the image of a (n x k, injective): pi is
// (n - k) x n and kills the image (over Z, its saturation); e is n x (n - k)
// with pi e = I.
template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> complement(const Matrix<Scalar>& a) {
  const Index n = a.rows(), k = a.cols();
  if constexpr (std::is_same_v<Scalar, Rational>) {
    // extend the columns of a by standard basis vectors
    MatrixQ basis = a;
    std::vector<Index> chosen;
    for (Index j = 0; j < n && static_cast<Index>(chosen.size()) < n - k; ++j) {
      MatrixQ extended(n, basis.cols() + 1);
      extended << basis, MatrixQ::Identity(n, n).col(j);
      if (linalg::rank(extended) > basis.cols()) {
        basis = extended;
        chosen.push_back(j);
      }
    }
    const MatrixQ inv = *linalg::inverse<Rational>(basis);
    MatrixQ e = MatrixQ::Zero(n, n - k);
    for (std::size_t c = 0; c < chosen.size(); ++c) e(chosen[c], static_cast<Index>(c)) = 1;
    return {inv.bottomRows(n - k), e};
  } else {
    // a^T u = [h 0] with u unimodular, so a = (u^-1)^T [h^T; 0]: the last
    // n - k columns of (u^-1)^T complement the saturation of the image.
    const auto hnf = lattice::column_hermite(MatrixZ(a.transpose()));
    const MatrixQ u_inv = *linalg::inverse<Rational>(as_rational<Integer>(hnf.unimodular));
    const MatrixZ w = u_inv.transpose().unaryExpr([](const Rational& q) { return Integer(numerator_of(q)); });
    const MatrixZ pi = hnf.unimodular.transpose().bottomRows(n - k);
    return {pi, w.rightCols(n - k)};
  }
}

}  // namespace

template <typename Scalar>
ChainComplex<Scalar> ChainComplex<Scalar>::make(std::map<int, Index> ranks,
                                                std::map<int, Matrix<Scalar>> differentials) {
  for (const auto& [i, r] : ranks)
    if (r < 0) throw DimensionMismatch("negative rank in degree " + std::to_string(i));
  std::erase_if(ranks, [](const auto& kv) { return kv.second == 0; });
  ChainComplex c{std::move(ranks), {}};
  for (auto& [i, d] : differentials) {
    require_shape<Scalar>(d, c.rank(i - 1), c.rank(i), "differential d" + std::to_string(i));
    if (d.size() > 0 && !all_zero(d)) c.differentials.emplace(i, std::move(d));
  }
  for (const auto& [i, d] : c.differentials) {
    const auto below = c.differentials.find(i - 1);
    if (below != c.differentials.end() && !all_zero(Matrix<Scalar>(below->second * d)))
      throw BoundaryError("d" + std::to_string(i - 1) + " d" + std::to_string(i) + " is not zero");
  }
  return c;
}

template <typename Scalar>
Index ChainComplex<Scalar>::rank(int degree) const {
  const auto it = ranks.find(degree);
  return it == ranks.end() ? 0 : it->second;
}

template <typename Scalar>
Matrix<Scalar> ChainComplex<Scalar>::d(int degree) const {
  const auto it = differentials.find(degree);
  if (it != differentials.end()) return it->second;
  return Matrix<Scalar>::Zero(rank(degree - 1), rank(degree));
}

template <typename Scalar>
std::pair<int, int> ChainComplex<Scalar>::support() const {
  if (ranks.empty()) return {0, -1};
  return {ranks.begin()->first, ranks.rbegin()->first};
}

template <typename Scalar>
Matrix<Scalar> ChainMap<Scalar>::component(int degree) const {
  const auto it = components.find(degree);
  if (it != components.end()) return it->second;
  return Matrix<Scalar>::Zero(target.rank(degree), source.rank(degree));
}

template <typename Scalar>
bool check_chain_map(const ChainMap<Scalar>& f) {
  for (const auto& [i, c] : f.components)
    require_shape<Scalar>(c, f.target.rank(i), f.source.rank(i), "component f" + std::to_string(i));
  const auto [lo, hi] = joint_range(f.source, f.target, 1);
  for (int i = lo; i <= hi + 1; ++i) {
    const Matrix<Scalar> left = f.target.d(i) * f.component(i);
    const Matrix<Scalar> right = f.component(i - 1) * f.source.d(i);
    if (left != right) return false;
  }
  return true;
}

template <typename Scalar>
Cylinder<Scalar> mapping_cylinder(const ChainMap<Scalar>& f) {
  if (!check_chain_map(f)) throw InvalidArgument("mapping cylinder needs a chain map");
  const auto& b = f.source;
  const auto& c = f.target;
  const auto [lo, hi] = joint_range(b, c, 1);
  using M = Matrix<Scalar>;

  std::map<int, Index> ranks;
  for (int i = lo; i <= hi; ++i) ranks[i] = c.rank(i) + b.rank(i) + b.rank(i - 1);
  std::map<int, M> diffs;
  for (int i = lo; i <= hi; ++i) {
    const Index ci = c.rank(i), bi = b.rank(i), bs = b.rank(i - 1);
    const Index ci1 = c.rank(i - 1), bi1 = b.rank(i - 1), bs1 = b.rank(i - 2);
    M d = M::Zero(ci1 + bi1 + bs1, ci + bi + bs);
    d.block(0, 0, ci1, ci) = c.d(i);
    d.block(0, ci + bi, ci1, bs) = -f.component(i - 1);
    d.block(ci1, ci, bi1, bi) = b.d(i);
    d.block(ci1, ci + bi, bi1, bs) = M::Identity(bi1, bs);
    d.block(ci1 + bi1, ci + bi, bs1, bs) = -b.d(i - 1);
    diffs[i] = std::move(d);
  }
  Cylinder<Scalar> out;
  out.m = ChainComplex<Scalar>::make(ranks, std::move(diffs));  // checks d''d'' = 0

  out.incl_c = {c, out.m, {}};
  out.incl_b = {b, out.m, {}};
  out.kappa = {out.m, c, {}};
  for (int i = lo; i <= hi; ++i) {
    const Index ci = c.rank(i), bi = b.rank(i), bs = b.rank(i - 1), mi = out.m.rank(i);
    M ic = M::Zero(mi, ci), ib = M::Zero(mi, bi), k = M::Zero(ci, mi);
    ic.topRows(ci) = M::Identity(ci, ci);
    ib.block(ci, 0, bi, bi) = M::Identity(bi, bi);
    k.leftCols(ci) = M::Identity(ci, ci);
    k.block(0, ci, ci, bi) = f.component(i);
    out.incl_c.components[i] = std::move(ic);
    out.incl_b.components[i] = std::move(ib);
    out.kappa.components[i] = std::move(k);
  }
  for (const auto* g : {&out.incl_c, &out.incl_b, &out.kappa})
    if (!check_chain_map(*g)) throw std::logic_error("mapping cylinder: structure map is not a chain map");
  for (int i = lo; i <= hi; ++i) {
    if (out.kappa.component(i) * out.incl_c.component(i) != M::Identity(c.rank(i), c.rank(i)))
      throw std::logic_error("mapping cylinder: kappa incl_C is not the identity");
    if (out.kappa.component(i) * out.incl_b.component(i) != f.component(i))
      throw std::logic_error("mapping cylinder: kappa incl_B is not f");
  }
  return out;
}

template <typename Scalar>
std::map<int, Index> homology_ranks(const ChainComplex<Scalar>& c) {
  std::map<int, Index> out;
  for (const auto& [i, r] : c.ranks)
    out[i] = r - linalg::rank(as_rational<Scalar>(c.d(i))) - linalg::rank(as_rational<Scalar>(c.d(i + 1)));
  return out;
}

template <typename Scalar>
QuotientSplit<Scalar> quotient_split_check(const ChainComplex<Scalar>& m, const ChainMap<Scalar>& incl) {
  if (!same_ranks(incl.target, m)) throw DimensionMismatch("inclusion does not land in the given complex");
  if (!check_chain_map(incl)) throw InvalidArgument("inclusion is not a chain map");
  using M = Matrix<Scalar>;
  const auto [lo, hi] = joint_range(incl.source, m);
  QuotientSplit<Scalar> out;
  out.splits = true;
  std::map<int, std::pair<M, M>> coords;
  std::map<int, Index> ranks;
  for (int i = lo; i <= hi; ++i) {
    const M a = incl.component(i);
    if (linalg::rank(as_rational<Scalar>(a)) != a.cols())
      throw NotInjective("inclusion has a kernel in degree " + std::to_string(i));
    if constexpr (std::is_same_v<Scalar, Integer>) {
      for (const Integer& d : lattice::smith_invariants(a))
        if (d != 1) out.splits = false;
    }
    coords[i] = complement<Scalar>(a);
    ranks[i] = a.rows() - a.cols();
  }
  std::map<int, M> diffs;
  for (int i = lo; i <= hi; ++i) {
    const auto below = coords.find(i - 1);
    if (below == coords.end()) continue;
    diffs[i] = below->second.first * m.d(i) * coords[i].second;
  }
  out.quotient = ChainComplex<Scalar>::make(std::move(ranks), std::move(diffs));
  return out;
}

#define FILLVOL_CYLINDER_INSTANTIATE(S)                                                          \
  template struct ChainComplex<S>;                                                              \
  template struct ChainMap<S>;                                                                  \
  template bool check_chain_map<S>(const ChainMap<S>&);                                         \
  template Cylinder<S> mapping_cylinder<S>(const ChainMap<S>&);                                 \
  template std::map<int, Index> homology_ranks<S>(const ChainComplex<S>&);                      \
  template QuotientSplit<S> quotient_split_check<S>(const ChainComplex<S>&, const ChainMap<S>&);
FILLVOL_CYLINDER_INSTANTIATE(Rational)
FILLVOL_CYLINDER_INSTANTIATE(Integer)
#undef FILLVOL_CYLINDER_INSTANTIATE

}  // namespace fillvol
