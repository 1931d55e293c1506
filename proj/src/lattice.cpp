#include "fillvol/lattice.hpp"

#include <utility>

namespace fillvol::lattice {

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

namespace {

struct ExtendedGcd {
  Integer g, s, t;  // s*a + t*b == g >= 0
};

ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Integer q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// Replaces columns (p, q) of m by (s*p + t*q, u*p + v*q).
void combine_columns(MatrixZ& m, Index p, Index q, const Integer& s, const Integer& t,
                     const Integer& u, const Integer& v) {
  for (Index i = 0; i < m.rows(); ++i) {
    const Integer x = m(i, p);
    const Integer y = m(i, q);
    if (x == 0 && y == 0) continue;
    m(i, p) = s * x + t * y;
    m(i, q) = u * x + v * y;
  }
}

void add_column_multiple(MatrixZ& m, Index target, Index source, const Integer& factor) {
  if (factor == 0) return;
  for (Index i = 0; i < m.rows(); ++i)
    if (m(i, source) != 0) m(i, target) += factor * m(i, source);
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace

ColumnHermite column_hermite(const MatrixZ& a) {
  ColumnHermite out{a, MatrixZ::Identity(a.cols(), a.cols()), {}};
  MatrixZ& h = out.hermite;
  MatrixZ& u = out.unimodular;
  const Index cols = a.cols();
  Index r = 0;
  for (Index i = 0; i < a.rows() && r < cols; ++i) {
    for (Index c = r + 1; c < cols; ++c) {
      if (h(i, c) == 0) continue;
      if (h(i, r) == 0) {
        h.col(r).swap(h.col(c));
        u.col(r).swap(u.col(c));
        continue;
      }
      const Integer x = h(i, r);
      const Integer y = h(i, c);
      const auto eg = extended_gcd(x, y);
      const Integer u_coef = -y / eg.g;
      const Integer v_coef = x / eg.g;
      combine_columns(h, r, c, eg.s, eg.t, u_coef, v_coef);
      combine_columns(u, r, c, eg.s, eg.t, u_coef, v_coef);
    }
    if (h(i, r) == 0) continue;
    if (h(i, r) < 0) {
      h.col(r) = -h.col(r);
      u.col(r) = -u.col(r);
    }
    const Integer pivot = h(i, r);
    for (Index j = 0; j < r; ++j) {
      const Integer q = floor_div(h(i, j), pivot);
      add_column_multiple(h, j, r, -q);
      add_column_multiple(u, j, r, -q);
    }
    out.pivot_rows.push_back(i);
    ++r;
  }
  return out;
}

MatrixZ integer_kernel_basis(const MatrixZ& a) {
  const auto h = column_hermite(a);
  return h.unimodular.rightCols(a.cols() - h.rank());
}

RingSolve solve_in_ring(const ColumnHermite& h, const VectorQ& b, const RingMembership& in_ring) {
  const Index rows = h.hermite.rows();
  const Index r = h.rank();
  VectorQ residual = b;
  VectorQ z = VectorQ::Zero(r);
  for (Index j = 0; j < r; ++j) {
    const Index p = h.pivot_rows[static_cast<std::size_t>(j)];
    if (residual(p) == 0) continue;
    z(j) = residual(p) / Rational(h.hermite(p, j));
    for (Index i = p; i < rows; ++i)
      if (h.hermite(i, j) != 0) residual(i) -= z(j) * Rational(h.hermite(i, j));
  }
  RingSolve out;
  if (!all_zero(residual)) {
    out.status = RingSolve::Status::NotInSpan;
    return out;
  }
  for (Index j = 0; j < r; ++j) {
    if (in_ring(z(j))) continue;
    // y_P^T H_P = e_j^T with H_P lower triangular on the pivot rows.
    VectorQ yp = VectorQ::Zero(r);
    for (Index k = r - 1; k >= 0; --k) {
      Rational acc = (k == j) ? Rational(1) : Rational(0);
      for (Index l = k + 1; l < r; ++l) {
        const Integer& entry = h.hermite(h.pivot_rows[static_cast<std::size_t>(l)], k);
        if (entry != 0) acc -= yp(l) * Rational(entry);
      }
      yp(k) = acc / Rational(h.hermite(h.pivot_rows[static_cast<std::size_t>(k)], k));
    }
    out.certificate = VectorQ::Zero(rows);
    for (Index k = 0; k < r; ++k) out.certificate(h.pivot_rows[static_cast<std::size_t>(k)]) = yp(k);
    out.status = RingSolve::Status::NotInRing;
    return out;
  }
  const Index cols = h.unimodular.rows();
  out.solution = VectorQ::Zero(cols);
  for (Index j = 0; j < r; ++j) {
    if (z(j) == 0) continue;
    for (Index i = 0; i < cols; ++i)
      if (h.unimodular(i, j) != 0) out.solution(i) += z(j) * Rational(h.unimodular(i, j));
  }
  out.status = RingSolve::Status::Solvable;
  return out;
}

RingSolve solve_in_ring(const MatrixZ& a, const VectorQ& b, const RingMembership& in_ring) {
  return solve_in_ring(column_hermite(a), b, in_ring);
}

std::vector<Integer> smith_invariants(MatrixZ a) {
  std::vector<Integer> diag;
  Index t = 0;
  const Index rows = a.rows();
  const Index cols = a.cols();
  while (t < rows && t < cols) {
    // Pivot: smallest nonzero magnitude in the trailing block.
    Index pr = -1, pc = -1;
    for (Index j = t; j < cols; ++j)
      for (Index i = t; i < rows; ++i)
        if (a(i, j) != 0 &&
            (pr < 0 || boost::multiprecision::abs(a(i, j)) < boost::multiprecision::abs(a(pr, pc)))) {
          pr = i;
          pc = j;
        }
    if (pr < 0) break;
    a.row(t).swap(a.row(pr));
    a.col(t).swap(a.col(pc));
    bool clean = true;
    for (Index i = t + 1; i < rows; ++i) {
      if (a(i, t) == 0) continue;
      const Integer q = a(i, t) / a(t, t);
      for (Index j = t; j < cols; ++j) a(i, j) -= q * a(t, j);
      if (a(i, t) != 0) clean = false;
    }
    for (Index j = t + 1; j < cols; ++j) {
      if (a(t, j) == 0) continue;
      const Integer q = a(t, j) / a(t, t);
      for (Index i = t; i < rows; ++i) a(i, j) -= q * a(i, t);
      if (a(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // a smaller remainder appeared; pivot again
    diag.push_back(boost::multiprecision::abs(a(t, t)));
    ++t;
  }
  // Diagonal entries fix up to the divisibility chain via (gcd, lcm).
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      const Integer g = gcd(diag[i], diag[j]);
      const Integer l = lcm(diag[i], diag[j]);
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

}  // namespace fillvol::lattice
