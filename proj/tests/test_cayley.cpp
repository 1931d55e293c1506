#include <doctest.h>

#include "fillvol/cayley.hpp"
#include "fillvol/error.hpp"

#include <map>
#include <set>

using namespace fillvol;

namespace {

const char* kZ2 = "gens: x y\nrels: x y X Y\n";
const char* kGenus2 = "gens: a b c d\nrels: a b A B c d C D\n";
const char* kRp2 = "vertices: 1\nedge e 0 0\ncell f e:2\n";

bool d1_d2_vanishes(const CayleyBall& b) {
  const IncidenceMatrix product = b.d1() * b.d2();
  for (Index j = 0; j < product.outerSize(); ++j)
    for (IncidenceMatrix::InnerIterator it(product, j); it; ++it)
      if (it.value() != 0) return false;
  return true;
}

bool is_cycle(const CayleyBall& b, const IntegralChain& c) { return boundary_of_edges(b, c).empty(); }

std::int64_t l1(const IntegralChain& c) {
  std::int64_t s = 0;
  for (const auto& [e, x] : c.terms) s += x < 0 ? -x : x;
  return s;
}

using KeyedChain = std::vector<std::pair<EdgeKey, std::int64_t>>;

KeyedChain keyed(const CayleyBall& b, const IntegralChain& c) {
  KeyedChain out;
  for (const auto& [e, x] : c.terms) out.emplace_back(b.edge_key(e), x);
  std::sort(out.begin(), out.end());
  return out;
}

// Every integer vector on the edges with l1 <= k and zero boundary.
std::set<std::vector<std::pair<Index, std::int64_t>>> brute_force_cycles(const CayleyBall& b, int k) {
  std::set<std::vector<std::pair<Index, std::int64_t>>> out;
  const Index edges = b.edge_count();
  std::vector<std::pair<Index, std::int64_t>> terms;
  auto rec = [&](auto&& self, Index next, int budget) -> void {
    const IntegralChain c{1, terms};
    if (is_cycle(b, c)) out.insert(terms);
    for (Index e = next; e < edges; ++e) {
      for (int v = 1; v <= budget; ++v) {
        for (int sign : {1, -1}) {
          terms.emplace_back(e, sign * v);
          self(self, e + 1, budget - v);
          terms.pop_back();
        }
      }
    }
  };
  rec(rec, 0, k);
  return out;
}

}  // namespace

TEST_CASE("ball sizes") {
  const auto z2 = parse_presentation(kZ2);
  const auto b1 = build_ball(z2, NormalFormStrategy::abelian(), 1);
  CHECK(b1.vertex_count() == 5);
  CHECK(b1.edge_count() == 4);
  CHECK(b1.cell_count() == 0);
  for (int r = 0; r <= 4; ++r) {
    const auto b = build_ball(z2, NormalFormStrategy::abelian(), r);
    CHECK(b.vertex_count() == 2 * r * r + 2 * r + 1);
    CHECK(d1_d2_vanishes(b));
  }
  const auto free2 = parse_presentation("gens: x y\n");
  const auto tree = build_ball(free2, NormalFormStrategy::bounded(2), 2);
  CHECK(tree.vertex_count() == 17);
  CHECK(tree.edge_count() == 16);
  CHECK(tree.cell_count() == 0);

  const auto g2 = build_ball(parse_presentation(kGenus2), NormalFormStrategy::dehn(), 2);
  CHECK(g2.vertex_count() == 1 + 8 + 8 * 7);
}

TEST_CASE("unit squares of the Z^2 ball") {
  const auto z2 = parse_presentation(kZ2);
  const auto b = build_ball(z2, NormalFormStrategy::abelian(), 2);
  // squares with all four corners in |a|+|b| <= 2
  CHECK(b.cell_count() == 4);
  for (Index c = 0; c < b.cell_count(); ++c) {
    const auto cell = b.cell(c);
    CHECK(l1(cell.boundary) == 4);
    CHECK(is_cycle(b, cell.boundary));
  }
  CHECK(d1_d2_vanishes(b));
}

TEST_CASE("ball invariants for the genus-2 group") {
  const auto p = parse_presentation(kGenus2);
  const auto b = build_ball(p, NormalFormStrategy::dehn(), 4);
  CHECK(d1_d2_vanishes(b));
  for (Index v = 0; v < b.vertex_count(); ++v) CHECK(b.vertex_depth(v) <= 4);
  // the relator loop fits once each of its vertices is within radius 4
  CHECK(b.cell_count() > 0);
  for (Index c = 0; c < b.cell_count(); ++c) CHECK(l1(b.cell(c).boundary) <= 8);
  for (Index e = 0; e < b.edge_count(); ++e) {
    const auto edge = b.edge(e);
    GroupWord w = b.vertex_word(edge.source);
    w *= edge.generator + 1;
    CHECK(b.word_problem()->normal_form(w) == b.vertex_word(edge.target));
  }
}

TEST_CASE("ball monotonicity in the radius") {
  const auto p = parse_presentation(kZ2);
  for (int r = 1; r <= 4; ++r) {
    const auto small = build_ball(p, NormalFormStrategy::abelian(), r);
    const auto big = build_ball(p, NormalFormStrategy::abelian(), r + 1);
    for (Index v = 0; v < small.vertex_count(); ++v) CHECK(big.find_vertex(small.vertex_word(v)).has_value());
    std::set<KeyedChain> big_cells;
    for (Index c = 0; c < big.cell_count(); ++c) big_cells.insert(keyed(big, big.cell(c).boundary));
    for (Index c = 0; c < small.cell_count(); ++c) CHECK(big_cells.contains(keyed(small, small.cell(c).boundary)));
  }
}

TEST_CASE("lazy cells agree with the full ball") {
  const auto p = parse_presentation(kZ2);
  const auto full = build_ball(p, NormalFormStrategy::abelian(), 3);
  const auto lazy = CayleyBall::lazy(p, NormalFormStrategy::abelian(), 3);
  std::set<KeyedChain> lazy_cells;
  for (Index v = 0; v < full.vertex_count(); ++v) {
    const auto lv = lazy.find_vertex(full.vertex_word(v));
    (void)lv;
  }
  lazy.materialize_layers(4);
  for (Index e = 0; e < lazy.edge_count(); ++e)
    for (const Index c : lazy.cells_on_edge(e)) lazy_cells.insert(keyed(lazy, lazy.cell(c).boundary));
  std::set<KeyedChain> full_cells;
  for (Index c = 0; c < full.cell_count(); ++c) full_cells.insert(keyed(full, full.cell(c).boundary));
  CHECK(lazy_cells == full_cells);
  CHECK(lazy.vertex_count() == full.vertex_count());
}

TEST_CASE("loading explicit complexes") {
  const auto rp2 = load_complex(kRp2);
  CHECK(rp2.vertex_count() == 1);
  CHECK(rp2.d1().nonZeros() == 0);
  const auto d2 = rp2.d2();
  CHECK(d2.rows() == 1);
  CHECK(d2.cols() == 1);
  CHECK(d2.coeff(0, 0) == 2);

  const auto torus = load_complex("vertices: 1\nedge a 0 0\nedge b 0 0\ncell t a:1 b:1 a:-1 b:-1\n");
  CHECK(torus.cell(0).boundary.empty());
  CHECK(torus.d2().nonZeros() == 0);

  CHECK_THROWS_AS(load_complex("vertices: 2\nedge e 0 1\ncell f e:1\n"), BoundaryError);
  CHECK_THROWS_AS(load_complex("vertices: 1\nedge e 0 3\n"), SyntaxError);
  CHECK_THROWS_AS(load_complex("vertices: 1\nedge e 0 0\ncell f g:1\n"), SyntaxError);
  CHECK_THROWS_AS(load_complex("edge e 0 0\n"), SyntaxError);
}

TEST_CASE("cycle lattice ranks") {
  const auto free2 = parse_presentation("gens: x y\n");
  CHECK(cycle_lattice_basis(build_ball(free2, NormalFormStrategy::bounded(3), 3)).rank() == 0);
  const auto z2 = parse_presentation(kZ2);
  CHECK(cycle_lattice_basis(build_ball(z2, NormalFormStrategy::abelian(), 1)).rank() == 0);
  const auto rp2 = load_complex(kRp2);
  CHECK(cycle_lattice_basis(rp2).rank() == 1);
  const auto b3 = build_ball(z2, NormalFormStrategy::abelian(), 3);
  const auto lat = cycle_lattice_basis(b3);
  CHECK(lat.rank() == b3.edge_count() - b3.vertex_count() + 1);
  for (const auto& c : lat.basis) CHECK(is_cycle(b3, c));
}

TEST_CASE("integral cycle enumeration") {
  const auto z2 = parse_presentation(kZ2);
  const auto b1 = build_ball(z2, NormalFormStrategy::abelian(), 1);
  CHECK(enumerate_integral_cycles(cycle_lattice_basis(b1), 6).size() == 1);
  const auto b2 = build_ball(z2, NormalFormStrategy::abelian(), 2);
  const auto lat = cycle_lattice_basis(b2);
  CHECK(enumerate_integral_cycles(lat, 0).size() == 1);
  CHECK(enumerate_integral_cycles(lat, 3).size() == 1);

  for (int k : {4, 6}) {
    const auto cycles = enumerate_integral_cycles(lat, k);
    std::set<std::vector<std::pair<Index, std::int64_t>>> got;
    for (const auto& c : cycles) {
      CHECK(is_cycle(b2, c));
      CHECK(l1(c) <= k);
      CHECK(got.insert(c.terms).second);
    }
    CHECK(got == brute_force_cycles(b2, k));
  }
  // each unit square in both orientations, plus zero
  CHECK(enumerate_integral_cycles(lat, 4).size() == 9);
}

TEST_CASE("doubled lattice") {
  const auto z2 = parse_presentation(kZ2);
  const auto b2 = build_ball(z2, NormalFormStrategy::abelian(), 2);
  auto lat = cycle_lattice_basis(b2);
  lat.scale = 2;
  CHECK(enumerate_integral_cycles(lat, 7).size() == 1);
  const auto doubled = enumerate_integral_cycles(lat, 8);
  CHECK(doubled.size() == 9);
  for (const auto& c : doubled)
    for (const auto& [e, x] : c.terms) CHECK(x % 2 == 0);
}

TEST_CASE("enumeration limit") {
  const auto z2 = parse_presentation(kZ2);
  const auto b = build_ball(z2, NormalFormStrategy::abelian(), 3);
  CycleEnumerationLimits limits;
  limits.max_cycles = 10;
  CHECK_THROWS_AS(enumerate_integral_cycles(cycle_lattice_basis(b), 8, limits), Overflow);
}

TEST_CASE("rooted cycles in a lazy ball match the full ball") {
  for (const auto* text : {kZ2, kGenus2}) {
    const auto p = parse_presentation(text);
    const auto s = std::string(text) == kZ2 ? NormalFormStrategy::abelian() : NormalFormStrategy::dehn();
    const int radius = 4, k = 8;
    const auto full = build_ball(p, s, radius);
    const auto lazy = CayleyBall::lazy(p, s, radius);
    std::set<KeyedChain> want, got;
    for (const auto& c : simple_cycles(full, k)) {
      bool through_root = false;
      for (const auto& [e, x] : c.terms) {
        const auto edge = full.edge(e);
        through_root |= edge.source == full.root() || edge.target == full.root();
      }
      if (through_root) want.insert(keyed(full, c));
    }
    for (const auto& c : simple_cycles(lazy, k, true)) got.insert(keyed(lazy, c));
    CHECK(got == want);
    CHECK(!got.empty());
  }
}
