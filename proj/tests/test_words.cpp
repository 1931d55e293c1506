#include <doctest.h>

#include "fillvol/error.hpp"
#include "fillvol/words.hpp"

#include <random>

using namespace fillvol;

namespace {

const char* kGenus2 = "gens: a b c d\nrels: a b A B c d C D\n";
const char* kZ2 = "gens: x y\nrels: x y X Y\n";

GroupWord random_word(std::mt19937& rng, int gens, int length) {
  std::uniform_int_distribution<int> g(1, gens);
  std::bernoulli_distribution sign(0.5);
  std::vector<Letter> out;
  for (int i = 0; i < length; ++i) out.push_back(sign(rng) ? g(rng) : -g(rng));
  return GroupWord(out);
}

GroupWord splice(const GroupWord& w, std::size_t at, const GroupWord& r) {
  std::vector<Letter> out(w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(at));
  out.insert(out.end(), r.letters().begin(), r.letters().end());
  out.insert(out.end(), w.letters().begin() + static_cast<std::ptrdiff_t>(at), w.letters().end());
  return GroupWord(out);
}

}  // namespace

TEST_CASE("parse presentations") {
  const auto z2 = parse_presentation(kZ2);
  CHECK(z2.generator_count == 2);
  REQUIRE(z2.relators.size() == 1);
  CHECK(z2.relators[0].size() == 4);

  const auto g2 = parse_presentation(kGenus2);
  REQUIRE(g2.relators.size() == 1);
  CHECK(g2.relators[0].size() == 8);

  const auto packed = parse_presentation("# torus\ngens: x y\nrels: xyXY\n");
  CHECK(packed.relators[0] == z2.relators[0]);
}

TEST_CASE("parse errors") {
  try {
    parse_presentation("gens: x\nrels: x X");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.reason() == "EmptyRelator");
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_presentation("gens: x\nrels: x q"), UnknownGenerator);
  CHECK_THROWS_AS(parse_presentation("rels: x"), SyntaxError);
  CHECK_THROWS_AS(parse_presentation("gens x y"), SyntaxError);
}

TEST_CASE("free reduction") {
  const std::vector<Letter> a{1, -1, 2};
  CHECK(free_reduce(a) == GroupWord{2});
  CHECK(free_reduce(std::vector<Letter>{}).empty());
  const std::vector<Letter> b{1, 2, -2, -1};
  CHECK(free_reduce(b).empty());
  CHECK(cyclically_reduce(GroupWord{2, 1, 3, -2}) == GroupWord{1, 3});
}

TEST_CASE("small cancellation") {
  const auto g2 = check_c16(parse_presentation(kGenus2));
  CHECK(g2.satisfied);
  CHECK(g2.max_piece == 1);
  CHECK(g2.min_relator == 8);

  const auto z2 = check_c16(parse_presentation(kZ2));
  CHECK_FALSE(z2.satisfied);
  CHECK(z2.max_piece == 1);
  CHECK(z2.min_relator == 4);

  const auto free2 = check_c16(parse_presentation("gens: x y\n"));
  CHECK(free2.satisfied);
  CHECK(free2.max_piece == 0);
}

TEST_CASE("small cancellation is invariant under rotating and inverting relators") {
  auto p = parse_presentation(kGenus2);
  const auto base = check_c16(p);
  for (const auto& shift : cyclic_shifts(p.relators[0])) {
    for (const auto& r : {shift, shift.inverse()}) {
      p.relators[0] = r;
      const auto c = check_c16(p);
      CHECK(c.satisfied == base.satisfied);
      CHECK(c.max_piece == base.max_piece);
      CHECK(c.min_relator == base.min_relator);
    }
  }
  auto q = parse_presentation("gens: a b\nrels: a a b a b b b\n");
  const auto qbase = check_c16(q);
  q.relators[0] = cyclic_shifts(q.relators[0])[3].inverse();
  CHECK(check_c16(q).max_piece == qbase.max_piece);
}

TEST_CASE("strategy validation") {
  const auto z2 = parse_presentation(kZ2);
  CHECK_NOTHROW(WordProblem(z2, NormalFormStrategy::abelian()));
  CHECK_THROWS_AS(WordProblem(z2, NormalFormStrategy::dehn()), InvalidStrategy);
  const auto g2 = parse_presentation(kGenus2);
  CHECK_THROWS_AS(WordProblem(g2, NormalFormStrategy::abelian()), InvalidStrategy);
  CHECK(NormalFormStrategy::parse("enum:3") == NormalFormStrategy::bounded(3));
  CHECK_THROWS_AS(NormalFormStrategy::parse("enum:0"), InvalidArgument);
  CHECK_THROWS_AS(NormalFormStrategy::parse("greedy"), InvalidArgument);
}

TEST_CASE("normal form examples") {
  const auto z2 = parse_presentation(kZ2);
  CHECK(normal_form(z2, NormalFormStrategy::abelian(), GroupWord{2, 1}) == GroupWord{1, 2});

  const auto g2 = parse_presentation(kGenus2);
  CHECK(normal_form(g2, NormalFormStrategy::dehn(), g2.relators[0]).empty());
  CHECK(normal_form(g2, NormalFormStrategy::dehn(), GroupWord{1, 2}) == GroupWord{1, 2});
}

TEST_CASE("bounded enumeration") {
  const auto z2 = parse_presentation(kZ2);
  const WordProblem wp(z2, NormalFormStrategy::bounded(4));
  CHECK(wp.normal_form(GroupWord{2, 1}) == wp.normal_form(GroupWord{1, 2}));
  CHECK(wp.normal_form(GroupWord{2, 1, -2}) == GroupWord{1});
  CHECK_THROWS_AS((void)wp.normal_form(GroupWord{1, 1, 1, 1, 1}), RadiusExceeded);

  const auto free2 = parse_presentation("gens: x y\n");
  const WordProblem wf(free2, NormalFormStrategy::bounded(3));
  CHECK(wf.normal_form(GroupWord{1, 2, -1}) == GroupWord{1, 2, -1});
}

TEST_CASE("w * w^-1 normalizes to the identity") {
  std::mt19937 rng(17);
  const auto z2 = parse_presentation(kZ2);
  const auto g2 = parse_presentation(kGenus2);
  const WordProblem ab(z2, NormalFormStrategy::abelian());
  const WordProblem dehn(g2, NormalFormStrategy::dehn());
  const WordProblem en(z2, NormalFormStrategy::bounded(4));
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = random_word(rng, 2, 1 + trial % 8);
    const auto v = random_word(rng, 4, 1 + trial % 8);
    CHECK(ab.normal_form(w * w.inverse()).empty());
    CHECK(dehn.normal_form(v * v.inverse()).empty());
    CHECK(en.normal_form(GroupWord(random_word(rng, 2, 3)) * GroupWord{}).size() <= 3);
  }
}

TEST_CASE("normal forms are constant on relator insertions") {
  std::mt19937 rng(23);
  const auto g2 = parse_presentation(kGenus2);
  const auto z2 = parse_presentation(kZ2);
  const WordProblem dehn(g2, NormalFormStrategy::dehn());
  const WordProblem ab(z2, NormalFormStrategy::abelian());
  const WordProblem en(z2, NormalFormStrategy::bounded(4));
  const auto g2_rels = symmetrized_relators(g2);
  const auto z2_rels = symmetrized_relators(z2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = random_word(rng, 4, trial % 10);
    const auto& r = g2_rels[static_cast<std::size_t>(trial) % g2_rels.size()];
    const auto at = w.size() == 0 ? 0 : static_cast<std::size_t>(rng()) % (w.size() + 1);
    CHECK(dehn.normal_form(w) == dehn.normal_form(splice(w, at, r)));

    const auto u = random_word(rng, 2, trial % 6);
    const auto& s = z2_rels[static_cast<std::size_t>(trial) % z2_rels.size()];
    const auto at2 = static_cast<std::size_t>(rng()) % (u.size() + 1);
    const auto spliced = splice(u, at2, s);
    CHECK(ab.normal_form(u) == ab.normal_form(spliced));
    if (u.size() <= 4 && spliced.size() <= 4) CHECK(en.normal_form(u) == en.normal_form(spliced));
  }
}

TEST_CASE("Dehn normal form agrees with pairwise word-problem identification") {
  // Oracle: in a C'(1/6) group, w1 == w2 iff Dehn's algorithm reduces
  // w1 * w2^-1 to the empty word. Canonical forms must induce the same
  // partition on a sample of words.
  std::mt19937 rng(29);
  const auto g2 = parse_presentation(kGenus2);
  const WordProblem dehn(g2, NormalFormStrategy::dehn());
  const auto rels = symmetrized_relators(g2);
  std::vector<GroupWord> words;
  for (int i = 0; i < 40; ++i) {
    auto w = random_word(rng, 4, 1 + i % 5);
    words.push_back(w);
    // a disguised copy of w, same element
    const auto at = static_cast<std::size_t>(rng()) % (w.size() + 1);
    words.push_back(splice(w, at, rels[static_cast<std::size_t>(i) % rels.size()]));
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i; j < words.size(); ++j) {
      const bool same = dehn.dehn_reduce(words[i] * words[j].inverse()).empty();
      CHECK(same == (dehn.normal_form(words[i]) == dehn.normal_form(words[j])));
    }
  }
}

TEST_CASE("shortlex ordering") {
  CHECK(GroupWord{1} < GroupWord{1, 1});
  CHECK(GroupWord{-1, 2} < GroupWord{1, 2});
  CHECK(GroupWord{} < GroupWord{-2});
}
