// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Shared FV tables are computed once and reused across criteria.

#include "fillvol/cylinder.hpp"
#include "fillvol/error.hpp"
#include "fillvol/filling.hpp"
#include "fillvol/normedmod.hpp"
#include "oracles.hpp"
#include "random_complexes.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace fillvol;

namespace {

const char* kZ2 = "gens: x y\nrels: x y X Y\n";
const char* kGenus2 = "gens: a b c d\nrels: a b A B c d C D\n";
const char* kRp2 = "vertices: 1\nedge e 0 0\ncell f e:2\n";

/// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::ostringstream info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string str(const std::optional<Rational>& v) { return v ? to_string(*v) : "inf"; }

FVTable table(const char* presentation, const NormalFormStrategy& s, int radius, const CoefficientRing& ring,
              std::int64_t lattice_scale = 1) {
  FVOptions opts;
  opts.lattice_scale = lattice_scale;
  return fv2_estimate(CayleyBall::lazy(parse_presentation(presentation), s, radius), 12, ring, opts);
}

/// Caches the FV tables that several criteria share.
struct Tables {
  std::map<std::string, FVTable> cache;

  const FVTable& get(const std::string& key, const std::function<FVTable()>& make) {
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make()).first;
    return it->second;
  }
  const FVTable& z2(int radius, const CoefficientRing& ring, std::int64_t scale = 1) {
    return get("z2/" + std::to_string(radius) + "/" + ring.spec() + "/" + std::to_string(scale),
               [&] { return table(kZ2, NormalFormStrategy::abelian(), radius, ring, scale); });
  }
  const FVTable& genus2(const CoefficientRing& ring) {
    return get("genus2/" + ring.spec(), [&] { return table(kGenus2, NormalFormStrategy::dehn(), 8, ring); });
  }
};

void remark(Check& c, Tables&) {
  for (int n = 1; n <= 4; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto row = rational_cycle_demo(n);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(row.l1 == 1, "n=" + std::to_string(n) + " l1=" + to_string(row.l1));
    c.expect(row.fill_q == Rational(n, 4), "n=" + std::to_string(n) + " fill=" + to_string(row.fill_q));
    c.expect(secs < 120, "n=" + std::to_string(n) + " took " + std::to_string(secs) + "s");
    c.info << "n=" << n << ":" << to_string(row.fill_q) << " ";
  }
}

void z2_quadratic(Check& c, Tables& t) {
  const auto& z = t.z2(6, CoefficientRing::integers());
  const std::map<int, int> expected{{4, 1}, {8, 4}, {12, 9}};
  for (const auto& [k, v] : expected) {
    const auto& got = z.entries[static_cast<std::size_t>(k)].value;
    c.expect(got && *got == v, "FV(" + std::to_string(k) + ")=" + str(got));
    c.expect(oracle::z2_filling_volume(k) == v, "oracle FV(" + std::to_string(k) + ")");
    c.info << "FV(" << k << ")=" << str(got) << " ";
  }
  const auto probe = linearity_probe(z);
  c.expect(probe.verdict == LinearityVerdict::Superlinear, "verdict " + to_string(probe.verdict));
  c.info << to_string(probe.verdict);
}

void ring_inequality(Check& c, Tables& t) {
  const auto compare = [&](const std::string& name, const FVTable& q, const FVTable& z) {
    for (std::size_t k = 0; k < z.entries.size(); ++k) {
      const auto& vq = q.entries[k].value;
      const auto& vz = z.entries[k].value;
      c.expect(vq && (!vz || *vq <= *vz), name + " k=" + std::to_string(k) + " Q=" + str(vq) + " Z=" + str(vz));
    }
    c.info << name << " k<=" << z.entries.size() - 1 << " ";
  };
  compare("Z^2", t.z2(6, CoefficientRing::rationals()), t.z2(6, CoefficientRing::integers()));
  compare("genus-2", t.genus2(CoefficientRing::rationals()), t.genus2(CoefficientRing::integers()));
}

void hyperbolic(Check& c, Tables& t) {
  const auto sc = check_c16(parse_presentation(kGenus2));
  c.expect(sc.satisfied, "C'(1/6) rejected");
  c.expect(sc.max_piece == 1, "max_piece=" + std::to_string(sc.max_piece));
  c.expect(sc.min_relator == 8, "relator length=" + std::to_string(sc.min_relator));
  const auto& q = t.genus2(CoefficientRing::rationals());
  const auto probe = linearity_probe(q);
  c.expect(probe.verdict == LinearityVerdict::ConsistentWithLinear, "verdict " + to_string(probe.verdict));
  c.expect(probe.slope_bound <= 2, "slope " + to_string(probe.slope_bound));
  c.info << to_string(probe.verdict) << " slope=" << to_string(probe.slope_bound);
}

void subrings(Check& c, Tables&) {
  const auto rp2 = load_complex(kRp2);
  const IntegralChain e{1, {{0, 1}}};
  const auto z = fill_over(rp2, e, CoefficientRing::integers());
  c.expect(z.status == FillStatus::Unfillable, "Z: " + to_string(z.status));
  const auto q = fill_over(rp2, e, CoefficientRing::rationals());
  c.expect(q.filled() && *q.value == Rational(1, 2), "Q: " + str(q.value));
  const auto two = fill_over(rp2, e, make_localization({2}), 2);
  c.expect(two.filled() && *two.value == Rational(1, 2) && two.exact && two.scale == 2, "Z_(2): " + str(two.value));
  const auto three_ring = make_localization({3});
  const auto three = fill_over(rp2, e, three_ring, 81);
  c.expect(three.status == FillStatus::Unfillable && three.exact, "Z_(3): " + to_string(three.status));
  // parity certificate: y with y.d2(f) = 2y in the ring and y.e = y outside it
  const bool parity = three.certificate.size() == 1 && three_ring.contains(three.certificate[0].second * 2) &&
                      !three_ring.contains(three.certificate[0].second);
  c.expect(parity, "Z_(3) certificate");
  c.info << "Z:" << to_string(z.status) << " Q:" << str(q.value) << " Z_(2):" << str(two.value)
         << " Z_(3):" << to_string(three.status);
}

template <typename Scalar>
bool cylinder_ok(const ChainMap<Scalar>& f) {
  if (!check_chain_map(f)) return false;
  const auto cyl = mapping_cylinder(f);
  for (const auto& [i, d] : cyl.m.differentials)
    if (!all_zero(Matrix<Scalar>(cyl.m.d(i - 1) * d))) return false;
  for (const auto& [i, r] : cyl.m.ranks) {
    const Index n = f.target.rank(i);
    if (cyl.kappa.component(i) * cyl.incl_c.component(i) != Matrix<Scalar>::Identity(n, n)) return false;
    if (cyl.kappa.component(i) * cyl.incl_b.component(i) != f.component(i)) return false;
  }
  auto hm = homology_ranks(cyl.m), hc = homology_ranks(f.target);
  std::erase_if(hm, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(hc, [](const auto& kv) { return kv.second == 0; });
  return hm == hc && quotient_split_check(cyl.m, cyl.incl_b).splits;
}

void cylinders(Check& c, Tables&) {
  std::mt19937 rng(2024);
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial)
    failures += !cylinder_ok(randomcx::chain_map<Rational>(rng, 1 + trial % 4, 4, 9));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(failures == 0, std::to_string(failures) + " of 200 failed");
  c.expect(secs < 60, "took " + std::to_string(secs) + "s");
  c.info << "200 maps in " << static_cast<int>(secs * 1000) << "ms";
}

void lp_oracles(Check& c, Tables&) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim_n(1, 6), dim_m(1, 4);
  int lp_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram lp;
    const Index n = dim_n(rng), m = dim_m(rng);
    lp.constraints = oracle::random_matrix(rng, m, n, 4);
    lp.rhs = oracle::random_matrix(rng, m, 1, 4).col(0);
    lp.objective = oracle::random_matrix(rng, n, 1, 4).col(0);
    const auto got = simplex_solve(lp);
    const auto want = oracle::lp_by_vertices(lp);
    lp_bad += got.status != want.status || (got.optimal() && got.value != want.value);
  }
  c.expect(lp_bad == 0, std::to_string(lp_bad) + " LP mismatches");

  std::uniform_int_distribution<int> e(-3, 3), pick(0, 9);
  int ilp_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial) % 2, n = 2 + static_cast<std::size_t>(trial) % 3;
    std::vector<std::vector<std::int64_t>> a(m, std::vector<std::int64_t>(n));
    std::vector<std::int64_t> b(m);
    for (auto& row : a)
      for (auto& v : row) v = e(rng);
    std::int64_t box = 6;
    if (pick(rng) < 7) {
      std::vector<std::int64_t> x0(n);
      box = 0;
      for (auto& v : x0) box += std::abs(v = e(rng));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += a[i][j] * x0[j];
    } else {
      for (auto& v : b) v = e(rng) * 2 + 1;
    }
    MatrixZ az(static_cast<Index>(m), static_cast<Index>(n));
    VectorZ bz(static_cast<Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      bz(static_cast<Index>(i)) = b[i];
      for (std::size_t j = 0; j < n; ++j) az(static_cast<Index>(i), static_cast<Index>(j)) = a[i][j];
    }
    const auto got = l1_min_integral(az, bz);
    if (got.optimal()) box = std::max<std::int64_t>(box, static_cast<std::int64_t>(got.value));
    const auto want = oracle::integer_l1_by_search(a, b, static_cast<int>(box));
    ilp_bad += got.optimal() != want.has_value() || (want && got.value != *want);
  }
  c.expect(ilp_bad == 0, std::to_string(ilp_bad) + " integral l1 mismatches");
  c.info << "100 LPs, 100 integral l1";
}

void norms(Check& c, Tables&) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> gens(1, 4), rels(0, 3), scale(1, 4), sign(0, 1);
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = gens(rng);
    const auto m = PresentedModule::make(n, oracle::random_matrix(rng, n, rels(rng), 5));
    // g = permutation times diagonal scaling
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    MatrixQ g = MatrixQ::Zero(n, n), g_inv = MatrixQ::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      Rational s(scale(rng), scale(rng));
      if (sign(rng)) s = -s;
      g(perm[static_cast<std::size_t>(j)], j) = s;
      g_inv(j, perm[static_cast<std::size_t>(j)]) = 1 / s;
    }
    const auto image = PresentedModule::make(n, g * m.relations);
    const auto iso = ModuleMap::make(m, image, g);
    const auto back = ModuleMap::make(image, m, g_inv);
    const Rational there_c = bounded_constant(iso), back_c = bounded_constant(back);
    const Rational both = norm_equivalence_constants(m, image, iso, back);
    for (int i = 0; i < 50; ++i) {
      const VectorQ v = oracle::random_matrix(rng, n, 1, 6).col(0);
      const Rational here = filling_norm(m, v), there = filling_norm(image, iso.apply(v));
      bad += !(there <= there_c * here) || !(here <= back_c * there);
      bad += !(there <= both * here) || !(here <= both * there);
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " bound violations");
  c.info << "50 modules x 50 elements";
}

void well_defined(Check& c, Tables& t) {
  const auto z = CoefficientRing::integers();
  const std::vector<std::pair<std::string, const FVTable*>> tables{
      {"r5", &t.z2(5, z)}, {"r6", &t.z2(6, z)}, {"r7", &t.z2(7, z)}, {"r6x2", &t.z2(6, z, 2)}};
  int worst = 0;
  bool limited = false;
  for (const auto& [fa, a] : tables) {
    for (const auto& [fb, b] : tables) {
      if (a == b) continue;
      const auto w = preceq_witness(samples(*a), samples(*b), 4);
      c.expect(w.constant.has_value(), fa + " vs " + fb + ": no C <= 4");
      if (w.constant) worst = std::max(worst, *w.constant);
      limited = limited || w.range_limited;
    }
  }
  for (const auto& [name, tab] : tables) {
    c.info << name << ":";
    for (const int k : {4, 8, 12})
      c.info << (k == 4 ? "" : ",") << str(tab->entries[static_cast<std::size_t>(k)].value);
    c.info << " ";
  }
  c.info << "max C=" << worst << (limited ? " (range limited)" : "");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Check&, Tables&)>> criteria{
      {"remark chains", remark},
      {"Z^2 quadratic growth", z2_quadratic},
      {"FV_Q <= FV_Z", ring_inequality},
      {"hyperbolic linearity evidence", hyperbolic},
      {"subring separation", subrings},
      {"mapping cylinders", cylinders},
      {"LP oracle equivalence", lp_oracles},
      {"norm calculus", norms},
      {"well-definedness", well_defined},
  };
  Tables tables;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c, tables);
    } catch (const Error& e) {
      c.failures.push_back(e.name() + ": " + e.what());
    } catch (const std::exception& e) {
      c.failures.push_back(e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << "criterion " << i + 1 << " " << (ok ? "PASS" : "FAIL") << " " << criteria[i].first << " ["
              << c.info.str() << "] " << std::fixed << std::setprecision(1) << secs << "s\n";
    for (const auto& f : c.failures) std::cout << "  " << f << "\n";
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
