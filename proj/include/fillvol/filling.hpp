#pragma once

// Filling volumes of integral 1-cycles by 2-chains with coefficients in Z,
// Q or Z_S, the FV estimator over a ball, the growth preorder and a
// linearity probe for filling tables.
//
// Fillings are computed by column generation: linear programs over a patch
// of cells that grows until LP duality certifies the optimum (or a Farkas or
// lattice certificate proves that no filling exists) over every cell of the
// ball, so lazy balls give the same answers as fully built ones.

#include "fillvol/cayley.hpp"
#include "fillvol/rings.hpp"
#include "fillvol/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fillvol {

enum class FillStatus {
  Filled,
  Unfillable,      // certified: no filling with coefficients in the ring
  BoundExhausted,  // Z_S: no unit m <= search_bound gave a filling, none ruled out
};

std::string to_string(FillStatus s);

struct FillResult {
  FillStatus status = FillStatus::Filled;
  std::optional<Rational> value;  // Filled only
  Chain witness;                  // degree 2 over cell indices; d2 * witness == gamma
  bool exact = false;
  CoefficientRing ring = CoefficientRing::integers();
  std::int64_t search_bound = 0;
  std::int64_t scale = 1;  // Z_S: the unit m with value == fill_Z(m gamma) / m
  std::optional<Rational> lower_bound;  // the rational filling value when it exists
  /// Unfillable: y over edges with y.d2(c) in the ring for every cell and
  /// y.gamma outside it (Farkas vector with y.d2 == 0 when even Q fails).
  std::vector<std::pair<Index, Rational>> certificate;

  [[nodiscard]] bool filled() const { return status == FillStatus::Filled; }
};

/// Minimal l1 filling of an integral cycle in the ring. search_bound caps the
/// S-units tried for Z_S. Throws InvalidArgument when gamma is not a cycle.
FillResult fill_over(const CayleyBall& b, const IntegralChain& gamma, const CoefficientRing& ring,
                     std::int64_t search_bound = 0);

enum class CycleScope {
  All,     // every integral cycle of a complete complex
  Rooted,  // cycles built from simple cycles through the root vertex
};

struct FVOptions {
  CycleScope scope = CycleScope::Rooted;
  std::int64_t search_bound = 64;
  /// Use scale * (cycle lattice) as the integral part.
  std::int64_t lattice_scale = 1;
  /// 0 reads FILLVOL_THREADS, where 0 or unset means one per hardware thread.
  unsigned threads = 0;
};

struct FVEntry {
  int k = 0;
  std::optional<Rational> value;  // nullopt: infinite (some cycle has no filling)
  IntegralChain witness_cycle;
  bool ball_limited = false;
  bool exact = true;
};

struct FVTable {
  std::vector<FVEntry> entries;  // k = 0 .. k_max
  int radius = -1;
  CoefficientRing ring = CoefficientRing::integers();
  CycleScope scope = CycleScope::Rooted;
  std::int64_t lattice_scale = 1;
  std::size_t cycles_evaluated = 0;
};

/// FV(k) = max over integral cycles with l1 <= k of the minimal filling, for
/// k = 0 .. k_max. Sums of cycles whose subadditive bound cannot beat the
/// current maximum are skipped (Z and Q only). Throws Overflow.
FVTable fv2_estimate(const CayleyBall& b, int k_max, const CoefficientRing& ring, const FVOptions& options = {});

struct RemarkRow {
  int n = 0;
  Rational l1;
  Rational fill_q;
};

/// The chain (1/4n) [x^n, y^n] in the Z^2 ball: its l1 norm and rational
/// filling value.
RemarkRow rational_cycle_demo(int n);

using Sample = std::pair<int, std::optional<Rational>>;  // (k, value); nullopt is infinite

enum class Extension {
  LastValue,  // g beyond its sampled range repeats its last value
  Zero,       // g beyond its sampled range is 0
};

struct PreceqResult {
  std::optional<int> constant;
  bool range_limited = false;  // some C*k + C fell outside the samples of g
};

/// Smallest C in 1..c_max with f(k) <= C g(Ck + C) + Ck + C at every sampled
/// k of f. Between samples g takes the value at the nearest sample below.
PreceqResult preceq_witness(const std::vector<Sample>& f, const std::vector<Sample>& g, int c_max,
                            Extension extension = Extension::LastValue);

std::vector<Sample> samples(const FVTable& t);

enum class LinearityVerdict { ConsistentWithLinear, Superlinear, Inconclusive };

std::string to_string(LinearityVerdict v);

struct LinearityReport {
  LinearityVerdict verdict = LinearityVerdict::Inconclusive;
  Rational slope_bound;  // max value / k over finite entries with k > 0
};

/// Heuristic growth evidence, never a proof. Superlinear: over the last three
/// points where the table increases, both value/k and the slopes between
/// them strictly increase. ConsistentWithLinear: value/k is non-increasing
/// over the upper half of the range after the first positive value.
LinearityReport linearity_probe(const FVTable& t);

}  // namespace fillvol
