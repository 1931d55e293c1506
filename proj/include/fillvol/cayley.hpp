#pragma once

// Truncated Cayley 2-complexes and explicit finite 2-complexes, their
// boundary matrices, and the lattice of integral 1-cycles.
//
// A ball built from a presentation can be materialized lazily: vertices,
// edges and cells are created on first request, so fillings and rooted cycle
// searches touch only the part of a large ball they need. All member
// functions are safe to call concurrently. Indices are assigned in creation
// order; edge_key / cell_key give a creation-order independent ordering.

#include "fillvol/types.hpp"
#include "fillvol/words.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fillvol {

struct BallEdge {
  Index source = 0;
  Index target = 0;
  int generator = -1;  // -1 for loaded complexes
  std::string label;
};

struct BallCell {
  Index base = 0;
  int relator = -1;  // -1 for loaded complexes
  IntegralChain boundary;
  std::string label;
};

/// One step along an edge: +1 traverses source -> target.
struct Adjacent {
  Index edge = 0;
  int direction = 1;
  Index neighbor = 0;
};

/// Creation-order independent identity of an edge: (source word, generator)
/// for Cayley balls, (empty word, index) for loaded complexes.
using EdgeKey = std::pair<GroupWord, Index>;

class CayleyBall {
 public:
  /// Nothing materialized beyond the identity vertex.
  static CayleyBall lazy(Presentation presentation, NormalFormStrategy strategy, int radius);

  CayleyBall(CayleyBall&&) noexcept;
  CayleyBall& operator=(CayleyBall&&) noexcept;
  ~CayleyBall();

  [[nodiscard]] bool is_cayley() const;
  /// Loaded complexes and fully built balls are complete.
  [[nodiscard]] bool complete() const;
  [[nodiscard]] int radius() const;  // -1 for loaded complexes
  [[nodiscard]] const Presentation* presentation() const;
  [[nodiscard]] const WordProblem* word_problem() const;
  [[nodiscard]] Index root() const { return 0; }

  [[nodiscard]] Index vertex_count() const;
  [[nodiscard]] Index edge_count() const;
  [[nodiscard]] Index cell_count() const;

  [[nodiscard]] GroupWord vertex_word(Index v) const;
  /// Normal-form length; 0 for loaded complexes.
  [[nodiscard]] int vertex_depth(Index v) const;
  [[nodiscard]] BallEdge edge(Index e) const;
  [[nodiscard]] BallCell cell(Index c) const;
  [[nodiscard]] std::optional<Index> find_vertex(const GroupWord& w) const;
  /// A loaded edge id, or for Cayley balls an edge index or "word.gen" as
  /// rendered by edge_name.
  [[nodiscard]] std::optional<Index> find_edge(std::string_view label) const;

  /// Every edge at v, materializing the neighbors of v.
  [[nodiscard]] std::vector<Adjacent> adjacency(Index v) const;
  /// Edges at v created so far.
  [[nodiscard]] std::vector<Adjacent> known_adjacency(Index v) const;

  /// Breadth-first materialization of every vertex within graph distance h
  /// of the root, with full adjacency for those at distance < h.
  void materialize_layers(int h) const;
  /// Graph distance from the root if it is at most the materialized depth.
  [[nodiscard]] std::optional<int> distance(Index v) const;
  [[nodiscard]] int layers_materialized() const;

  /// Materializes the whole ball including all cells.
  void materialize_all() const;

  /// Indices of the cells whose boundary has a nonzero coefficient on e.
  [[nodiscard]] std::vector<Index> cells_on_edge(Index e) const;

  [[nodiscard]] EdgeKey edge_key(Index e) const;
  /// The cell boundary written in edge keys, in key order.
  [[nodiscard]] std::vector<std::pair<EdgeKey, std::int64_t>> cell_key(Index c) const;

  /// vertices x edges and edges x cells over everything materialized.
  [[nodiscard]] IncidenceMatrix d1() const;
  [[nodiscard]] IncidenceMatrix d2() const;

  /// Renders an edge as "label" or "word.gen" for output.
  [[nodiscard]] std::string edge_name(Index e) const;

 private:
  struct State;
  explicit CayleyBall(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;

  friend CayleyBall load_complex(std::string_view text);
};

/// Every vertex, edge and cell of the ball of the given radius.
CayleyBall build_ball(const Presentation& p, const NormalFormStrategy& s, int radius);

/// Parses `vertices: n`, `edge <id> <src> <dst>`, `cell <id> <edge>:<int> ...`.
/// Throws SyntaxError or BoundaryError.
CayleyBall load_complex(std::string_view text);

/// A Z-basis of the integral 1-cycles of a complete complex, optionally
/// replaced by its multiple scale * basis.
struct IntegralCycleLattice {
  const CayleyBall* complex = nullptr;
  std::vector<IntegralChain> basis;
  std::int64_t scale = 1;

  [[nodiscard]] Index rank() const { return static_cast<Index>(basis.size()); }
};

IntegralCycleLattice cycle_lattice_basis(const CayleyBall& b);

/// Number of connected components of the materialized 1-skeleton.
Index component_count(const CayleyBall& b);

/// Directed simple cycles of length <= max_length as 1-chains, ordered by
/// length and then discovery order. With `rooted` only cycles through the
/// root vertex are produced and the ball may be lazy; otherwise the complex
/// must be complete.
std::vector<IntegralChain> simple_cycles(const CayleyBall& b, int max_length, bool rooted = false);

/// Walks the sums of multisets of `cycles` (sorted by length) that are
/// conformal, meaning no cancellation, so the l1 norm of the sum equals the
/// total length, which is kept <= max_length. The visitor sees each sum of
/// two or more members together with the member indices; returning false
/// skips the extensions of that multiset. The same chain can be reached from
/// several multisets.
using ConformalVisitor =
    std::function<bool(const IntegralChain& sum, int length, const std::vector<std::size_t>& members)>;
void for_each_conformal_sum(const std::vector<IntegralChain>& cycles, int max_length, const ConformalVisitor& visit);

struct CycleEnumerationLimits {
  std::size_t max_cycles = 2'000'000;
};

/// Every cycle of the lattice with l1 norm <= k, once each, zero included.
/// Throws Overflow past the count limit.
std::vector<IntegralChain> enumerate_integral_cycles(const IntegralCycleLattice& lattice, int k,
                                                     const CycleEnumerationLimits& limits = {});

/// The 1-chain traced by reading `word` from the root. Throws
/// InvalidArgument if the path leaves the ball.
IntegralChain path_chain(const CayleyBall& b, const GroupWord& word);

/// Boundary of a chain of edges, as a chain of vertices.
IntegralChain boundary_of_edges(const CayleyBall& b, const IntegralChain& c);

}  // namespace fillvol
