#include "fillvol/cayley.hpp"

#include "fillvol/error.hpp"
#include "fillvol/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace fillvol {

namespace {
constexpr Index kUnknown = -2;
constexpr Index kOutside = -1;
}  // namespace

struct CayleyBall::State {
  mutable std::mutex mutex;

  // Cayley balls only
  std::optional<WordProblem> wp;
  int radius = -1;
  int gens = 0;
  std::unordered_map<GroupWord, Index, WordHash> vertex_index;
  std::vector<GroupWord> words;
  std::vector<std::vector<Index>> steps;  // per vertex, slot letter + gens; kUnknown / kOutside / id
  std::unordered_map<std::int64_t, Index> edge_index;  // source * gens + generator

  // loaded complexes only
  std::unordered_map<std::string, Index> edge_labels;

  std::vector<int> dist;
  std::vector<bool> full;
  std::vector<std::vector<Adjacent>> adj;
  std::vector<BallEdge> edges;
  std::vector<std::vector<Index>> edge_cells;
  std::vector<bool> edge_cells_done;
  std::vector<BallCell> cells;
  std::map<std::vector<std::pair<Index, std::int64_t>>, Index> cell_index;
  int layers = 0;
  bool complete = false;

  [[nodiscard]] bool cayley() const { return wp.has_value(); }

  Index add_vertex(GroupWord w) {
    const Index id = static_cast<Index>(words.size());
    vertex_index.emplace(w, id);
    words.push_back(std::move(w));
    steps.emplace_back(static_cast<std::size_t>(2 * gens + 1), kUnknown);
    dist.push_back(-1);
    full.push_back(false);
    adj.emplace_back();
    return id;
  }

  Index add_edge(Index source, Index target, int generator, std::string label) {
    const Index id = static_cast<Index>(edges.size());
    edges.push_back({source, target, generator, std::move(label)});
    edge_cells.emplace_back();
    edge_cells_done.push_back(false);
    adj[static_cast<std::size_t>(source)].push_back({id, 1, target});
    adj[static_cast<std::size_t>(target)].push_back({id, -1, source});
    return id;
  }

  /// Vertex reached from v by one letter, or kOutside.
  Index step(Index v, Letter l) {
    const auto slot = static_cast<std::size_t>(l + gens);
    if (const Index known = steps[static_cast<std::size_t>(v)][slot]; known != kUnknown) return known;
    GroupWord w = words[static_cast<std::size_t>(v)];
    w *= l;
    const auto nf = wp->normal_form_within(w, static_cast<std::size_t>(radius));
    if (!nf) {
      steps[static_cast<std::size_t>(v)][slot] = kOutside;
      return kOutside;
    }
    const auto it = vertex_index.find(*nf);
    const Index target = it != vertex_index.end() ? it->second : add_vertex(*nf);
    steps[static_cast<std::size_t>(v)][slot] = target;
    steps[static_cast<std::size_t>(target)][static_cast<std::size_t>(-l + gens)] = v;
    if (l > 0) {
      edge_between(v, target, l - 1);
    } else {
      edge_between(target, v, -l - 1);
    }
    return target;
  }

  Index edge_between(Index source, Index target, int generator) {
    const std::int64_t key = static_cast<std::int64_t>(source) * gens + generator;
    const auto it = edge_index.find(key);
    if (it != edge_index.end()) return it->second;
    const Index id = add_edge(source, target, generator, {});
    edge_index.emplace(key, id);
    return id;
  }

  void expand(Index v) {
    if (full[static_cast<std::size_t>(v)]) return;
    if (cayley()) {
      for (int g = 1; g <= gens; ++g) {
        step(v, g);
        step(v, -g);
      }
    }
    full[static_cast<std::size_t>(v)] = true;
  }

  [[nodiscard]] EdgeKey edge_key(Index e) const {
    if (!cayley()) return {GroupWord{}, e};
    const auto& edge = edges[static_cast<std::size_t>(e)];
    return {words[static_cast<std::size_t>(edge.source)], edge.generator};
  }

  /// Registers a cell unless its boundary (up to sign) is already present.
  /// The stored orientation makes the coefficient on the least edge key positive.
  std::optional<Index> add_cell(Index base, int relator, IntegralChain boundary, std::string label) {
    if (boundary.empty()) return std::nullopt;
    const auto by_key = [&](const auto& x, const auto& y) { return edge_key(x.first) < edge_key(y.first); };
    const auto least = std::min_element(boundary.terms.begin(), boundary.terms.end(), by_key);
    if (least->second < 0)
      for (auto& t : boundary.terms) t.second = -t.second;
    const auto [it, inserted] = cell_index.emplace(boundary.terms, static_cast<Index>(cells.size()));
    if (!inserted) return it->second;
    for (const auto& [e, coeff] : boundary.terms) edge_cells[static_cast<std::size_t>(e)].push_back(it->second);
    cells.push_back({base, relator, std::move(boundary), std::move(label)});
    return it->second;
  }

  /// The cell (base, relator) if its whole loop lies in the ball.
  std::optional<Index> trace_cell(Index base, int relator) {
    const auto& r = wp->presentation().relators[static_cast<std::size_t>(relator)];
    std::vector<std::pair<Index, std::int64_t>> terms;
    Index u = base;
    for (const Letter l : r.letters()) {
      const Index next = step(u, l);
      if (next == kOutside) return std::nullopt;
      if (l > 0) {
        terms.emplace_back(edge_between(u, next, l - 1), 1);
      } else {
        terms.emplace_back(edge_between(next, u, -l - 1), -1);
      }
      u = next;
    }
    return add_cell(base, relator, make_chain<std::int64_t>(1, std::move(terms)), {});
  }

  void cells_at(Index e) {
    if (edge_cells_done[static_cast<std::size_t>(e)] || !cayley()) return;
    const BallEdge edge = edges[static_cast<std::size_t>(e)];
    const auto& rels = wp->presentation().relators;
    for (std::size_t ri = 0; ri < rels.size(); ++ri) {
      const auto& r = rels[ri].letters();
      for (std::size_t i = 0; i < r.size(); ++i) {
        const int g = r[i] > 0 ? r[i] - 1 : -r[i] - 1;
        if (g != edge.generator) continue;
        // position i of the loop sits at the source (positive letter) or
        // target (inverse letter) of e; walk back to the base point
        Index u = r[i] > 0 ? edge.source : edge.target;
        for (std::size_t j = i; j > 0 && u != kOutside; --j) u = step(u, -r[j - 1]);
        if (u == kOutside) continue;
        trace_cell(u, static_cast<int>(ri));
      }
    }
    edge_cells_done[static_cast<std::size_t>(e)] = true;
  }
};

CayleyBall::CayleyBall(std::unique_ptr<State> state) : state_(std::move(state)) {}
CayleyBall::CayleyBall(CayleyBall&&) noexcept = default;
CayleyBall& CayleyBall::operator=(CayleyBall&&) noexcept = default;
CayleyBall::~CayleyBall() = default;

CayleyBall CayleyBall::lazy(Presentation presentation, NormalFormStrategy strategy, int radius) {
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  if (strategy.kind == NormalFormStrategy::Kind::BoundedEnumeration && strategy.radius < radius) {
    throw RadiusExceeded("enumeration radius " + std::to_string(strategy.radius) + " is below ball radius " +
                         std::to_string(radius));
  }
  auto s = std::make_unique<State>();
  s->gens = presentation.generator_count;
  s->radius = radius;
  s->wp.emplace(std::move(presentation), strategy);
  s->add_vertex(GroupWord{});
  s->dist[0] = 0;
  return CayleyBall(std::move(s));
}

bool CayleyBall::is_cayley() const { return state_->cayley(); }

bool CayleyBall::complete() const {
  std::lock_guard lock(state_->mutex);
  return state_->complete;
}

int CayleyBall::radius() const { return state_->radius; }

const Presentation* CayleyBall::presentation() const {
  return state_->wp ? &state_->wp->presentation() : nullptr;
}

const WordProblem* CayleyBall::word_problem() const { return state_->wp ? &*state_->wp : nullptr; }

Index CayleyBall::vertex_count() const {
  std::lock_guard lock(state_->mutex);
  return static_cast<Index>(state_->dist.size());
}

Index CayleyBall::edge_count() const {
  std::lock_guard lock(state_->mutex);
  return static_cast<Index>(state_->edges.size());
}

Index CayleyBall::cell_count() const {
  std::lock_guard lock(state_->mutex);
  return static_cast<Index>(state_->cells.size());
}

GroupWord CayleyBall::vertex_word(Index v) const {
  std::lock_guard lock(state_->mutex);
  return state_->cayley() ? state_->words.at(static_cast<std::size_t>(v)) : GroupWord{};
}

int CayleyBall::vertex_depth(Index v) const {
  std::lock_guard lock(state_->mutex);
  return state_->cayley() ? static_cast<int>(state_->words.at(static_cast<std::size_t>(v)).size()) : 0;
}

BallEdge CayleyBall::edge(Index e) const {
  std::lock_guard lock(state_->mutex);
  return state_->edges.at(static_cast<std::size_t>(e));
}

BallCell CayleyBall::cell(Index c) const {
  std::lock_guard lock(state_->mutex);
  return state_->cells.at(static_cast<std::size_t>(c));
}

std::optional<Index> CayleyBall::find_vertex(const GroupWord& w) const {
  std::lock_guard lock(state_->mutex);
  const auto it = state_->vertex_index.find(w);
  if (it == state_->vertex_index.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> CayleyBall::find_edge(std::string_view label) const {
  {
    std::lock_guard lock(state_->mutex);
    if (!state_->cayley()) {
      const auto it = state_->edge_labels.find(std::string(label));
      if (it == state_->edge_labels.end()) return std::nullopt;
      return it->second;
    }
    Index id = 0;
    const auto [p, ec] = std::from_chars(label.data(), label.data() + label.size(), id);
    if (ec == std::errc() && p == label.data() + label.size()) {
      if (id < 0 || id >= static_cast<Index>(state_->edges.size())) return std::nullopt;
      return id;
    }
  }
  // "word.gen" as printed by edge_name
  const auto dot = label.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const Presentation& pres = *presentation();
  const auto name = label.substr(dot + 1);
  const auto gen = std::find(pres.names.begin(), pres.names.end(), name);
  if (gen == pres.names.end()) return std::nullopt;
  const auto word_text = label.substr(0, dot);
  GroupWord w;
  try {
    w = word_text == "1" ? GroupWord() : word_problem()->normal_form(pres.parse_word(word_text));
  } catch (const Error&) {
    return std::nullopt;
  }
  const auto v = find_vertex(w);
  if (!v) return std::nullopt;
  const int g = static_cast<int>(gen - pres.names.begin());
  for (const Adjacent& a : known_adjacency(*v))
    if (a.direction == 1 && edge(a.edge).generator == g) return a.edge;
  return std::nullopt;
}

std::vector<Adjacent> CayleyBall::adjacency(Index v) const {
  std::lock_guard lock(state_->mutex);
  state_->expand(v);
  return state_->adj.at(static_cast<std::size_t>(v));
}

std::vector<Adjacent> CayleyBall::known_adjacency(Index v) const {
  std::lock_guard lock(state_->mutex);
  return state_->adj.at(static_cast<std::size_t>(v));
}

void CayleyBall::materialize_layers(int h) const {
  std::lock_guard lock(state_->mutex);
  State& s = *state_;
  if (h <= s.layers) return;
  std::fill(s.dist.begin(), s.dist.end(), -1);
  s.dist[0] = 0;
  std::deque<Index> queue{0};
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    const int d = s.dist[static_cast<std::size_t>(v)];
    if (d >= h) continue;
    s.expand(v);
    for (const auto& a : s.adj[static_cast<std::size_t>(v)]) {
      if (s.dist[static_cast<std::size_t>(a.neighbor)] >= 0) continue;
      s.dist[static_cast<std::size_t>(a.neighbor)] = d + 1;
      queue.push_back(a.neighbor);
    }
  }
  s.layers = h;
}

std::optional<int> CayleyBall::distance(Index v) const {
  std::lock_guard lock(state_->mutex);
  const int d = state_->dist.at(static_cast<std::size_t>(v));
  if (d < 0 || d > state_->layers) return std::nullopt;
  return d;
}

int CayleyBall::layers_materialized() const {
  std::lock_guard lock(state_->mutex);
  return state_->layers;
}

void CayleyBall::materialize_all() const {
  {
    std::lock_guard lock(state_->mutex);
    if (state_->complete) return;
  }
  // every vertex has normal form length <= radius, hence distance <= radius
  materialize_layers(state_->radius + 1);
  std::lock_guard lock(state_->mutex);
  State& s = *state_;
  const auto relator_count = static_cast<int>(s.wp->presentation().relators.size());
  for (Index v = 0; v < static_cast<Index>(s.words.size()); ++v) {
    s.expand(v);
    for (int r = 0; r < relator_count; ++r) s.trace_cell(v, r);
  }
  std::fill(s.edge_cells_done.begin(), s.edge_cells_done.end(), true);
  s.complete = true;
}

std::vector<Index> CayleyBall::cells_on_edge(Index e) const {
  std::lock_guard lock(state_->mutex);
  state_->cells_at(e);
  return state_->edge_cells.at(static_cast<std::size_t>(e));
}

EdgeKey CayleyBall::edge_key(Index e) const {
  std::lock_guard lock(state_->mutex);
  return state_->edge_key(e);
}

std::vector<std::pair<EdgeKey, std::int64_t>> CayleyBall::cell_key(Index c) const {
  std::lock_guard lock(state_->mutex);
  std::vector<std::pair<EdgeKey, std::int64_t>> key;
  for (const auto& [e, coeff] : state_->cells.at(static_cast<std::size_t>(c)).boundary.terms) {
    key.emplace_back(state_->edge_key(e), coeff);
  }
  std::sort(key.begin(), key.end());
  return key;
}

IncidenceMatrix CayleyBall::d1() const {
  std::lock_guard lock(state_->mutex);
  const State& s = *state_;
  std::vector<Eigen::Triplet<std::int64_t>> t;
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    const auto& edge = s.edges[e];
    if (edge.source == edge.target) continue;
    t.emplace_back(edge.target, static_cast<Index>(e), 1);
    t.emplace_back(edge.source, static_cast<Index>(e), -1);
  }
  IncidenceMatrix m(static_cast<Index>(s.dist.size()), static_cast<Index>(s.edges.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

IncidenceMatrix CayleyBall::d2() const {
  std::lock_guard lock(state_->mutex);
  const State& s = *state_;
  std::vector<Eigen::Triplet<std::int64_t>> t;
  for (std::size_t c = 0; c < s.cells.size(); ++c)
    for (const auto& [e, coeff] : s.cells[c].boundary.terms) t.emplace_back(e, static_cast<Index>(c), coeff);
  IncidenceMatrix m(static_cast<Index>(s.edges.size()), static_cast<Index>(s.cells.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::string CayleyBall::edge_name(Index e) const {
  std::lock_guard lock(state_->mutex);
  const auto& edge = state_->edges.at(static_cast<std::size_t>(e));
  if (!state_->cayley()) return edge.label;
  const auto& p = state_->wp->presentation();
  const auto& w = state_->words[static_cast<std::size_t>(edge.source)];
  return (w.empty() ? std::string("1") : p.format(w)) + "." + p.names[static_cast<std::size_t>(edge.generator)];
}

CayleyBall build_ball(const Presentation& p, const NormalFormStrategy& s, int radius) {
  CayleyBall ball = CayleyBall::lazy(p, s, radius);
  ball.materialize_all();
  return ball;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t parse_int(std::string_view text, int line, int column, const char* what) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw SyntaxError("BadInteger", line, column, std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

CayleyBall load_complex(std::string_view text) {
  auto s = std::make_unique<CayleyBall::State>();
  bool have_vertices = false;
  std::unordered_map<std::string, bool> cell_ids;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    const auto column = [&](std::string_view t) { return static_cast<int>(t.data() - line.data()) + 1; };

    if (tok[0] == "vertices:") {
      if (have_vertices) throw SyntaxError("DuplicateVertices", line_no, 1, "vertices given twice");
      if (tok.size() != 2) throw SyntaxError("BadVertices", line_no, 1, "expected 'vertices: <n>'");
      const auto n = parse_int(tok[1], line_no, column(tok[1]), "vertex count");
      if (n < 1) throw SyntaxError("BadVertices", line_no, column(tok[1]), "need at least one vertex");
      for (std::int64_t v = 0; v < n; ++v) {
        s->dist.push_back(-1);
        s->full.push_back(true);
        s->adj.emplace_back();
      }
      s->dist[0] = 0;
      have_vertices = true;
    } else if (tok[0] == "edge") {
      if (!have_vertices) throw SyntaxError("MissingVertices", line_no, 1, "edge before vertices");
      if (!s->cells.empty()) throw SyntaxError("EdgeAfterCell", line_no, 1, "edges must precede cells");
      if (tok.size() != 4) throw SyntaxError("BadEdge", line_no, 1, "expected 'edge <id> <src> <dst>'");
      const std::string id(tok[1]);
      if (s->edge_labels.contains(id)) throw SyntaxError("DuplicateEdge", line_no, column(tok[1]), id);
      const auto src = parse_int(tok[2], line_no, column(tok[2]), "source vertex");
      const auto dst = parse_int(tok[3], line_no, column(tok[3]), "target vertex");
      const auto n = static_cast<std::int64_t>(s->dist.size());
      if (src < 0 || src >= n) throw SyntaxError("BadVertex", line_no, column(tok[2]), "vertex out of range");
      if (dst < 0 || dst >= n) throw SyntaxError("BadVertex", line_no, column(tok[3]), "vertex out of range");
      const Index e = s->add_edge(src, dst, -1, id);
      s->edge_labels.emplace(id, e);
      s->edge_cells_done.back() = true;
    } else if (tok[0] == "cell") {
      if (!have_vertices) throw SyntaxError("MissingVertices", line_no, 1, "cell before vertices");
      if (tok.size() < 2) throw SyntaxError("BadCell", line_no, 1, "expected 'cell <id> <edge>:<int> ...'");
      const std::string id(tok[1]);
      if (!cell_ids.emplace(id, true).second) throw SyntaxError("DuplicateCell", line_no, column(tok[1]), id);
      std::vector<std::pair<Index, std::int64_t>> terms;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto colon = tok[i].rfind(':');
        if (colon == std::string_view::npos) {
          throw SyntaxError("BadIncidence", line_no, column(tok[i]), "expected <edge>:<int>");
        }
        const auto edge_id = std::string(tok[i].substr(0, colon));
        const auto it = s->edge_labels.find(edge_id);
        if (it == s->edge_labels.end()) throw SyntaxError("UnknownEdge", line_no, column(tok[i]), edge_id);
        terms.emplace_back(it->second, parse_int(tok[i].substr(colon + 1), line_no, column(tok[i]), "incidence"));
      }
      auto boundary = make_chain<std::int64_t>(1, std::move(terms));
      const Index c = static_cast<Index>(s->cells.size());
      for (const auto& [e, coeff] : boundary.terms) s->edge_cells[static_cast<std::size_t>(e)].push_back(c);
      s->cells.push_back({0, -1, std::move(boundary), id});
    } else {
      throw SyntaxError("UnknownKey", line_no, 1, std::string(tok[0]));
    }
  }
  if (!have_vertices) throw SyntaxError("MissingVertices", line_no, 1, "no 'vertices:' line");

  for (std::size_t c = 0; c < s->cells.size(); ++c) {
    std::map<Index, std::int64_t> vertex_sum;
    for (const auto& [e, coeff] : s->cells[c].boundary.terms) {
      const auto& edge = s->edges[static_cast<std::size_t>(e)];
      vertex_sum[edge.target] += coeff;
      vertex_sum[edge.source] -= coeff;
    }
    for (const auto& [v, total] : vertex_sum)
      if (total != 0) throw BoundaryError("boundary of cell '" + s->cells[c].label + "' is not a cycle");
  }
  s->complete = true;
  s->layers = static_cast<int>(s->dist.size());
  // graph distances from vertex 0
  std::deque<Index> queue{0};
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (const auto& a : s->adj[static_cast<std::size_t>(v)]) {
      if (s->dist[static_cast<std::size_t>(a.neighbor)] >= 0) continue;
      s->dist[static_cast<std::size_t>(a.neighbor)] = s->dist[static_cast<std::size_t>(v)] + 1;
      queue.push_back(a.neighbor);
    }
  }
  return CayleyBall(std::move(s));
}

IntegralChain path_chain(const CayleyBall& b, const GroupWord& word) {
  if (!b.is_cayley()) throw InvalidArgument("paths by words need a Cayley ball");
  std::vector<std::pair<Index, std::int64_t>> terms;
  Index v = b.root();
  for (const Letter l : word.letters()) {
    const int generator = (l > 0 ? l : -l) - 1;
    const int direction = l > 0 ? 1 : -1;
    GroupWord next = b.vertex_word(v);
    next *= l;
    const auto target = b.word_problem()->normal_form_within(next, static_cast<std::size_t>(b.radius()));
    if (!target) throw InvalidArgument("path leaves the ball of radius " + std::to_string(b.radius()));
    bool found = false;
    for (const auto& a : b.adjacency(v)) {
      if (a.direction != direction || b.edge(a.edge).generator != generator) continue;
      terms.emplace_back(a.edge, direction);
      v = a.neighbor;
      found = true;
      break;
    }
    if (!found) throw std::logic_error("path_chain: missing edge");
  }
  return make_chain<std::int64_t>(1, std::move(terms));
}

IntegralChain boundary_of_edges(const CayleyBall& b, const IntegralChain& c) {
  std::vector<std::pair<Index, std::int64_t>> terms;
  for (const auto& [e, coeff] : c.terms) {
    const auto edge = b.edge(e);
    terms.emplace_back(edge.target, coeff);
    terms.emplace_back(edge.source, -coeff);
  }
  return make_chain<std::int64_t>(0, std::move(terms));
}

Index component_count(const CayleyBall& b) {
  const Index n = b.vertex_count();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](Index v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  Index components = n;
  for (Index e = 0; e < b.edge_count(); ++e) {
    const auto edge = b.edge(e);
    const Index x = find(edge.source), y = find(edge.target);
    if (x != y) {
      parent[static_cast<std::size_t>(x)] = y;
      --components;
    }
  }
  return components;
}

IntegralCycleLattice cycle_lattice_basis(const CayleyBall& b) {
  if (!b.complete()) b.materialize_all();
  const IncidenceMatrix d1 = b.d1();
  MatrixZ dense = MatrixZ::Zero(d1.rows(), d1.cols());
  for (Index j = 0; j < d1.outerSize(); ++j)
    for (IncidenceMatrix::InnerIterator it(d1, j); it; ++it) dense(it.row(), it.col()) = it.value();
  const MatrixZ kernel = lattice::integer_kernel_basis(dense);
  IntegralCycleLattice out;
  out.complex = &b;
  for (Index k = 0; k < kernel.cols(); ++k) {
    std::vector<std::pair<Index, std::int64_t>> terms;
    for (Index e = 0; e < kernel.rows(); ++e)
      if (kernel(e, k) != 0) terms.emplace_back(e, kernel(e, k).convert_to<std::int64_t>());
    out.basis.push_back(make_chain<std::int64_t>(1, std::move(terms)));
  }
  const Index expected = b.edge_count() - b.vertex_count() + component_count(b);
  if (out.rank() != expected) throw std::logic_error("cycle lattice rank disagrees with the graph formula");
  return out;
}

}  // namespace fillvol
