// fillvol: command-line front end. Results go to stdout or --out as JSON or
// CSV; diagnostics go to stderr. Exit codes: 0 success, 1 usage or input
// error, 2 computation error.

#include "fillvol/cayley.hpp"
#include "fillvol/cylinder.hpp"
#include "fillvol/error.hpp"
#include "fillvol/filling.hpp"
#include "fillvol/normedmod.hpp"
#include "fillvol/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace fillvol;
using io::Json;

namespace {

/// Input could not be read or understood; reported with exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string presentation;
  std::string complex;
  std::string strategy = "abelian";
  int radius = 4;
  std::string ring = "z";
  int kmax = 8;
  std::int64_t search_bound = 64;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
  std::string cycle;
  std::string word;
  std::string scope;
  std::int64_t lattice_scale = 1;
  std::string input;
  bool list_edges = false;
  int n = 4;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs an input-reading step, turning library errors into InputError.
template <typename F>
auto load(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError(e.name() + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

Json manifest(const std::string& command, const Options& o, bool geometric) {
  Json m;
  m["command"] = command;
  if (geometric) {
    m["source"] = o.presentation.empty() ? o.complex : o.presentation;
    m["strategy"] = o.presentation.empty() ? "" : o.strategy;
    m["radius"] = o.presentation.empty() ? -1 : o.radius;
  } else {
    m["source"] = o.input;
  }
  if (command != "ball") m["ring"] = o.ring;
  if (command == "fv") m["k_max"] = o.kmax;
  if (command == "fill" || command == "fv") m["search_bound"] = std::to_string(o.search_bound);
  if (command == "fv") m["lattice_scale"] = std::to_string(o.lattice_scale);
  m["seed"] = std::to_string(o.seed);
  return m;
}

std::string csv_manifest(const Json& m) {
  std::string out;
  for (const auto& [key, value] : m.items())
    out += "# " + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  return out;
}

/// Rewrites every JSON number as a decimal string so numeric fields share the
/// exact string form used for rationals.
void stringify_numbers(Json& j) {
  if (j.is_number_integer()) {
    j = j.dump();
  } else if (j.is_structured()) {
    for (auto& child : j) stringify_numbers(child);
  }
}

void emit(const Options& o, const Json& man, const Json& result, const std::string& csv_body) {
  std::string text;
  if (o.format == "csv") {
    text = csv_manifest(man) + csv_body;
  } else {
    Json doc;
    doc["manifest"] = man;
    doc["result"] = result;
    stringify_numbers(doc);
    text = doc.dump(2) + "\n";
  }
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + o.out);
  f << text;
}

std::string flag(bool b) { return b ? "true" : "false"; }

std::optional<CayleyBall> open_space(const Options& o, bool lazy) {
  if (o.presentation.empty() == o.complex.empty())
    throw InputError("give exactly one of --presentation and --complex");
  if (!o.complex.empty()) {
    const std::string text = read_file(o.complex);
    return load([&] { return load_complex(text); });
  }
  const std::string text = read_file(o.presentation);
  auto p = load([&] { return parse_presentation(text); });
  auto s = load([&] { return NormalFormStrategy::parse(o.strategy); });
  if (o.radius < 0) throw InputError("--radius must be non-negative");
  auto ball = load([&] { return CayleyBall::lazy(p, s, o.radius); });
  if (!lazy) ball.materialize_all();
  return ball;
}

CoefficientRing ring_of(const Options& o) {
  return load([&] { return parse_ring(o.ring); });
}

int cmd_ball(const Options& o) {
  auto b = open_space(o, false);
  const Index v = b->vertex_count(), e = b->edge_count(), c = b->cell_count();
  const Index components = component_count(*b);
  const Index cycle_rank = e - v + components;
  Json r;
  r["vertices"] = v;
  r["edges"] = e;
  r["cells"] = c;
  r["components"] = components;
  r["cycle_rank"] = cycle_rank;
  if (b->is_cayley()) {
    const auto sc = check_c16(*b->presentation());
    r["c16"] = {{"satisfied", sc.satisfied}, {"max_piece", sc.max_piece}, {"min_relator", sc.min_relator}};
  }
  if (o.list_edges) {
    Json edges = Json::array();
    for (Index i = 0; i < e; ++i) {
      const auto edge = b->edge(i);
      edges.push_back({{"id", i}, {"name", b->edge_name(i)}, {"source", edge.source}, {"target", edge.target}});
    }
    r["edge_list"] = std::move(edges);
  }
  std::ostringstream csv;
  csv << "vertices,edges,cells,components,cycle_rank\n" << v << ',' << e << ',' << c << ',' << components << ','
      << cycle_rank << '\n';
  emit(o, manifest("ball", o, true), r, csv.str());
  return 0;
}

int cmd_fill(const Options& o) {
  if (o.cycle.empty() == o.word.empty()) throw InputError("give exactly one of --cycle and --word");
  if (!o.word.empty() && o.presentation.empty()) throw InputError("--word needs --presentation");
  const auto ring = ring_of(o);
  auto b = open_space(o, !o.word.empty());
  const IntegralChain gamma = load([&] {
    return o.word.empty() ? io::parse_cycle(*b, o.cycle) : path_chain(*b, b->presentation()->parse_word(o.word));
  });
  const FillResult r = fill_over(*b, gamma, ring, o.search_bound);
  Json result = io::to_json(*b, r);
  std::ostringstream csv;
  csv << "status,value,exact,scale,lower_bound\n"
      << to_string(r.status) << ',' << (r.value ? to_string(*r.value) : "") << ',' << flag(r.exact) << ','
      << r.scale << ',' << (r.lower_bound ? to_string(*r.lower_bound) : "") << '\n';
  emit(o, manifest("fill", o, true), result, csv.str());
  return 0;
}

int cmd_fv(const Options& o) {
  const auto ring = ring_of(o);
  if (o.kmax < 0) throw InputError("--kmax must be non-negative");
  FVOptions opts;
  opts.search_bound = o.search_bound;
  opts.lattice_scale = o.lattice_scale;
  if (o.scope.empty())
    opts.scope = o.presentation.empty() ? CycleScope::All : CycleScope::Rooted;
  else if (o.scope == "all" || o.scope == "rooted")
    opts.scope = o.scope == "all" ? CycleScope::All : CycleScope::Rooted;
  else
    throw InputError("--scope must be rooted or all");
  auto b = open_space(o, opts.scope == CycleScope::Rooted);
  const FVTable t = fv2_estimate(*b, o.kmax, ring, opts);
  const bool limited = std::any_of(t.entries.begin(), t.entries.end(), [](const FVEntry& e) { return e.ball_limited; });
  if (limited && !o.presentation.empty())
    std::cerr << "note: some witnesses reach the ball boundary; compare with --radius " << o.radius + 2 << "\n";
  emit(o, manifest("fv", o, true), io::to_json(*b, t), io::fv_csv(t));
  return 0;
}

int cmd_norm(const Options& o) {
  const std::string text = read_file(o.input);
  Json result;
  std::string csv = "quantity,value\n";
  load([&] {
    const Json in = Json::parse(text);
    if (in.contains("module")) {
      const auto m = io::module_from_json(in.at("module"));
      Json norms = Json::array();
      for (const auto& v : in.value("vectors", Json::array())) {
        const Rational n = filling_norm(m, io::vector_from_json(v));
        norms.push_back(to_string(n));
        csv += "filling_norm," + to_string(n) + "\n";
      }
      result["filling_norms"] = std::move(norms);
    }
    if (in.contains("map")) {
      const Json& f = in.at("map");
      const auto source = io::module_from_json(f.at("source"));
      const auto target = io::module_from_json(f.at("target"));
      const auto map = ModuleMap::make(source, target, io::matrix_from_json(f.at("matrix"), source.generator_count));
      const Rational c = bounded_constant(map);
      result["bounded_constant"] = to_string(c);
      csv += "bounded_constant," + to_string(c) + "\n";
    }
    if (in.contains("equivalence")) {
      const Json& q = in.at("equivalence");
      const auto m = io::module_from_json(q.at("m"));
      const auto mp = io::module_from_json(q.at("m_prime"));
      const auto iso = ModuleMap::make(m, mp, io::matrix_from_json(q.at("iso"), m.generator_count));
      const auto inv = ModuleMap::make(mp, m, io::matrix_from_json(q.at("iso_inv"), mp.generator_count));
      const Rational c = norm_equivalence_constants(m, mp, iso, inv);
      result["equivalence_constant"] = to_string(c);
      csv += "equivalence_constant," + to_string(c) + "\n";
    }
    return 0;
  });
  Options shown = o;
  shown.ring = "q";
  emit(o, manifest("norm", shown, false), result, csv);
  return 0;
}

template <typename Scalar>
int cylinder_report(const Options& o, const Json& in) {
  const auto f = load([&] {
    const auto source = io::complex_from_json<Scalar>(in.at("source"));
    const auto target = io::complex_from_json<Scalar>(in.at("target"));
    return io::chain_map_from_json<Scalar>(source, target, in.at("map"));
  });
  const bool is_chain_map = check_chain_map(f);
  Json result;
  result["chain_map"] = is_chain_map;
  if (!is_chain_map) {
    emit(o, manifest("cylinder", o, false), result, "degree,rank_m,homology_m,homology_target,quotient_rank\n");
    return 0;
  }
  // mapping_cylinder verifies d''d'' = 0 and both kappa identities or throws
  const auto cyl = mapping_cylinder(f);
  const auto hm = homology_ranks(cyl.m);
  const auto hc = homology_ranks(f.target);
  const auto q = quotient_split_check(cyl.m, cyl.incl_b);
  auto nonzero = [](std::map<int, Index> h) {
    std::erase_if(h, [](const auto& kv) { return kv.second == 0; });
    return h;
  };
  result["dd_zero"] = true;
  result["kappa_incl_c_identity"] = true;
  result["kappa_incl_b_equals_f"] = true;
  result["homology_preserved"] = nonzero(hm) == nonzero(hc);
  result["quotient_splits"] = q.splits;
  result["cylinder"] = io::to_json(cyl.m);
  result["kappa"] = io::to_json(cyl.kappa);
  Json hj = Json::array();
  std::ostringstream csv;
  csv << "degree,rank_m,homology_m,homology_target,quotient_rank\n";
  const auto [lo, hi] = cyl.m.support();
  for (int i = lo; i <= hi; ++i) {
    const Index h_m = hm.contains(i) ? hm.at(i) : 0, h_c = hc.contains(i) ? hc.at(i) : 0;
    hj.push_back({{"degree", i}, {"cylinder", h_m}, {"target", h_c}, {"quotient_rank", q.quotient.rank(i)}});
    csv << i << ',' << cyl.m.rank(i) << ',' << h_m << ',' << h_c << ',' << q.quotient.rank(i) << '\n';
  }
  result["homology"] = std::move(hj);
  emit(o, manifest("cylinder", o, false), result, csv.str());
  return 0;
}

int cmd_cylinder(const Options& o) {
  const std::string text = read_file(o.input);
  const Json in = load([&] { return Json::parse(text); });
  if (o.ring == "q") return cylinder_report<Rational>(o, in);
  if (o.ring == "z") return cylinder_report<Integer>(o, in);
  throw InputError("cylinder supports --ring q or z");
}

int cmd_demo(const Options& o) {
  if (o.n < 1) throw InputError("--n must be positive");
  std::vector<RemarkRow> rows;
  for (int n = 1; n <= o.n; ++n) rows.push_back(rational_cycle_demo(n));
  Options shown = o;
  shown.ring = "q";
  emit(o, manifest("demo-remark", shown, false), io::to_json(rows), io::remark_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact filling norms and filling volumes of groups and complexes"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--seed", o.seed, "recorded in the manifest; no command draws random numbers");
  };
  auto space = [&](CLI::App* sub) {
    sub->add_option("--presentation", o.presentation, "presentation file (gens:/rels:)");
    sub->add_option("--complex", o.complex, "explicit 2-complex file");
    sub->add_option("--strategy", o.strategy, "abelian, dehn or enum:<r>");
    sub->add_option("--radius", o.radius, "ball radius");
  };

  auto* ball = app.add_subcommand("ball", "build and summarize a Cayley ball or complex");
  space(ball);
  ball->add_flag("--list-edges", o.list_edges, "include every edge with its id and name");
  common(ball);

  auto* fill = app.add_subcommand("fill", "minimal filling of one integral cycle");
  space(fill);
  fill->add_option("--cycle", o.cycle, "edge:coeff,... (edge ids or names as listed by ball)");
  fill->add_option("--word", o.word, "the loop traced by a word from the identity");
  fill->add_option("--ring", o.ring, "z, q or zs:<p1,p2,...>");
  fill->add_option("--search-bound", o.search_bound, "largest unit m tried over zs rings");
  common(fill);

  auto* fv = app.add_subcommand("fv", "filling volume table for k = 0..kmax");
  space(fv);
  fv->add_option("--ring", o.ring, "z, q or zs:<p1,p2,...>");
  fv->add_option("--kmax", o.kmax, "largest cycle length");
  fv->add_option("--search-bound", o.search_bound, "largest unit m tried over zs rings");
  fv->add_option("--scope", o.scope, "rooted (cycles through the identity) or all");
  fv->add_option("--lattice-scale", o.lattice_scale, "replace the cycle lattice by a multiple");
  common(fv);

  auto* norm = app.add_subcommand("norm", "filling norms and constants from JSON module data");
  norm->add_option("--input", o.input, "JSON payload")->required();
  common(norm);

  auto* cyl = app.add_subcommand("cylinder", "mapping cylinder verification report from JSON complexes");
  cyl->add_option("--input", o.input, "JSON payload with source, target and map")->required();
  cyl->add_option("--ring", o.ring, "q or z");
  common(cyl);

  auto* demo = app.add_subcommand("demo-remark", "rational cycle example for n = 1..N");
  demo->add_option("--n", o.n, "largest n");
  common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (cyl->parsed() && o.ring == "z" && !cyl->count("--ring")) o.ring = "q";

  try {
    if (ball->parsed()) return cmd_ball(o);
    if (fill->parsed()) return cmd_fill(o);
    if (fv->parsed()) return cmd_fv(o);
    if (norm->parsed()) return cmd_norm(o);
    if (cyl->parsed()) return cmd_cylinder(o);
    if (demo->parsed()) return cmd_demo(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
