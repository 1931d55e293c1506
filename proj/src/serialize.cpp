#include "fillvol/serialize.hpp"

#include "fillvol/error.hpp"

#include <charconv>
#include <sstream>

namespace fillvol::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw SyntaxError("invalid JSON input", 0, 0, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Index index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) bad(std::string("field \"") + key + "\" must be a count");
  return v.get<Index>();
}

template <typename Scalar>
Matrix<Scalar> typed_matrix(const Json& j, Index cols) {
  const MatrixQ q = matrix_from_json(j, cols);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return q;
  } else {
    for (Index r = 0; r < q.rows(); ++r)
      for (Index c = 0; c < q.cols(); ++c)
        if (!is_integral(q(r, c))) bad("expected an integer matrix, found " + to_string(q(r, c)));
    return q.unaryExpr([](const Rational& x) { return numerator_of(x); });
  }
}

template <typename Scalar>
Json matrix_json(const Matrix<Scalar>& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string value_text(const std::optional<Rational>& v) { return v ? to_string(*v) : "inf"; }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) bad("expected a \"p/q\" string, found " + j.dump());
  try {
    return parse_rational(j.get<std::string>());
  } catch (const SyntaxError&) {
    bad("expected a \"p/q\" string, found " + j.dump());
  }
}

MatrixQ matrix_from_json(const Json& j, Index cols) {
  if (!j.is_array()) bad("a matrix is an array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (rows > 0) {
    if (!j[0].is_array()) bad("a matrix is an array of rows");
    const Index width = static_cast<Index>(j[0].size());
    if (cols >= 0 && width != cols)
      throw DimensionMismatch("matrix has " + std::to_string(width) + " columns, expected " + std::to_string(cols));
    cols = width;
  }
  MatrixQ m(rows, std::max<Index>(cols, 0));
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m.cols()) bad("matrix rows have different lengths");
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rational_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

MatrixZ integer_matrix_from_json(const Json& j, Index cols) { return typed_matrix<Integer>(j, cols); }

VectorQ vector_from_json(const Json& j) {
  if (!j.is_array()) bad("a vector is an array of numbers");
  VectorQ v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = rational_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

Json to_json(const MatrixQ& m) { return matrix_json(m); }
Json to_json(const MatrixZ& m) { return matrix_json(m); }

PresentedModule module_from_json(const Json& j) {
  const Index n = index_field(j, "generators");
  MatrixQ rel = j.contains("relations") ? matrix_from_json(j.at("relations")) : MatrixQ(n, 0);
  if (rel.rows() == 0) rel.resize(n, 0);
  return PresentedModule::make(n, std::move(rel));
}

Json to_json(const PresentedModule& m) {
  Json j;
  j["generators"] = m.generator_count;
  j["relations"] = to_json(m.relations);
  return j;
}

template <typename Scalar>
ChainComplex<Scalar> complex_from_json(const Json& j) {
  const Json& degrees = field(j, "degrees");
  if (!degrees.is_array()) bad("\"degrees\" must be an array");
  std::map<int, Index> ranks;
  for (const Json& d : degrees) {
    const Json& deg = field(d, "degree");
    if (!deg.is_number_integer()) bad("\"degree\" must be an integer");
    if (!ranks.emplace(deg.get<int>(), index_field(d, "rank")).second) bad("degree listed twice");
  }
  auto rank = [&](int i) {
    const auto it = ranks.find(i);
    return it == ranks.end() ? Index(0) : it->second;
  };
  std::map<int, Matrix<Scalar>> diffs;
  for (const Json& d : degrees) {
    if (!d.contains("differential")) continue;
    const int i = d.at("degree").get<int>();
    Matrix<Scalar> m = typed_matrix<Scalar>(d.at("differential"), rank(i));
    if (m.rows() == 0) m.resize(rank(i - 1), rank(i));
    diffs.emplace(i, std::move(m));
  }
  return ChainComplex<Scalar>::make(std::move(ranks), std::move(diffs));
}

template <typename Scalar>
Json to_json(const ChainComplex<Scalar>& c) {
  Json degrees = Json::array();
  for (const auto& [i, r] : c.ranks) {
    Json d;
    d["degree"] = i;
    d["rank"] = r;
    d["differential"] = matrix_json(c.d(i));
    degrees.push_back(std::move(d));
  }
  Json j;
  j["degrees"] = std::move(degrees);
  return j;
}

template <typename Scalar>
ChainMap<Scalar> chain_map_from_json(const ChainComplex<Scalar>& source, const ChainComplex<Scalar>& target,
                                     const Json& components) {
  if (!components.is_array()) bad("map components must be an array");
  ChainMap<Scalar> f{source, target, {}};
  for (const Json& c : components) {
    const Json& deg = field(c, "degree");
    if (!deg.is_number_integer()) bad("\"degree\" must be an integer");
    const int i = deg.get<int>();
    Matrix<Scalar> m = typed_matrix<Scalar>(field(c, "matrix"), source.rank(i));
    if (m.rows() == 0) m.resize(target.rank(i), source.rank(i));
    f.components[i] = std::move(m);
  }
  return f;
}

template <typename Scalar>
Json to_json(const ChainMap<Scalar>& f) {
  Json out = Json::array();
  std::set<int> degrees;
  for (const auto& [i, r] : f.source.ranks) degrees.insert(i);
  for (const auto& [i, r] : f.target.ranks) degrees.insert(i);
  for (const int i : degrees) {
    Json c;
    c["degree"] = i;
    c["matrix"] = matrix_json(f.component(i));
    out.push_back(std::move(c));
  }
  return out;
}

template ChainComplex<Rational> complex_from_json<Rational>(const Json&);
template ChainComplex<Integer> complex_from_json<Integer>(const Json&);
template Json to_json<Rational>(const ChainComplex<Rational>&);
template Json to_json<Integer>(const ChainComplex<Integer>&);
template ChainMap<Rational> chain_map_from_json<Rational>(const ChainComplex<Rational>&, const ChainComplex<Rational>&,
                                                          const Json&);
template ChainMap<Integer> chain_map_from_json<Integer>(const ChainComplex<Integer>&, const ChainComplex<Integer>&,
                                                        const Json&);
template Json to_json<Rational>(const ChainMap<Rational>&);
template Json to_json<Integer>(const ChainMap<Integer>&);

IntegralChain parse_cycle(const CayleyBall& b, std::string_view text) {
  std::vector<std::pair<Index, std::int64_t>> terms;
  std::size_t column = 1;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos)
      throw SyntaxError("expected edge:coeff", 1, static_cast<int>(column), std::string(item));
    const auto edge_text = item.substr(0, colon);
    const auto coeff_text = item.substr(colon + 1);
    std::int64_t coeff = 0;
    const auto [p, ec] = std::from_chars(coeff_text.data(), coeff_text.data() + coeff_text.size(), coeff);
    if (ec != std::errc() || p != coeff_text.data() + coeff_text.size())
      throw SyntaxError("expected an integer coefficient", 1, static_cast<int>(column + colon + 1),
                        std::string(coeff_text));
    const auto e = b.find_edge(edge_text);
    if (!e) throw SyntaxError("unknown edge", 1, static_cast<int>(column), std::string(edge_text));
    terms.emplace_back(*e, coeff);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    column += comma + 1;
  }
  return make_chain<std::int64_t>(1, std::move(terms));
}

Json chain_to_json(const CayleyBall& b, const IntegralChain& c) {
  // sorted by rendered name so the listing does not depend on index order
  std::vector<std::pair<std::string, std::int64_t>> named;
  for (const auto& [e, x] : c.terms) named.emplace_back(b.edge_name(e), x);
  std::sort(named.begin(), named.end());
  Json out = Json::array();
  for (const auto& [name, x] : named) out.push_back(Json::array({name, std::to_string(x)}));
  return out;
}

Json to_json(const CayleyBall& b, const FillResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["value"] = r.value ? Json(to_string(*r.value)) : Json(nullptr);
  j["exact"] = r.exact;
  j["ring"] = r.ring.spec();
  j["search_bound"] = std::to_string(r.search_bound);
  j["scale"] = std::to_string(r.scale);
  j["lower_bound"] = r.lower_bound ? Json(to_string(*r.lower_bound)) : Json(nullptr);
  std::vector<std::pair<std::string, std::string>> witness;
  for (const auto& [c, x] : r.witness.terms) {
    const BallCell cell = b.cell(c);
    std::string name = cell.label;
    if (b.is_cayley()) {
      const auto& p = *b.presentation();
      const GroupWord w = b.vertex_word(cell.base);
      name = (w.empty() ? std::string("1") : p.format(w)) + ".r" + std::to_string(cell.relator);
    }
    witness.emplace_back(name, to_string(x));
  }
  std::sort(witness.begin(), witness.end());
  Json wj = Json::array();
  for (const auto& [name, x] : witness) wj.push_back(Json::array({name, x}));
  j["witness"] = std::move(wj);
  std::vector<std::pair<std::string, std::string>> cert;
  for (const auto& [e, y] : r.certificate) cert.emplace_back(b.edge_name(e), to_string(y));
  std::sort(cert.begin(), cert.end());
  Json cj = Json::array();
  for (const auto& [name, y] : cert) cj.push_back(Json::array({name, y}));
  j["certificate"] = std::move(cj);
  return j;
}

Json to_json(const CayleyBall& b, const FVTable& t) {
  Json j;
  j["ring"] = t.ring.spec();
  j["radius"] = t.radius;
  j["scope"] = t.scope == CycleScope::All ? "all" : "rooted";
  j["lattice_scale"] = std::to_string(t.lattice_scale);
  j["cycles_evaluated"] = t.cycles_evaluated;
  Json rows = Json::array();
  for (const auto& e : t.entries) {
    Json row;
    row["k"] = e.k;
    row["value"] = value_text(e.value);
    row["ball_limited"] = e.ball_limited;
    row["exact"] = e.exact;
    row["witness_cycle"] = chain_to_json(b, e.witness_cycle);
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  const auto probe = linearity_probe(t);
  j["linearity"] = {{"verdict", to_string(probe.verdict)}, {"slope_bound", to_string(probe.slope_bound)}};
  return j;
}

Json to_json(const std::vector<RemarkRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["n"] = r.n;
    row["l1"] = to_string(r.l1);
    row["fill_q"] = to_string(r.fill_q);
    out.push_back(std::move(row));
  }
  return out;
}

std::string fv_csv(const FVTable& t) {
  std::ostringstream out;
  out << "k,value_num,value_den,ball_limited\n";
  for (const auto& e : t.entries) {
    out << e.k << ',';
    if (e.value)
      out << numerator_of(*e.value) << ',' << denominator_of(*e.value);
    else
      out << "inf,";
    out << ',' << (e.ball_limited ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string remark_csv(const std::vector<RemarkRow>& rows) {
  std::ostringstream out;
  out << "n,l1,fill_q\n";
  for (const auto& r : rows) out << r.n << ',' << to_string(r.l1) << ',' << to_string(r.fill_q) << '\n';
  return out.str();
}

}  // namespace fillvol::io
