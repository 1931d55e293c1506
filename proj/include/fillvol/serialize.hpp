#pragma once

// JSON and CSV forms of library values. Every number is written as an exact
// "p/q" string; objects keep insertion order so output is byte-stable.

#include "fillvol/cayley.hpp"
#include "fillvol/cylinder.hpp"
#include "fillvol/filling.hpp"
#include "fillvol/normedmod.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace fillvol::io {

using Json = nlohmann::ordered_json;

/// Accepts "p/q" strings and JSON integers; throws SyntaxError.
Rational rational_from_json(const Json& j);

/// Array of rows, each an array of numbers. `cols` fixes the width when
/// there are no rows. Throws SyntaxError or DimensionMismatch.
MatrixQ matrix_from_json(const Json& j, Index cols = -1);
MatrixZ integer_matrix_from_json(const Json& j, Index cols = -1);
VectorQ vector_from_json(const Json& j);
Json to_json(const MatrixQ& m);
Json to_json(const MatrixZ& m);

/// {"generators": n, "relations": [[...], ...]} with n rows of relations.
PresentedModule module_from_json(const Json& j);
Json to_json(const PresentedModule& m);

/// {"degrees": [{"degree": i, "rank": r, "differential": [[...]]}, ...]},
/// where the differential of degree i has rank(i - 1) rows.
template <typename Scalar>
ChainComplex<Scalar> complex_from_json(const Json& j);
template <typename Scalar>
Json to_json(const ChainComplex<Scalar>& c);

/// [{"degree": i, "matrix": [[...]]}, ...] as components of a map B -> C.
template <typename Scalar>
ChainMap<Scalar> chain_map_from_json(const ChainComplex<Scalar>& source, const ChainComplex<Scalar>& target,
                                     const Json& components);
template <typename Scalar>
Json to_json(const ChainMap<Scalar>& f);

/// "edge:coeff,edge:coeff,..." with integer coefficients; edges as accepted
/// by CayleyBall::find_edge. Throws SyntaxError.
IntegralChain parse_cycle(const CayleyBall& b, std::string_view text);

Json chain_to_json(const CayleyBall& b, const IntegralChain& c);
Json to_json(const CayleyBall& b, const FillResult& r);
Json to_json(const CayleyBall& b, const FVTable& t);
Json to_json(const std::vector<RemarkRow>& rows);

/// Header "k,value_num,value_den,ball_limited"; infinite values print as
/// "inf" with an empty denominator.
std::string fv_csv(const FVTable& t);
std::string remark_csv(const std::vector<RemarkRow>& rows);

std::string value_text(const std::optional<Rational>& v);

}  // namespace fillvol::io
