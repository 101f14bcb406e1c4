#pragma once

#include <string>

#include <json.hpp>

#include "factorlab/constants.hpp"
#include "factorlab/extremal.hpp"
#include "factorlab/norms.hpp"
#include "factorlab/poly.hpp"
#include "factorlab/schatten.hpp"
#include "factorlab/search.hpp"

namespace factorlab {

/// Insertion-ordered so serialized field order is fixed.
using Json = nlohmann::ordered_json;

/// {"re": x, "im": y}.
Json to_json(Complex c);
/// [{"re", "im"}, ...].
Json to_json(const ComplexVector& v);
/// {"num_vars", "degree", "terms": [{"exponents", "coef"}]} in canonical order.
Json to_json(const HomogeneousPoly& poly);
/// {"value", "witness", "starts_used", "converged", "spread"}.
Json to_json(const NormEstimate& est);
Json to_json(const RatioReport& report);
Json to_json(const SearchResult& result);
Json to_json(const ConstantsRecord& record);
Json to_json(const EstimatorConfig& cfg);
Json to_json(const SearchConfig& cfg);
Json to_json(const PinchingCheck& check);
/// {"dim": m, "entries": row-major [{"re", "im"}]}.
Json matrix_to_json(const ComplexMatrix& a);

// Readers throw Error(ParseError) for malformed documents; domain errors
// from make_poly (DegreeMismatch, DimensionMismatch) pass through.
Complex complex_from_json(const Json& j);
ComplexVector vector_from_json(const Json& j);
HomogeneousPoly poly_from_json(const Json& j);
ComplexMatrix matrix_from_json(const Json& j);

/// Parses text as JSON; ParseError on syntax errors.
Json parse_json(const std::string& text);

std::string_view to_string(CoefDistribution distribution) noexcept;

}  // namespace factorlab
