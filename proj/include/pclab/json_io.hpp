#pragma once

#include <string>

#include "json.hpp"
#include "pclab/harmonics.hpp"

namespace pclab::json_io {

/// {"n": N, "entries": [[re, im], ...]} with N*N pairs in row-major order.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// {"n": N, "terms": [{"alpha": [[...]], "beta": [[...]], "re": x, "im": y}, ...]}
/// where alpha and beta are N x N nested arrays of nonnegative integers.
/// A missing "beta" (or "alpha") means all zeros; a missing "im" means 0.
harmonics::BidegreePolynomial polynomial_from_json(const nlohmann::json& j);
nlohmann::json polynomial_to_json(const harmonics::BidegreePolynomial& f);

/// Parses a file; errors name the path. Throws std::invalid_argument.
nlohmann::json read_json_file(const std::string& path);

} // namespace pclab::json_io
