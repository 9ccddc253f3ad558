#pragma once

// JSON readers and writers. Matrices use
//   {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)
// and every double is written with 17 significant digits.

#include <string>

#include <json.hpp>

#include "prcone/cara.hpp"
#include "prcone/lft.hpp"
#include "prcone/pr_relations.hpp"

namespace prcone {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class InputError : public Error {
 public:
  using Error::Error;
};

Json matrix_to_json(const CMatrix& A);
/// Accepts [re, im] pairs or bare real numbers as entries.
CMatrix matrix_from_json(const Json& j);
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Serializes with %.17g doubles; non-finite numbers become null.
std::string dump_json(const Json& j, int indent = 2);

Json to_json(const PrecWitness& w);
Json to_json(const EquivWitness& w);
Json to_json(const DiscGrid& g);

/// {"radii": [...], "angles": k}
DiscGrid grid_from_json(const Json& j);

/// {"dim": n, "model": "herglotz", "H0": M, "P0": M,
///  "terms": [{"beta": [re, im], "P": M}]}
/// {"model": "constant", "value": M}
/// {"model": "rational", "num": [M, ...], "den": [M, ...]}
/// Rational models are validated on `grid`.
CaraFunction cara_from_json(const Json& j, const DiscGrid& grid,
                            double tol = kDefaultTol);
Json cara_to_json(const CaraFunction& F);

/// "example-4.1", {"model": "example-4.1", "n": k},
/// {"model": "polynomial", "coeffs": [M, ...]} or {"model": "constant", "W": M}
PsiBlock psi_from_json(const Json& j);

}  // namespace prcone
