#pragma once

#include <json.hpp>

#include <string>

#include "starq/blocksolve.hpp"
#include "starq/starprod.hpp"

namespace starq {

/// Insertion-ordered JSON so every dump is byte-identical across runs.
using Json = nlohmann::ordered_json;

/// Monomial list [{"exp":[...],"coeff":"p/q"},...] in storage (graded-lex)
/// order; the zero polynomial is the empty array.
Json poly_to_json(const Poly& f);

/// Accepts the monomial-list form or, for convenience, a plain expression
/// string for parse_poly.  Coefficients may be "p/q" strings or integers.
Poly poly_from_json(const Json& j, int n);

/// {"arity":p, "terms":[{"key":[[...],[...]], "poly":[...]},...]}, keys in
/// canonical order.
Json cochain_to_json(const Cochain& phi);
Cochain cochain_from_json(const Json& j, int n, bool tilde);

/// {"dimension":n, "omega":[{"i":i,"j":j,"poly":[...]},...]} with 1-based
/// i < j; missing pairs are zero.
Json poisson_to_json(const PoissonStructure& ps);
PoissonStructure poisson_from_json(const Json& j);

/// {"n":..., "omega":[...], "order":K, "gauge":"zero",
///  "pi":[{"k":1,"terms":[...]},...]}.
Json star_to_json(const StarProduct& s);
StarProduct star_from_json(const Json& j);

/// {"p":..., "l":[...], "tilde":..., "rows":[basis tuples], "cols":[...],
///  "entries":[[r,c,"p/q"],...]}; requires the matrix to carry its bases.
Json matrix_to_json(const BlockMatrix& m, int p, const MultiIndex& l, bool tilde);

/// Canonical text form: two-space indent plus trailing newline.
std::string dump_json(const Json& j);

/// Parse a file; throws std::invalid_argument with the parse position on
/// malformed input.
Json load_json_file(const std::string& path);

} // namespace starq
