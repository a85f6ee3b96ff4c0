#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "orthoforms/borcherds_weyl.hpp"
#include "orthoforms/classifier.hpp"
#include "orthoforms/lattice.hpp"
#include "orthoforms/root_systems.hpp"
#include "orthoforms/series.hpp"

namespace orthoforms {

using Json = nlohmann::ordered_json;

/// Parses text, mapping syntax errors to validation errors that name the
/// line and column.
Json parse_json(const std::string& text, const std::string& source = "input");
Json read_json_file(const std::string& path);

/// Integers or "p/q" strings; floats are rejected.
Rational rational_from_json(const Json& j, const std::string& what);
RatVector rat_vector_from_json(const Json& j, const std::string& what);
Json to_json(const Rational& r);
Json to_json(const RatVector& v);

/// {"label": "...", "gram": [[...]]}
Lattice lattice_from_json(const Json& j);
Json to_json(const Lattice& lat);
/// "builtin:NAME" or a path to a lattice file.
Lattice load_lattice(const std::string& spec);
/// Rank, determinant, evenness, discriminant group and level.
Json lattice_report(const Lattice& lat);

/// Coefficient file: the q^0 layer plus any higher coefficients.
struct PhiData {
  QZeroData layer;
  JacobiCoefficients higher;  // entries with n >= 1 and any closed-form rule
};

/// {"lattice": ..., "k": "252/1" | "symbolic", "coeffs": [{"n", "l", "f"}],
///  "complete_through": N}. The q^-1 term is implicit.
PhiData phi_from_json(const Json& j);
Json to_json(const PhiData& phi);
/// A path, or "builtin:E8" for the E8 index-one form.
PhiData load_phi(const std::string& spec);
/// Everything the product needs, with the weight fixed.
JacobiCoefficients full_coefficients(const PhiData& phi);

TruncatedSeries series_from_json(const Json& j);
Json to_json(const TruncatedSeries& s);

Json to_json(const WeylVector& w);
Json component_report(const IrreducibleComponent& comp);
Json to_json(const ClassificationReport& report);

}  // namespace orthoforms
