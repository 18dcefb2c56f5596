#pragma once

// JSON encodings shared by the CLI, the gallery and certificates. Every
// top-level artifact carries a "schema" field; readers reject unknown fields.
// Output is always dump(2) plus a trailing newline, with keys in sorted order,
// so emission is byte-for-byte reproducible.

#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "finorb/autos.hpp"
#include "finorb/homomorphism.hpp"
#include "finorb/linalg.hpp"

namespace finorb {

using Json = nlohmann::json;

/// Throws malformed if a required key is missing or an unknown key is present.
void expect_fields(const Json& j, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional, const std::string& what);
/// Throws malformed unless j["schema"] == schema.
void expect_schema(const Json& j, const std::string& schema);

std::string dump(const Json& j);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const FreeWord& w);
FreeWord word_from_json(const Json& j);

Json to_json(const Presentation& p);
Presentation presentation_from_json(const Json& j);

/// {"rows": r, "cols": c, "entries": [[...], ...]}
Json to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const Json& j);
/// Same layout with entries as "p/q" strings.
Json to_json(const RatMatrix& m);
RatMatrix rat_matrix_from_json(const Json& j);

Json to_json(const mpz_class& x);
mpz_class mpz_from_json(const Json& j);

Json to_json(const Automorphism& a);
Automorphism automorphism_from_json(const Json& j);
std::vector<Automorphism> load_catalog(const std::string& path);
Json catalog_to_json(const std::vector<Automorphism>& catalog);

Json to_json(const Homomorphism& h);
Homomorphism hom_from_json(const Json& j);

/// A path, or "gallery:<name>" resolved against the bundled gallery.
Homomorphism load_hom(const std::string& where);
std::string gallery_dir();
std::vector<std::string> gallery_names();

}  // namespace finorb
