#include "finorb/json_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "finorb/error.hpp"

namespace finorb {

void expect_fields(const Json& j, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional, const std::string& what) {
  if (!j.is_object()) fail(ErrorKind::malformed, what + " must be a JSON object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) fail(ErrorKind::malformed, what + " is missing \"" + k + "\"");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) fail(ErrorKind::malformed, what + " has unknown field \"" + k + "\"");
  }
}

void expect_schema(const Json& j, const std::string& schema) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
    fail(ErrorKind::malformed, "artifact has no schema field (expected " + schema + ")");
  if (j["schema"].get<std::string>() != schema) {
    fail(ErrorKind::malformed,
         "schema is " + j["schema"].get<std::string>() + ", expected " + schema);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::malformed, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::malformed, "bad JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::malformed, "cannot write '" + path + "'");
  out << text;
}

Json to_json(const FreeWord& w) { return Json(w.letters()); }

FreeWord word_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::malformed, "word must be an array of nonzero integers");
  std::vector<Letter> raw;
  for (const auto& x : j) {
    if (!x.is_number_integer()) fail(ErrorKind::malformed, "word letters must be integers");
    raw.push_back(x.get<Letter>());
  }
  return reduce(raw);
}

Json to_json(const Presentation& p) {
  if (p.is_surface()) return {{"kind", "surface"}, {"genus", p.parameter()}};
  return {{"kind", "free"}, {"rank", p.parameter()}};
}

Presentation presentation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(ErrorKind::malformed, "presentation needs a kind");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "free") {
    expect_fields(j, {"kind", "rank"}, {}, "free presentation");
    return Presentation::free(j["rank"].get<int>());
  }
  if (kind == "surface") {
    expect_fields(j, {"kind", "genus"}, {}, "surface presentation");
    return Presentation::surface(j["genus"].get<int>());
  }
  fail(ErrorKind::malformed, "unknown presentation kind '" + kind + "'");
}

Json to_json(const mpz_class& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

mpz_class mpz_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class x;
    if (x.set_str(j.get<std::string>(), 10) != 0) fail(ErrorKind::malformed, "bad integer " + j.dump());
    return x;
  }
  fail(ErrorKind::malformed, "expected an integer, got " + j.dump());
}

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

IntMatrix int_matrix_from_json(const Json& j) {
  expect_fields(j, {"rows", "cols", "entries"}, {}, "matrix");
  const auto r = j["rows"].get<std::size_t>();
  const auto c = j["cols"].get<std::size_t>();
  const Json& e = j["entries"];
  if (!e.is_array() || e.size() != r) fail(ErrorKind::malformed, "matrix row count mismatch");
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!e[i].is_array() || e[i].size() != c) fail(ErrorKind::malformed, "matrix column count mismatch");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = mpz_from_json(e[i][k]);
  }
  return m;
}

Json to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

RatMatrix rat_matrix_from_json(const Json& j) {
  expect_fields(j, {"rows", "cols", "entries"}, {}, "rational matrix");
  const auto r = j["rows"].get<std::size_t>();
  const auto c = j["cols"].get<std::size_t>();
  const Json& e = j["entries"];
  if (!e.is_array() || e.size() != r) fail(ErrorKind::malformed, "matrix row count mismatch");
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!e[i].is_array() || e[i].size() != c) fail(ErrorKind::malformed, "matrix column count mismatch");
    for (std::size_t k = 0; k < c; ++k) {
      if (!e[i][k].is_string()) fail(ErrorKind::malformed, "rational entries are strings");
      mpq_class q;
      if (q.set_str(e[i][k].get<std::string>(), 10) != 0 || q.get_den() == 0)
        fail(ErrorKind::malformed, "bad rational " + e[i][k].dump());
      q.canonicalize();
      m(i, k) = q;
    }
  }
  return m;
}

namespace {

Json images_json(const std::vector<FreeWord>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) a.push_back(to_json(w));
  return a;
}

std::vector<FreeWord> images_from(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::malformed, "images must be an array of words");
  std::vector<FreeWord> out;
  for (const auto& w : j) out.push_back(word_from_json(w));
  return out;
}

}  // namespace

Json to_json(const Automorphism& a) {
  return {{"presentation", to_json(a.presentation())},
          {"images", images_json(a.forward().images)},
          {"inverse_images", images_json(a.backward().images)},
          {"label", a.label()}};
}

Automorphism automorphism_from_json(const Json& j) {
  expect_fields(j, {"presentation", "images", "inverse_images"}, {"label"}, "automorphism");
  const Presentation p = presentation_from_json(j["presentation"]);
  const std::string label = j.value("label", std::string("phi"));
  return Automorphism(Endo{p, images_from(j["images"]), label},
                      Endo{p, images_from(j["inverse_images"]), label + "^-1"}, label);
}

Json catalog_to_json(const std::vector<Automorphism>& catalog) {
  Json a = Json::array();
  for (const auto& phi : catalog) a.push_back(to_json(phi));
  return {{"schema", "finorb.catalog/1"}, {"automorphisms", std::move(a)}};
}

std::vector<Automorphism> load_catalog(const std::string& path) {
  const Json j = read_json_file(path);
  expect_schema(j, "finorb.catalog/1");
  expect_fields(j, {"schema", "automorphisms"}, {}, "catalog");
  std::vector<Automorphism> out;
  for (const auto& a : j["automorphisms"]) out.push_back(automorphism_from_json(a));
  if (out.empty()) fail(ErrorKind::malformed, "catalog is empty");
  return out;
}

Json to_json(const Homomorphism& h) {
  Json ims = Json::array();
  for (const auto& e : h.images()) ims.push_back(h.target()->element_to_json(e));
  return {{"schema", "finorb.hom/1"},
          {"presentation", to_json(h.presentation())},
          {"target", h.target()->spec()},
          {"images", std::move(ims)}};
}

Homomorphism hom_from_json(const Json& j) {
  expect_schema(j, "finorb.hom/1");
  expect_fields(j, {"schema", "presentation", "target", "images"}, {"label", "note"}, "hom");
  const Presentation p = presentation_from_json(j["presentation"]);
  const auto t = TargetGroup::parse(j["target"].get<std::string>());
  if (!j["images"].is_array()) fail(ErrorKind::malformed, "hom images must be an array");
  std::vector<Element> ims;
  for (const auto& e : j["images"]) ims.push_back(t->element_from_json(e));
  return Homomorphism(p, t, std::move(ims));
}

std::string gallery_dir() {
  if (const char* env = std::getenv("FINORB_GALLERY")) return env;
#ifdef FINORB_GALLERY_DIR
  return FINORB_GALLERY_DIR;
#else
  return "data/gallery";
#endif
}

std::vector<std::string> gallery_names() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(gallery_dir(), ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Homomorphism load_hom(const std::string& where) {
  if (where.rfind("gallery:", 0) == 0) {
    const std::string name = where.substr(8);
    const auto path = std::filesystem::path(gallery_dir()) / (name + ".json");
    if (!std::filesystem::exists(path)) fail(ErrorKind::malformed, "no gallery instance '" + name + "'");
    return hom_from_json(read_json_file(path.string()));
  }
  return hom_from_json(read_json_file(where));
}

}  // namespace finorb
