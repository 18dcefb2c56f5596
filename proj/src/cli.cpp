#include "finorb/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "finorb/certify.hpp"
#include "finorb/check.hpp"
#include "finorb/error.hpp"
#include "finorb/json_io.hpp"
#include "finorb/orbits.hpp"
#include "finorb/parallel.hpp"
#include "finorb/subgroups.hpp"

namespace finorb::cli {

namespace {


void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

void require_file(const std::string& path, const std::string& flag) {
  require(!path.empty(), flag + " is required");
  require(std::filesystem::is_regular_file(path), flag + ": no such file '" + path + "'");
}

void validate_group(const std::string& spec) {
  require(!spec.empty(), "--group is required");
  try {
    (void)Presentation::parse(spec);
  } catch (const Error& e) {
    throw UsageError(std::string("--group: ") + e.what());
  }
}

void validate_target(const std::string& spec) {
  require(!spec.empty(), "--target is required");
  if (spec.rfind("matz:file:", 0) == 0) require_file(spec.substr(10), "--target");
  try {
    (void)TargetGroup::parse(spec);
  } catch (const Error& e) {
    throw UsageError(std::string("--target: ") + e.what());
  }
}

void validate_gens(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) {
    require_file(spec.substr(5), "--gens");
    return;
  }
  require(spec == "nielsen" || spec == "mcg" || spec == "braid" || spec == "inner",
          "--gens must be nielsen|mcg|braid|inner|file:<path>, got '" + spec + "'");
}

void validate_hom(const std::string& where) {
  require(!where.empty(), "--hom is required");
  if (where.rfind("gallery:", 0) == 0) {
    const auto names = gallery_names();
    require(std::find(names.begin(), names.end(), where.substr(8)) != names.end(),
            "--hom: no gallery instance '" + where.substr(8) + "'");
    return;
  }
  require_file(where, "--hom");
}

std::size_t cap_or_default(std::size_t cap) { return cap == 0 ? default_cap() : cap; }

Json hom_images(const Homomorphism& h) {
  Json ims = Json::array();
  for (const auto& e : h.images()) ims.push_back(h.target()->element_to_json(e));
  return ims;
}

Json homs_json(const std::vector<Homomorphism>& homs) {
  Json arr = Json::array();
  for (const auto& h : homs) arr.push_back(hom_images(h));
  return arr;
}

Json invariants_json(const AbelianInvariants& inv) {
  Json torsion = Json::array();
  for (const auto& t : inv.torsion) torsion.push_back(to_json(t));
  return {{"free_rank", inv.free_rank}, {"torsion", std::move(torsion)}, {"finite", inv.finite()},
          {"description", inv.to_string()}};
}

std::vector<IntMatrix> read_matrices(const std::string& path) {
  const Json j = read_json_file(path);
  expect_schema(j, "finorb.matrices/1");
  expect_fields(j, {"schema", "matrices"}, {"note"}, "matrices");
  std::vector<IntMatrix> out;
  for (const auto& m : j["matrices"]) out.push_back(int_matrix_from_json(m));
  return out;
}

IntMatrix read_matrix(const std::string& path) {
  Json j = read_json_file(path);
  if (j.contains("schema")) {
    expect_schema(j, "finorb.matrix/1");
    j.erase("schema");
  }
  return int_matrix_from_json(j);
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Text rendering: scalars as "key: value"; arrays of flat objects as tables.
void render_text(const Json& j, std::ostream& out) {
  for (const auto& [key, v] : j.items()) {
    if (key == "schema") continue;
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << key << ":\n";
      for (const auto& row : v) {
        out << " ";
        for (const char* k : {"name", "status"})
          if (row.contains(k)) out << " " << scalar_text(row[k]);
        for (const auto& [k, x] : row.items())
          if (k != "name" && k != "status") out << "  " << k << "=" << scalar_text(x);
        out << "\n";
      }
    } else if (v.is_object() && !v.empty() && key != "matrix" &&
               std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); })) {
      out << key << ":\n";
      for (const auto& [k, x] : v.items()) out << "  " << k << "  " << scalar_text(x) << "\n";
    } else if (v.is_primitive()) {
      out << key << ": " << scalar_text(v) << "\n";
    } else {
      out << key << ": " << v.dump() << "\n";
    }
  }
}

void emit(const RunConfig& c, const Json& j, std::ostream& out) {
  if (c.format == "text") {
    render_text(j, out);
  } else {
    out << dump(j);
  }
}

std::vector<Automorphism> catalog_for(const RunConfig& c, const Presentation& p) {
  return catalog_from_spec(c.gens, p);
}

int cmd_enum(const RunConfig& c, std::ostream& out) {
  const Presentation p = Presentation::parse(c.group);
  const auto homs = enumerate_homs(p, TargetGroup::parse(c.target));
  emit(c,
       {{"schema", "finorb.enum/1"},
        {"group", p.spec()},
        {"target", c.target},
        {"count", homs.size()},
        {"homs", homs_json(homs)}},
       out);
  return kExitOk;
}

int cmd_orbit(const RunConfig& c, std::ostream& out) {
  const Homomorphism rho = load_hom(c.hom);
  const auto catalog = catalog_for(c, rho.presentation());
  const std::size_t cap = cap_or_default(c.cap);
  const OrbitResult o = orbit(rho, catalog, cap);
  if (!c.dot.empty()) write_text_file(c.dot, export_orbit_dot(o));
  if (c.format == "dot") {
    out << export_orbit_dot(o);
    return kExitOk;
  }
  const SubgroupClosure img = image_closure(rho, cap);
  Json j{{"schema", "finorb.orbit/1"},
         {"status", o.complete() ? "complete" : "cap"},
         {"size", o.size()},
         {"cap", cap},
         {"catalog", c.gens},
         {"catalog_labels", o.labels},
         {"base_index", o.base_index},
         {"edge_count", o.edges.size()},
         {"image_order", img.closed() ? Json(img.order()) : Json(nullptr)},
         {"image_status", img.closed() ? "closed" : "cap"}};
  // Listing is bounded; the DOT file carries the full graph.
  j["elements"] = o.size() <= 1000 ? homs_json(o.elements) : Json(nullptr);
  emit(c, j, out);
  return kExitOk;
}

int cmd_fixed(const RunConfig& c, std::ostream& out) {
  const Presentation p = Presentation::parse(c.group);
  const auto homs = enumerate_homs(p, TargetGroup::parse(c.target));
  const auto fixed = fixed_points(homs, catalog_for(c, p));
  emit(c,
       {{"schema", "finorb.fixed/1"},
        {"group", p.spec()},
        {"target", c.target},
        {"catalog", c.gens},
        {"total", homs.size()},
        {"count", fixed.size()},
        {"only_trivial", fixed.size() == 1 && fixed.front().is_trivial()},
        {"fixed", homs_json(fixed)}},
       out);
  return kExitOk;
}

int cmd_partition(const RunConfig& c, std::ostream& out) {
  const Presentation p = Presentation::parse(c.group);
  const auto homs = enumerate_homs(p, TargetGroup::parse(c.target));
  const auto parts = orbit_partition(homs, catalog_for(c, p));
  Json orbits = Json::array();
  std::vector<std::size_t> sizes;
  for (const auto& o : parts) {
    sizes.push_back(o.size());
    orbits.push_back({{"size", o.size()}, {"representative", hom_images(o.elements.front())}});
  }
  emit(c,
       {{"schema", "finorb.partition/1"},
        {"group", p.spec()},
        {"target", c.target},
        {"catalog", c.gens},
        {"total", homs.size()},
        {"orbit_count", parts.size()},
        {"sizes", sizes},
        {"orbits", std::move(orbits)}},
       out);
  return kExitOk;
}

int cmd_stabilizer(const RunConfig& c, std::ostream& out) {
  const Homomorphism rho = load_hom(c.hom);
  const auto catalog = catalog_for(c, rho.presentation());
  const std::size_t cap = cap_or_default(c.cap);
  const OrbitResult o = orbit(rho, catalog, cap);
  if (!o.complete()) {
    emit(c,
         {{"schema", "finorb.stabilizer/1"}, {"status", "cap"}, {"orbit_size", o.size()}, {"cap", cap}},
         out);
    return kExitInconclusive;
  }
  const StabilizerData s = stabilizer_generators(o, catalog);
  Json gens = Json::array();
  bool all_fix = true;
  for (const auto& w : s.schreier_generators) {
    const bool fixes = act(rho, w, catalog) == rho;
    all_fix = all_fix && fixes;
    gens.push_back({{"word", w}, {"label", word_label(w, catalog)}, {"fixes_base", fixes}});
  }
  emit(c,
       {{"schema", "finorb.stabilizer/1"},
        {"status", "complete"},
        {"orbit_size", o.size()},
        {"catalog", c.gens},
        {"catalog_labels", o.labels},
        {"count", s.schreier_generators.size()},
        {"all_fix_base", all_fix},
        {"generators", std::move(gens)}},
       out);
  return all_fix ? kExitOk : kExitInternal;
}

int cmd_coinv(const RunConfig& c, std::ostream& out) {
  const auto mats = read_matrices(c.matrices);
  const auto n = static_cast<std::size_t>(c.dim);
  const IntMatrix rel = coinvariant_relations(n, std::span<const IntMatrix>(mats));
  const SNFResult s = snf(rel);
  emit(c,
       {{"schema", "finorb.coinvariants/1"},
        {"dim", n},
        {"generators", mats.size()},
        {"relations", to_json(rel)},
        {"snf", {{"U", to_json(s.U)}, {"D", to_json(s.D)}, {"V", to_json(s.V)}}},
        {"invariants", invariants_json(cokernel_invariants(rel))}},
       out);
  return kExitOk;
}

int cmd_snf(const RunConfig& c, std::ostream& out) {
  const IntMatrix a = read_matrix(c.matrix);
  const SNFResult s = snf(a);
  Json diag = Json::array();
  for (const auto& d : snf_diagonal(s.D)) diag.push_back(to_json(d));
  emit(c,
       {{"schema", "finorb.snf/1"},
        {"U", to_json(s.U)},
        {"D", to_json(s.D)},
        {"V", to_json(s.V)},
        {"diagonal", std::move(diag)},
        {"verified", verify_snf(a, s)},
        {"cokernel", invariants_json(cokernel_invariants(a))}},
       out);
  return kExitOk;
}

std::string coset_label(const TargetGroup& q, const Element& e, std::size_t i) {
  // Zero-padded index keeps the JSON object in coset order.
  std::ostringstream s;
  s.width(3);
  s.fill('0');
  s << i;
  return s.str() + " " + q.element_to_json(e).dump();
}

int cmd_cw(const RunConfig& c, std::ostream& out) {
  const Presentation p = Presentation::parse(c.group);
  const FiniteQuotient q = FiniteQuotient::parse(p, c.quotient);
  const SubgroupHomology h = subgroup_homology(q);
  const CwReport r = cw_verify(q, h);
  Json chi = Json::object(), pred = Json::object();
  for (std::size_t i = 0; i < r.order; ++i) {
    const std::string key = coset_label(*q.target(), h.table.coset_element[i], i);
    chi[key] = to_json(r.character.values[i]);
    pred[key] = to_json(r.predicted.values[i]);
  }
  const Json j{{"schema", "finorb.cw/1"},
               {"group", p.spec()},
               {"quotient", c.quotient},
               {"verdict", r.pass ? "PASS" : "FAIL"},
               {"rank", r.rank},
               {"order", r.order},
               {"character", chi},
               {"predicted", pred},
               {"trivial_multiplicity", r.trivial_multiplicity.get_str()},
               {"class_function", r.class_function}};
  if (c.format == "text") {
    out << "group " << p.spec() << ", Q = " << c.quotient << ", rank H_1(N) = " << r.rank << "\n";
    out << "coset            chi   predicted\n";
    for (const auto& [k, v] : chi.items()) {
      std::string label = k;
      label.resize(std::max<std::size_t>(label.size(), 16), ' ');
      out << label << " " << scalar_text(v) << "     " << scalar_text(pred[k]) << "\n";
    }
    out << "verdict: " << (r.pass ? "PASS" : "FAIL") << "\n";
  } else {
    out << dump(j);
  }
  return r.pass ? kExitOk : kExitInternal;
}

int cmd_transfer(const RunConfig& c, std::ostream& out) {
  const Presentation p = Presentation::parse(c.group);
  const FiniteQuotient q = FiniteQuotient::parse(p, c.quotient);
  const SubgroupHomology h = subgroup_homology(q);
  const IntMatrix t = transfer_map(h);
  bool fixed = true;
  for (const auto& m : h.q_action) fixed = fixed && m * t == t;
  const RatMatrix inv = fixed_subspace(std::span<const IntMatrix>(h.q_action));
  emit(c,
       {{"schema", "finorb.transfer/1"},
        {"group", p.spec()},
        {"quotient", c.quotient},
        {"rank_h1_n", h.rank},
        {"matrix", to_json(t)},
        {"image_rank", rank(t)},
        {"q_fixed", fixed},
        {"fixed_subspace_dim", inv.cols()}},
       out);
  return fixed ? kExitOk : kExitInternal;
}

int cmd_certify(const RunConfig& c, std::ostream& out) {
  const Homomorphism rho = load_hom(c.hom);
  const auto catalog = catalog_for(c, rho.presentation());
  CertifyOptions opts;
  opts.catalog_spec = c.gens;
  opts.orbit_cap = cap_or_default(c.orbit_cap);
  opts.closure_cap = cap_or_default(c.closure_cap);
  const Certificate cert = certify(rho, catalog, opts);
  if (!c.out.empty()) write_text_file(c.out, dump(cert.json));
  if (c.out.empty() && c.format == "json") {
    out << dump(cert.json);
  } else {
    Json steps = Json::array();
    for (const auto& s : cert.steps)
      steps.push_back({{"name", s.name}, {"status", s.pass ? "PASS" : "FAIL"}, {"detail", s.detail}});
    Json summary{{"schema", "finorb.certify-summary/1"},
                 {"conclusion", cert.json["conclusion"]},
                 {"consistent", cert.consistent},
                 {"steps", std::move(steps)},
                 {"certificate", c.out.empty() ? Json(nullptr) : Json(c.out)}};
    emit(c, summary, out);
  }
  if (!cert.consistent) return kExitInternal;
  return cert.conclusion == Conclusion::image_finite ? kExitOk : kExitInconclusive;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  std::ifstream in(c.cert, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  const CheckReport r = check_certificate(buf.str());
  emit(c, r.json, out);
  return r.pass ? kExitOk : kExitData;
}

int cmd_braid(const RunConfig& c, std::ostream& out) {
  const BraidReport r = braid_counterexample_check(c.n, c.target.empty() ? "ab:1" : c.target);
  emit(c, r.json, out);
  return r.pass ? kExitOk : kExitInternal;
}

int exit_for(ErrorKind k) { return k == ErrorKind::consistency ? kExitInternal : kExitData; }

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::malformed: return "malformed";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::budget: return "budget";
    case ErrorKind::not_central: return "not_central";
    case ErrorKind::not_surjective: return "not_surjective";
    case ErrorKind::not_in_subgroup: return "not_in_subgroup";
    case ErrorKind::not_a_group: return "not_a_group";
    case ErrorKind::catalog: return "catalog";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message) {
  err << dump(Json{{"error", {{"kind", kind}, {"message", message}}}});
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args, std::string* help) {
  RunConfig c;
  CLI::App app{"finorb: finite orbits and finite images of representations"};
  app.require_subcommand(1, 1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_option("--threads", c.threads, "worker threads for the parallel kernels")->check(CLI::NonNegativeNumber);
  app.add_option("--format", c.format, "json | text | dot")->check(CLI::IsMember({"json", "text", "dot"}));

  auto sub = [&](const std::string& name, const std::string& desc) { return app.add_subcommand(name, desc); };
  auto group = [&](CLI::App* s) { s->add_option("--group", c.group, "free:n or surface:g")->required(); };
  auto target = [&](CLI::App* s, bool req = true) {
    auto* o = s->add_option("--target", c.target, "sym:d, cyclic:k, ab:r, heis:k, heis:Z, matz:...");
    if (req) o->required();
  };
  auto gens = [&](CLI::App* s) { s->add_option("--gens", c.gens, "nielsen|mcg|braid|inner|file:<path>"); };
  auto hom = [&](CLI::App* s) { s->add_option("--hom", c.hom, "hom JSON file or gallery:<name>")->required(); };
  auto positive = CLI::PositiveNumber;

  auto* s_enum = sub("enum", "enumerate Hom(group, target)");
  group(s_enum), target(s_enum);
  auto* s_orbit = sub("orbit", "orbit of a hom under a catalog");
  hom(s_orbit), gens(s_orbit);
  s_orbit->add_option("--cap", c.cap)->check(positive);
  s_orbit->add_option("--dot", c.dot, "write the orbit graph in DOT format");
  auto* s_fixed = sub("fixed", "homs fixed by every catalog element");
  group(s_fixed), target(s_fixed), gens(s_fixed);
  auto* s_part = sub("partition", "orbit partition of Hom(group, target)");
  group(s_part), target(s_part), gens(s_part);
  auto* s_stab = sub("stabilizer", "Schreier generators of the stabilizer");
  hom(s_stab), gens(s_stab);
  s_stab->add_option("--cap", c.cap)->check(positive);
  auto* s_coinv = sub("coinv", "co-invariants of Z^n under integer matrices");
  s_coinv->add_option("--dim", c.dim)->required()->check(CLI::NonNegativeNumber);
  s_coinv->add_option("--matrices", c.matrices)->required();
  auto* s_snf = sub("snf", "Smith normal form");
  s_snf->add_option("--matrix", c.matrix)->required();
  auto* s_cw = sub("cw", "Chevalley-Weil character check");
  group(s_cw);
  s_cw->add_option("--quotient", c.quotient, "e.g. cyclic:2:[1,1]")->required();
  auto* s_transfer = sub("transfer", "transfer map H_1(group) -> H_1(N)");
  group(s_transfer);
  s_transfer->add_option("--quotient", c.quotient)->required();
  auto* s_cert = sub("certify", "run the finiteness pipeline and write a certificate");
  hom(s_cert), gens(s_cert);
  s_cert->add_option("--orbit-cap", c.orbit_cap)->check(positive);
  s_cert->add_option("--closure-cap", c.closure_cap)->check(positive);
  s_cert->add_option("--out", c.out, "certificate path");
  auto* s_check = sub("check", "re-verify a certificate");
  s_check->add_option("--cert", c.cert)->required();
  auto* s_braid = sub("braid-check", "braid-invariant infinite-image control");
  s_braid->add_option("--n", c.n)->check(CLI::Range(2, 12));
  target(s_braid, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    c.subcommand = "help";
    if (help) *help = app.help();
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto* s : app.get_subcommands()) c.subcommand = s->get_name();

  const std::string& s = c.subcommand;
  if (s == "enum" || s == "fixed" || s == "partition") {
    validate_group(c.group);
    validate_target(c.target);
  }
  if (s == "fixed" || s == "partition" || s == "orbit" || s == "stabilizer" || s == "certify")
    validate_gens(c.gens);
  if (s == "orbit" || s == "stabilizer" || s == "certify") validate_hom(c.hom);
  if (s == "cw" || s == "transfer") validate_group(c.group);
  if (s == "braid-check" && !c.target.empty()) validate_target(c.target);
  if (s == "coinv") require_file(c.matrices, "--matrices");
  if (s == "snf") require_file(c.matrix, "--matrix");
  if (s == "check") require_file(c.cert, "--cert");
  require(c.format != "dot" || s == "orbit", "--format dot only applies to orbit");
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.threads > 0) set_thread_count(c.threads);
  try {
    const std::string& s = c.subcommand;
    if (s == "enum") return cmd_enum(c, out);
    if (s == "orbit") return cmd_orbit(c, out);
    if (s == "fixed") return cmd_fixed(c, out);
    if (s == "partition") return cmd_partition(c, out);
    if (s == "stabilizer") return cmd_stabilizer(c, out);
    if (s == "coinv") return cmd_coinv(c, out);
    if (s == "snf") return cmd_snf(c, out);
    if (s == "cw") return cmd_cw(c, out);
    if (s == "transfer") return cmd_transfer(c, out);
    if (s == "certify") return cmd_certify(c, out);
    if (s == "check") return cmd_check(c, out);
    if (s == "braid-check") return cmd_braid(c, out);
    error_json(err, "usage", "unknown subcommand '" + s + "'");
    return kExitUsage;
  } catch (const Error& e) {
    error_json(err, kind_name(e.kind()), e.what());
    return exit_for(e.kind());
  } catch (const Json::exception& e) {
    error_json(err, "malformed", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what());
    return kExitInternal;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    std::string help;
    c = parse_args(args, &help);
    if (c.subcommand == "help") {
      out << help;
      return kExitOk;
    }
  } catch (const UsageError& e) {
    error_json(err, "usage", e.what());
    return kExitUsage;
  }
  return run(c, out, err);
}

}  // namespace finorb::cli
