#include "finorb/certify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "finorb/error.hpp"

namespace finorb {

namespace {

mpz_class mod(const mpz_class& x, const mpz_class& m) {
  if (m == 0) return x;
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Json matrices_json(const std::vector<IntMatrix>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

Json ints_json(const std::vector<mpz_class>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

bool rows_congruent(const IntMatrix& a, const IntMatrix& b, const std::vector<mpz_class>& moduli) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (mod(a(i, j) - b(i, j), moduli[i]) != 0) return false;
  return true;
}

CatalogWord power_word(const CatalogWord& w, int k) {
  CatalogWord r;
  for (int i = 0; i < k; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

/// Order of the subgroup of Z^a x prod Z/m_i spanned by the columns, when
/// finite.
std::optional<mpz_class> span_order(const IntMatrix& cols, const std::vector<mpz_class>& moduli) {
  mpz_class ambient = 1;
  for (std::size_t i = 0; i < cols.rows(); ++i) {
    if (moduli[i] == 0) {
      for (std::size_t j = 0; j < cols.cols(); ++j)
        if (cols(i, j) != 0) return std::nullopt;
    } else {
      ambient *= moduli[i];
    }
  }
  std::vector<std::size_t> finite_rows;
  for (std::size_t i = 0; i < cols.rows(); ++i)
    if (moduli[i] != 0) finite_rows.push_back(i);
  const std::size_t r = finite_rows.size();
  IntMatrix rel(r, cols.cols() + r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t j = 0; j < cols.cols(); ++j) rel(a, j) = cols(finite_rows[a], j);
    rel(a, cols.cols() + a) = moduli[finite_rows[a]];
  }
  const AbelianInvariants quotient = cokernel_invariants(rel);
  return ambient / quotient.order();
}

}  // namespace

RatMatrix free_rows(const IntMatrix& rho_ab, const std::vector<mpz_class>& moduli) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < rho_ab.rows(); ++i)
    if (moduli[i] == 0) rows.push_back(i);
  RatMatrix r(rows.size(), rho_ab.cols());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t j = 0; j < rho_ab.cols(); ++j) r(a, j) = rho_ab(rows[a], j);
  return r;
}

IntMatrix rho_ab_matrix(const Homomorphism& rho, const CentralData& z, const SubgroupHomology& h) {
  const std::size_t rows = z.moduli.size();
  IntMatrix lattice(rows, h.lattice_rank);
  for (std::size_t i = 0; i < h.lattice_rank; ++i) {
    std::vector<mpz_class> c;
    try {
      c = z.coordinates(rho(h.table.schreier_words[i]));
    } catch (const Error& e) {
      fail(ErrorKind::consistency, "rho(N) is not inside Z: Schreier generator " +
                                       h.table.schreier_words[i].to_string() + " escapes");
    }
    if (c.size() != rows) fail(ErrorKind::consistency, "Z coordinate length mismatch");
    for (std::size_t r = 0; r < rows; ++r) lattice(r, i) = c[r];
  }
  return reduce_rows(lattice * h.section, std::span<const mpz_class>(z.moduli));
}

StepReport kernel_step(const IntMatrix& rho_ab, const std::vector<mpz_class>& moduli,
                       const SubgroupHomology& h) {
  StepReport r{"kernel", true, ""};
  for (std::size_t q = 0; q < h.q_action.size(); ++q) {
    if (!rows_congruent(rho_ab * h.q_action[q], rho_ab, moduli)) {
      r.pass = false;
      r.detail = "rho_ab is not Q-invariant at coset " + std::to_string(q);
      return r;
    }
  }
  const RatMatrix p0 = averaging_projector(std::span<const IntMatrix>(h.q_action));
  const RatMatrix f = free_rows(rho_ab, moduli);
  const RatMatrix off = f * (RatMatrix::identity(h.rank) - p0);
  if (!off.is_zero()) {
    r.pass = false;
    r.detail = "rho_ab tensor Q is nonzero on a nontrivial isotypic component";
    return r;
  }
  r.detail = "rho_ab is Q-invariant; rho_ab tensor Q (" + std::to_string(f.rows()) +
             " free rows) factors through V_0";
  return r;
}

CoinvariantsOutcome coinvariants_step(const StabilizerData& stab,
                                      const std::vector<Automorphism>& catalog,
                                      const FiniteQuotient& q, const SubgroupHomology& h,
                                      const IntMatrix& rho_ab, const std::vector<mpz_class>& moduli,
                                      const CoinvariantsOptions& options) {
  CoinvariantsOutcome out;
  out.report.name = "coinvariants";
  const IntMatrix b = transfer_map(h);
  const auto n = static_cast<std::size_t>(q.presentation().generator_count());
  for (const auto& m : h.q_action) {
    if (!(m * b == b)) fail(ErrorKind::consistency, "transfer image is not Q-fixed");
  }
  if (rank(b) != n) fail(ErrorKind::consistency, "transfer map is not injective over Q");

  std::vector<IntMatrix> catalog_h1;
  for (const auto& phi : catalog) catalog_h1.push_back(induced_h1(phi));

  for (const auto& w : stab.schreier_generators) {
    int k = 1;
    while (k <= options.power_bound && !preserves_kernel(q, h.table, power_word(w, k), catalog)) ++k;
    if (k > options.power_bound) {
      out.inconclusive = true;
      out.report.detail = "no power <= " + std::to_string(options.power_bound) +
                          " of a stabilizer generator preserves N";
      return out;
    }
    out.generators.push_back(power_word(w, k));
  }

  std::map<std::string, IntMatrix> distinct;
  for (const auto& w : out.generators) {
    IntMatrix m = word_h1(w, catalog_h1);
    distinct.emplace(to_string(m), std::move(m));
  }
  for (auto& [key, m] : distinct) out.matrices.push_back(std::move(m));
  if (out.matrices.empty()) out.matrices.push_back(IntMatrix::identity(n));

  // Naturality on a sample: the action on H_1(N), restricted to V_0, is the
  // action on H_1(Gamma) in the transfer basis.
  std::vector<std::size_t> order(out.generators.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    return out.generators[a].size() < out.generators[c].size();
  });
  const RatMatrix bq = to_rational(b);
  for (std::size_t s = 0; s < std::min(options.naturality_samples, order.size()); ++s) {
    const CatalogWord& w = out.generators[order[s]];
    const Automorphism phi = materialize(w, catalog);
    NaturalitySample ns{w, induced_on_subgroup(h, phi), {}};
    ns.m = to_integer(solve_left(bq, to_rational(ns.phi * b)));
    if (!(ns.m == word_h1(w, catalog_h1))) {
      out.report.pass = false;
      out.report.detail = "naturality fails for " + word_label(w, catalog);
      return out;
    }
    out.naturality.push_back(std::move(ns));
  }

  out.relations = coinvariant_relations(n, std::span<const IntMatrix>(out.matrices));
  out.snf = snf(out.relations);
  out.invariants = cokernel_invariants(out.relations);
  if (!out.invariants.finite()) {
    out.report.pass = false;
    out.report.detail = "co-invariants of V_0 are " + out.invariants.to_string() +
                        ", not finite: an invariant direction survives rationally";
    return out;
  }
  const RatMatrix on_v0 = free_rows(rho_ab, moduli) * bq;
  if (!on_v0.is_zero()) {
    out.report.pass = false;
    out.report.detail = "co-invariants are finite but rho_ab tensor Q does not vanish on V_0";
    return out;
  }
  out.report.pass = true;
  out.report.detail = "co-invariants of V_0 are " + out.invariants.to_string() +
                      " (finite) under " + std::to_string(out.generators.size()) +
                      " stabilizer generators; rho_ab tensor Q vanishes on V_0";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

const char* kScope =
    "Orbit finiteness is established only under the named catalog within the stated cap. "
    "The certificate checks each step of the finiteness argument for this representation; "
    "it makes no claim about orbits under all of Aut(Gamma), and the finite index of the "
    "full stabilizer is recorded as an assumption.";

Json central_json(const CentralData& d, const Homomorphism& rho) {
  Json z = Json::array();
  for (const auto& e : d.z_generators) z.push_back(rho.target()->element_to_json(e));
  Json zw = Json::array();
  for (const auto& w : d.z_words) zw.push_back(to_json(w));
  Json table = Json::array();
  const std::size_t f = d.f_group->table_order();
  for (std::size_t a = 0; a < f; ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < f; ++b) {
      row.push_back(d.f_group
                        ->multiply(Element{{mpz_class(static_cast<unsigned long>(a))}},
                                   Element{{mpz_class(static_cast<unsigned long>(b))}})
                        .v[0]
                        .get_ui());
    }
    table.push_back(std::move(row));
  }
  Json pull = Json::array();
  for (const auto& e : d.pullback.surjection().images()) pull.push_back(e.v[0].get_ui());
  return {{"kind", d.kind == CentralKind::finite_center ? "finite_center" : "abelian_image"},
          {"z_generators", std::move(z)},
          {"z_words", std::move(zw)},
          {"z_moduli", ints_json(d.moduli)},
          {"z_order", d.z_order ? to_json(*d.z_order) : Json(nullptr)},
          {"f_order", f},
          {"f_table", std::move(table)},
          {"pullback_images", std::move(pull)}};
}

Json step_json(const StepReport& s) {
  return {{"name", s.name}, {"status", s.pass ? "PASS" : "FAIL"}, {"detail", s.detail}};
}

}  // namespace

Certificate certify(const Homomorphism& rho, const std::vector<Automorphism>& catalog,
                    const CertifyOptions& options) {
  Certificate cert;
  Json& j = cert.json;
  j["schema"] = "finorb.certificate/1";
  {
    Json labels = Json::array();
    std::vector<IntMatrix> h1;
    for (const auto& phi : catalog) {
      labels.push_back(phi.label());
      h1.push_back(induced_h1(phi));
    }
    j["instance"] = {{"hom", to_json(rho)},
                     {"catalog", options.catalog_spec},
                     {"catalog_labels", std::move(labels)},
                     {"catalog_h1", matrices_json(h1)},
                     {"orbit_cap", options.orbit_cap},
                     {"closure_cap", options.closure_cap}};
  }
  j["scope"] = kScope;
  for (const char* k : {"orbit", "stabilizer", "central", "subgroup", "cw", "rho_ab", "kernel",
                        "coinvariants"})
    j[k] = nullptr;

  auto step = [&](StepReport s) {
    cert.steps.push_back(s);
    return s.pass;
  };
  auto stop = [&](const std::string& failed, const std::string& reason) {
    cert.conclusion = Conclusion::inconclusive;
    cert.failed_step = failed;
    cert.reason = reason;
  };

  bool finished = false;
  mpz_class order;
  do {
    // Orbit.
    const OrbitResult o = orbit(rho, catalog, options.orbit_cap);
    j["orbit"] = {{"status", o.complete() ? "complete" : "cap"}, {"size", o.size()}, {"cap", o.cap}};
    if (!step({"orbit", o.complete(),
               o.complete() ? "orbit closed under the catalog with " + std::to_string(o.size()) + " elements"
                            : "orbit not finite within cap " + std::to_string(o.cap)})) {
      stop("orbit", "orbit not finite within cap");
      break;
    }

    // Stabilizer.
    const StabilizerData stab = stabilizer_generators(o, catalog);
    bool fixes = true;
    std::size_t longest = 0;
    for (const auto& w : stab.schreier_generators) {
      longest = std::max(longest, w.size());
      fixes = fixes && act(rho, w, catalog) == rho;
    }
    j["stabilizer"] = {{"generators", stab.schreier_generators.size()},
                       {"max_word_length", longest},
                       {"fixes_rho", fixes}};
    if (!step({"stabilizer", fixes,
               std::to_string(stab.schreier_generators.size()) +
                   " Schreier generators, each fixing rho exactly"})) {
      stop("stabilizer", "a Schreier generator does not fix rho");
      cert.consistent = false;
      break;
    }

    // Central data.
    const CentralOutcome co = inner_orbit_central_check(rho, options.closure_cap);
    if (!co.ok()) {
      step({"central", false, co.reason});
      stop("central", "no finite central quotient: " + co.reason);
      break;
    }
    const CentralData& cd = *co.data;
    j["central"] = central_json(cd, rho);
    step({"central", true,
          "|F| = " + std::to_string(cd.f_order()) + ", Z has " +
              std::to_string(cd.moduli.size()) + " coordinates"});

    // Center is its own module of co-invariants: stabilizer elements fix every z.
    bool center_fixed = true;
    for (const auto& w : stab.schreier_generators) {
      const Homomorphism moved = act(rho, w, catalog);
      for (std::size_t i = 0; i < cd.z_words.size() && center_fixed; ++i)
        center_fixed = moved(cd.z_words[i]) == cd.z_generators[i];
    }
    if (!step({"center_coinvariants", center_fixed,
               "every stabilizer generator fixes each generator of Z, so Z is its own module of "
               "co-invariants"})) {
      stop("center_coinvariants", "a stabilizer generator moves Z");
      cert.consistent = false;
      break;
    }

    // N = rho^-1(Z), upgraded to the characteristic core if needed.
    std::optional<FiniteQuotient> q;
    bool upgraded = false;
    bool core_over_budget = false;
    std::size_t moving = 0;
    const CosetTable pull_table = coset_table(cd.pullback);
    for (const auto& w : stab.schreier_generators)
      if (!preserves_kernel(cd.pullback, pull_table, w, catalog)) ++moving;
    if (options.characteristic || moving > 0) {
      try {
        q.emplace(characteristic_core(rho.presentation(), static_cast<int>(std::max<std::size_t>(cd.f_order(), 1))));
        upgraded = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::budget) throw;
        core_over_budget = true;  // keep ker(F); coinvariants_step falls back to powers
      }
    }
    if (!q) q.emplace(cd.pullback);
    const SubgroupHomology h = subgroup_homology(*q);
    const IntMatrix b = transfer_map(h);
    {
      Json qmult = Json::array();
      for (std::size_t a = 0; a < h.table.index; ++a) {
        Json row = Json::array();
        for (std::size_t c = 0; c < h.table.index; ++c) row.push_back(h.table.multiply(*q->target(), a, c));
        qmult.push_back(std::move(row));
      }
      Json transversal = Json::array();
      for (const auto& t : h.table.transversal) transversal.push_back(to_json(t));
      j["subgroup"] = {{"index", h.table.index},
                       {"characteristic_core", upgraded},
                       {"moved_by_stabilizer", moving},
                       {"lattice_rank", h.lattice_rank},
                       {"rank", h.rank},
                       {"transversal", std::move(transversal)},
                       {"q_mult", std::move(qmult)},
                       {"relations", rho.presentation().is_surface() ? to_json(h.relations) : Json(nullptr)},
                       {"projection", to_json(h.projection)},
                       {"section", to_json(h.section)},
                       {"q_action", matrices_json(h.q_action)},
                       {"transfer", to_json(b)}};
    }
    step({"subgroup", true,
          "N has index " + std::to_string(h.table.index) + " and H_1(N) has rank " +
              std::to_string(h.rank) + (upgraded ? " (characteristic core)" : "") +
              (core_over_budget ? " (characteristic core over budget; kept ker(rho -> F))" : "")});

    // Character.
    const CwReport cw = cw_verify(*q, h);
    j["cw"] = {{"verdict", cw.pass ? "PASS" : "FAIL"},
               {"character", ints_json(cw.character.values)},
               {"predicted", ints_json(cw.predicted.values)}};
    if (!step({"chevalley_weil", cw.pass,
               cw.pass ? "character equals the predicted one exactly" : "character mismatch"})) {
      stop("chevalley_weil", "character of H_1(N) differs from the prediction");
      cert.consistent = false;
      break;
    }

    // rho_ab.
    IntMatrix rho_ab;
    try {
      rho_ab = rho_ab_matrix(rho, cd, h);
    } catch (const Error& e) {
      step({"rho_ab", false, e.what()});
      stop("rho_ab", e.what());
      break;
    }
    j["rho_ab"] = to_json(rho_ab);
    step({"rho_ab", true,
          std::to_string(rho_ab.rows()) + "x" + std::to_string(rho_ab.cols()) +
              (rho_ab.is_zero() ? ", zero" : ", nonzero")});

    // Kernel step.
    const StepReport ks = kernel_step(rho_ab, cd.moduli, h);
    j["kernel"] = {{"projector", to_json(averaging_projector(std::span<const IntMatrix>(h.q_action)))},
                   {"verdict", ks.pass ? "PASS" : "FAIL"}};
    if (!step(ks)) {
      stop("kernel", ks.detail);
      cert.consistent = false;
      break;
    }

    // Co-invariants on V_0.
    const CoinvariantsOutcome ci =
        coinvariants_step(stab, catalog, *q, h, rho_ab, cd.moduli, options.coinvariants);
    {
      std::vector<IntMatrix> catalog_h1;
      for (const auto& phi : catalog) catalog_h1.push_back(induced_h1(phi));
      Json gens = Json::array();
      for (const auto& w : ci.generators) {
        const IntMatrix m = word_h1(w, catalog_h1);
        const auto it = std::find(ci.matrices.begin(), ci.matrices.end(), m);
        gens.push_back({{"word", Json(w)}, {"matrix", it - ci.matrices.begin()}});
      }
      Json nat = Json::array();
      for (const auto& s : ci.naturality)
        nat.push_back({{"word", Json(s.word)}, {"phi", to_json(s.phi)}, {"m", to_json(s.m)}});
      Json inv = {{"free_rank", ci.invariants.free_rank}, {"torsion", ints_json(ci.invariants.torsion)}};
      j["coinvariants"] = {{"generators", std::move(gens)},
                           {"matrices", matrices_json(ci.matrices)},
                           {"relations", to_json(ci.relations)},
                           {"snf", {{"U", to_json(ci.snf.U)}, {"D", to_json(ci.snf.D)}, {"V", to_json(ci.snf.V)}}},
                           {"invariants", std::move(inv)},
                           {"naturality", std::move(nat)},
                           {"verdict", ci.report.pass ? "PASS" : "FAIL"}};
    }
    if (ci.inconclusive) {
      step({"coinvariants", false, ci.report.detail});
      stop("coinvariants", ci.report.detail);
      break;
    }
    if (!step(ci.report)) {
      stop("coinvariants", ci.report.detail);
      break;
    }

    // Conclusion: Z tensor Q = 0, so Z is finite.
    const RatMatrix fr = free_rows(rho_ab, cd.moduli);
    if (!fr.is_zero()) {
      step({"conclusion", false, "rho_ab tensor Q is nonzero"});
      stop("conclusion", "rho_ab tensor Q is nonzero");
      cert.consistent = false;
      break;
    }
    mpz_class z_order;
    if (cd.z_order) {
      z_order = *cd.z_order;
    } else {
      IntMatrix cols(cd.moduli.size(), cd.z_generators.size());
      for (std::size_t c = 0; c < cd.z_generators.size(); ++c) {
        const auto v = cd.coordinates(cd.z_generators[c]);
        for (std::size_t r = 0; r < v.size(); ++r) cols(r, c) = v[r];
      }
      const auto so = span_order(cols, cd.moduli);
      if (!so) {
        step({"conclusion", false, "Z has a free part"});
        stop("conclusion", "Z has a free part");
        cert.consistent = false;
        break;
      }
      z_order = *so;
      j["central"]["z_order"] = to_json(z_order);
    }
    order = mpz_class(static_cast<unsigned long>(cd.f_order())) * z_order;
    step({"conclusion", true,
          "Z tensor Q = 0; |rho(Gamma)| = |F| * |Z| = " + std::to_string(cd.f_order()) + " * " +
              z_order.get_str()});
    finished = true;
  } while (false);

  // Direct cross-check.
  const SubgroupClosure cl = image_closure(rho, options.closure_cap);
  j["cross_check"] = {{"status", cl.closed() ? "closed" : "cap"},
                      {"order", cl.closed() ? Json(cl.order()) : Json(nullptr)},
                      {"cap", options.closure_cap}};
  if (finished) {
    if (cl.closed() && mpz_class(static_cast<unsigned long>(cl.order())) == order) {
      cert.conclusion = Conclusion::image_finite;
      cert.order = order;
    } else {
      stop("cross_check", "direct closure disagrees with the certified order");
      cert.consistent = false;
    }
  }

  Json steps = Json::array();
  for (const auto& s : cert.steps) steps.push_back(step_json(s));
  j["steps"] = std::move(steps);
  if (cert.conclusion == Conclusion::image_finite) {
    j["conclusion"] = {{"kind", "ImageFinite"}, {"order", to_json(cert.order)}};
  } else {
    j["conclusion"] = {{"kind", "Inconclusive"}, {"reason", cert.reason}, {"failed_step", cert.failed_step}};
  }
  j["consistent"] = cert.consistent;
  return cert;
}

// ---------------------------------------------------------------------------

BraidReport braid_counterexample_check(int n, const std::string& target_spec, std::size_t order_cap) {
  BraidReport r;
  r.strands = static_cast<std::size_t>(n);
  const TargetPtr t = TargetGroup::parse(target_spec);
  Element designated;
  switch (t->realization()) {
    case Realization::abelian_free:
      designated = t->identity();
      designated.v[0] = 1;
      break;
    case Realization::heisenberg_z:
      designated = Element{{1, 0, 0}};
      break;
    case Realization::matrix_z:
      if (t->designated_generators().empty())
        fail(ErrorKind::invalid_argument, "matrix target needs a designated generator file");
      designated = t->designated_generators().front();
      break;
    default:
      fail(ErrorKind::invalid_argument, target_spec + " has no designated infinite-order element");
  }
  const Homomorphism rho(Presentation::free(n), t,
                         std::vector<Element>(static_cast<std::size_t>(n), designated));
  for (const auto& s : braid_generators(n))
    if (apply_to_hom(s, rho) == rho) r.fixed_by.push_back(s.label());
  r.infinite_image = !element_order(designated, *t, order_cap).has_value();
  for (const auto& phi : nielsen_generators(n))
    if (!(apply_to_hom(phi, rho) == rho)) r.moved_by_nielsen.push_back(phi.label());
  // The pipeline must not conclude finiteness for this hom.
  CertifyOptions opts;
  opts.catalog_spec = "braid";
  opts.orbit_cap = opts.closure_cap = order_cap;
  const Certificate cert = certify(rho, braid_generators(n), opts);
  r.certify_failed_step = cert.failed_step;
  r.certify_image_finite = cert.conclusion == Conclusion::image_finite;
  r.pass = r.fixed_by.size() == static_cast<std::size_t>(n - 1) && r.infinite_image &&
           !r.moved_by_nielsen.empty() && !r.certify_image_finite;
  r.json = {{"schema", "finorb.braid-check/1"},
            {"hom", to_json(rho)},
            {"fixed_by", r.fixed_by},
            {"infinite_image", r.infinite_image},
            {"order_cap", order_cap},
            {"moved_by_nielsen", r.moved_by_nielsen},
            {"certify", cert.json["conclusion"]},
            {"verdict", r.pass ? "PASS" : "FAIL"}};
  return r;
}

}  // namespace finorb
