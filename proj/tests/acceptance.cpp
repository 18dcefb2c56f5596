// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "finorb/certify.hpp"
#include "finorb/check.hpp"
#include "finorb/parallel.hpp"
#include "finorb/reference.hpp"
#include "oracles.hpp"

using namespace finorb;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "failed: ";
      else note << "; ";
      note << what;
    }
    pass = pass && ok;
  }
};

Homomorphism heis(long k) {
  return heisenberg_standard(Presentation::free(2), TargetGroup::heisenberg_mod(k));
}

Certificate certify_heis3() {
  CertifyOptions o;
  return certify(heis(3), nielsen_generators(2), o);
}

std::string first_generator_quotient(int gens, int m) {
  std::string s = "cyclic:" + std::to_string(m) + ":[1";
  for (int i = 1; i < gens; ++i) s += ",0";
  return s + "]";
}

// 1. Fixed points of the Nielsen / mapping class catalogs are exactly {trivial}.
void fixed_point_suite(Outcome& r) {
  auto only_trivial = [&](const Presentation& p, const std::string& t, const std::vector<Automorphism>& cat,
                          std::size_t expected_total) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto homs = enumerate_homs(p, TargetGroup::parse(t));
    const auto fixed = fixed_points(homs, cat);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.expect(expected_total == 0 || homs.size() == expected_total, p.spec() + "->" + t + " hom count");
    r.expect(fixed.size() == 1 && fixed[0].is_trivial(), p.spec() + "->" + t + " fixed set");
    r.expect(secs < 1.0, p.spec() + "->" + t + " took " + std::to_string(secs) + "s");
  };
  const Presentation f2 = Presentation::free(2);
  only_trivial(f2, "sym:3", nielsen_generators(2), 36);
  for (int k = 2; k <= 6; ++k)
    only_trivial(f2, "cyclic:" + std::to_string(k), nielsen_generators(2), static_cast<std::size_t>(k * k));
  only_trivial(Presentation::surface(2), "cyclic:2", surface_mcg_generators(2), 16);
  if (r.pass) r.note << "sym:3 (36 homs), cyclic:2..6, surface:2->cyclic:2 (16 homs): fixed set {trivial}";
}

// 2. Chevalley-Weil characters equal the predicted ones exactly.
void chevalley_weil(Outcome& r) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"free:2", "cyclic:2:[1,1]"},
      {"free:2", "cyclic:3:[1,1]"},
      {"free:2", "sym:3:[[1,0,2],[1,2,0]]"},
      {"surface:2", "cyclic:2:[1,0,0,0]"},
      {"surface:2", "abfin:2,2:[[1,0],[0,1],[0,0],[0,0]]"}};
  for (const auto& [g, q] : cases) {
    const Presentation p = Presentation::parse(g);
    const FiniteQuotient fq = FiniteQuotient::parse(p, q);
    const CwReport c = cw_verify(fq);
    const long n = p.is_surface() ? 2L * p.parameter() - 2 : p.parameter() - 1L;
    const long triv = p.is_surface() ? 2 : 1;
    bool formula = c.character.values.size() == fq.order();
    for (std::size_t i = 0; formula && i < fq.order(); ++i)
      formula = c.character.values[i] == (i == 0 ? n * static_cast<long>(fq.order()) + triv : triv);
    r.expect(c.pass && formula, g + " / " + q);
  }
  if (r.pass) r.note << "5 quotients; chi(1) = (n-1)|Q|+1 resp. (2g-2)|Q|+2, chi(q!=1) = 1 resp. 2";
}

// 3. Nielsen-Schreier and surface rank formulas.
void rank_formulas(Outcome& r) {
  for (int n : {2, 3})
    for (int m : {2, 3, 4, 6}) {
      const auto h = subgroup_homology(
          FiniteQuotient::parse(Presentation::free(n), first_generator_quotient(n, m)));
      r.expect(h.rank == static_cast<std::size_t>(1 + m * (n - 1)),
               "free n=" + std::to_string(n) + " m=" + std::to_string(m));
    }
  for (int g : {2, 3})
    for (int m : {2, 3, 4}) {
      const auto h = subgroup_homology(
          FiniteQuotient::parse(Presentation::surface(g), first_generator_quotient(2 * g, m)));
      r.expect(h.rank == static_cast<std::size_t>(m * (2 * g - 2) + 2),
               "surface g=" + std::to_string(g) + " m=" + std::to_string(m));
    }
  if (r.pass) r.note << "8 free and 6 surface cases";
}

// 4. Co-invariants: transvections, their powers, and brute-force quotients.
void coinvariant_suite(Outcome& r) {
  const IntMatrix t1{{1, 1}, {0, 1}}, t2{{1, 0}, {1, 1}};
  const std::vector<IntMatrix> pair{t1, t2};
  r.expect(coinvariants(2, std::span<const IntMatrix>(pair)).trivial(), "transvection pair");
  for (int n : {2, 3, 5}) {
    IntMatrix a = IntMatrix::identity(2), b = IntMatrix::identity(2);
    for (int i = 0; i < n; ++i) a = a * t1, b = b * t2;
    const std::vector<IntMatrix> pw{a, b};
    const auto inv = coinvariants(2, std::span<const IntMatrix>(pw));
    r.expect(inv.free_rank == 0 && inv.torsion == std::vector<mpz_class>{n, n}, "powers N=" + std::to_string(n));
  }
  // Brute force: (Z/m)^n modulo the relation columns, against m^free * prod gcd(t, m).
  std::size_t cases = 0;
  std::mt19937 rng(17);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<IntMatrix> gens;
      for (int g = 0; g < 2; ++g) {
        IntMatrix m = IntMatrix::identity(n);
        for (int step = 0; step < 3; ++step) {
          IntMatrix e = IntMatrix::identity(n);
          const std::size_t i = rng() % n, j = rng() % n;
          if (i == j) e(i, i) = -1;
          else e(i, j) = static_cast<long>(rng() % 5) - 2;
          m = m * e;
        }
        gens.push_back(m);
      }
      const IntMatrix rel = coinvariant_relations(n, std::span<const IntMatrix>(gens));
      const auto inv = cokernel_invariants(rel);
      for (long mod = 2; mod <= 8; ++mod) {
        std::set<std::vector<long>> sub{std::vector<long>(n, 0)};
        std::vector<std::vector<long>> frontier{std::vector<long>(n, 0)};
        while (!frontier.empty()) {
          std::vector<std::vector<long>> next;
          for (const auto& v : frontier)
            for (std::size_t c = 0; c < rel.cols(); ++c) {
              std::vector<long> w(n);
              for (std::size_t i = 0; i < n; ++i) w[i] = ((v[i] + rel(i, c).get_si()) % mod + mod) % mod;
              if (sub.insert(w).second) next.push_back(w);
            }
          frontier = std::move(next);
        }
        std::size_t total = 1, predicted = 1;
        for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(mod);
        for (std::size_t i = 0; i < inv.free_rank; ++i) predicted *= static_cast<std::size_t>(mod);
        for (const auto& t : inv.torsion) {
          mpz_class g;
          mpz_gcd_ui(g.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(mod));
          predicted *= g.get_ui();
        }
        r.expect(total / sub.size() == predicted, "brute force n=" + std::to_string(n));
        ++cases;
      }
    }
  }
  if (r.pass) r.note << "transvections trivial; torsion (N,N) for N=2,3,5; " << cases << " brute-force quotients agree";
}

// 5. Orbit engine: image constant along orbits, GL2(Z/k) oracle, thread determinism.
void orbit_suite(Outcome& r) {
  const Presentation f2 = Presentation::free(2);
  for (int k = 2; k <= 6; ++k) {
    r.expect(oracle::nielsen_partition_matches_gl2(k), "GL2 oracle k=" + std::to_string(k));
    for (const auto& o : orbit_partition(enumerate_homs(f2, TargetGroup::cyclic(k)), nielsen_generators(2)))
      r.expect(oracle::image_constant(o), "image constant cyclic:" + std::to_string(k));
  }
  for (const auto& o : orbit_partition(enumerate_homs(f2, TargetGroup::symmetric(3)), nielsen_generators(2)))
    r.expect(oracle::image_constant(o), "image constant sym:3");
  r.expect(oracle::image_constant(orbit(heis(3), nielsen_generators(2), kDefaultOrbitCap)), "image constant heis:3");

  const int saved = thread_count();
  std::vector<std::string> runs;
  for (int threads : {1, 4}) {
    set_thread_count(threads);
    const auto o = orbit(heis(5), nielsen_generators(2), kDefaultOrbitCap);
    r.expect(oracle::same_orbit(o, reference::orbit(heis(5), nielsen_generators(2), kDefaultOrbitCap)),
             "parallel orbit equals serial reference at " + std::to_string(threads) + " threads");
    runs.push_back(export_orbit_dot(o) + dump(certify_heis3().json));
  }
  set_thread_count(saved);
  r.expect(runs[0] == runs[1], "output differs between 1 and 4 threads");
  if (r.pass) r.note << "GL2(Z/k) oracle k=2..6; images constant; identical output at 1 and 4 threads";
}

// 6. The positive case.
void positive_case(Outcome& r) {
  const auto t0 = std::chrono::steady_clock::now();
  const Certificate c = certify_heis3();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool steps = !c.steps.empty();
  for (const auto& s : c.steps) steps = steps && s.pass;
  r.expect(c.conclusion == Conclusion::image_finite && c.order == 27, "conclusion");
  r.expect(steps, "some step did not pass");
  r.expect(c.json["cross_check"]["status"] == "closed" && c.json["cross_check"]["order"] == 27, "cross-check");
  r.expect(c.consistent, "inconsistent");
  r.expect(secs < 60.0, "took " + std::to_string(secs) + "s");
  if (r.pass) r.note << "ImageFinite(27), " << c.steps.size() << " steps PASS, closure Closed(27), " << secs << "s";
}

// 7. Negative controls.
void negative_controls(Outcome& r) {
  const auto hz = heisenberg_standard(Presentation::free(2), TargetGroup::heisenberg_z());
  const std::size_t cap = 10'000;
  CertifyOptions o;
  o.orbit_cap = o.closure_cap = cap;
  const Certificate c = certify(hz, nielsen_generators(2), o);
  r.expect(c.json["orbit"]["status"] == "cap", "heis:Z orbit status");
  r.expect(c.json["cross_check"]["status"] == "cap", "heis:Z closure status");
  r.expect(!image_closure(hz, cap).closed(), "heis:Z closure");
  r.expect(c.conclusion == Conclusion::inconclusive && c.consistent, "heis:Z conclusion");

  const BraidReport b = braid_counterexample_check(4);
  r.expect(b.fixed_by.size() == 3, "exponent-sum hom fixed by s1,s2,s3");
  r.expect(b.infinite_image, "exponent-sum image infinite");
  r.expect(!b.certify_image_finite && b.certify_failed_step == "coinvariants", "coinvariants step must FAIL");
  if (r.pass)
    r.note << "heis:Z orbit and closure ExceededCap(" << cap
           << "); exponent-sum hom fixed by B_4, infinite image, coinvariants FAIL, never ImageFinite";
}

// 8. Structural invariants.
void structural(Outcome& r) {
  std::mt19937 rng(99);
  for (int t = 0; t < 300; ++t) {
    const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    IntMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = static_cast<long>(rng() % 21) - 10;
    r.expect(verify_snf(a, snf(a)), "SNF identity");
  }
  for (int g = 2; g <= 3; ++g)
    for (const auto& phi : surface_mcg_generators(g)) r.expect(is_symplectic(induced_h1(phi), g), "symplectic " + phi.label());

  std::vector<std::vector<Automorphism>> catalogs{nielsen_generators(2), nielsen_generators(3), braid_generators(3),
                                                  braid_generators(4), surface_mcg_generators(2),
                                                  surface_mcg_generators(3)};
  for (const auto& cat : catalogs)
    for (const auto& phi : cat) {
      bool ok = compose(phi.forward(), phi.backward()).is_identity() &&
                compose(phi.backward(), phi.forward()).is_identity();
      for (const auto& rel : phi.presentation().relators()) {
        const FreeWord img = phi.apply(rel);
        ok = ok && (conjugate_in_free(img, rel) || conjugate_in_free(img, rel.inverse()));
      }
      r.expect(ok, "certification " + phi.label());
    }

  const auto b4 = braid_generators(4);
  for (std::size_t i = 0; i + 1 < b4.size(); ++i)
    r.expect(compose(compose(b4[i], b4[i + 1]), b4[i]) == compose(compose(b4[i + 1], b4[i]), b4[i + 1]), "braid relation");
  r.expect(compose(b4[0], b4[2]) == compose(b4[2], b4[0]), "far commutation");

  const std::vector<std::pair<std::string, std::string>> qs{
      {"free:2", "cyclic:2:[1,1]"},
      {"free:2", "sym:3:[[1,0,2],[1,2,0]]"},
      {"surface:2", "cyclic:2:[1,0,0,0]"},
      {"surface:2", "abfin:2,2:[[1,0],[0,1],[0,0],[0,0]]"}};
  for (const auto& [g, q] : qs) {
    const FiniteQuotient fq = FiniteQuotient::parse(Presentation::parse(g), q);
    const auto h = subgroup_homology(fq);
    for (std::size_t a = 0; a < h.table.index; ++a)
      for (std::size_t b = 0; b < h.table.index; ++b)
        r.expect(h.q_action[a] * h.q_action[b] == h.q_action[h.table.multiply(*fq.target(), a, b)], "q_action " + q);
    const IntMatrix t = transfer_map(h);
    for (const auto& m : h.q_action) r.expect(m * t == t, "transfer fixed " + q);
  }
  if (r.pass) r.note << "300 SNFs, symplectic catalogs, certified catalogs, braid relations, q_action, transfer";
}

// 9. Independent re-verification of the positive certificate.
void reverification(Outcome& r) {
  const std::string text = dump(certify_heis3().json);
  const CheckReport k = check_certificate(text);
  r.expect(k.pass, "check failed");
  r.expect(k.byte_identical, "not byte-identical");
  for (const auto& item : k.items) r.expect(item.pass, item.name + ": " + item.detail);
  Json tampered = Json::parse(text);
  tampered["kernel"]["projector"]["entries"][0][0] = "1/2";
  r.expect(!check_certificate(dump(tampered)).pass, "tampered certificate accepted");
  if (r.pass) r.note << k.items.size() << " identities re-verified; byte-identical; tampering detected";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"fixed-point suite", fixed_point_suite},
      {"Chevalley-Weil characters", chevalley_weil},
      {"rank formulas", rank_formulas},
      {"co-invariants", coinvariant_suite},
      {"orbit engine soundness", orbit_suite},
      {"certifier positive case", positive_case},
      {"certifier negative controls", negative_controls},
      {"structural invariants", structural},
      {"certificate re-verification", reverification}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      criteria[i].second(r);
    } catch (const std::exception& e) {
      r.expect(false, std::string("exception: ") + e.what());
    }
    failures += r.pass ? 0 : 1;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << r.note.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
