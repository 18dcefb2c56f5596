#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "finorb/orbits.hpp"
#include "finorb/parallel.hpp"
#include "finorb/reference.hpp"
#include "oracles.hpp"

using namespace finorb;

TEST_CASE("enumeration counts") {
  CHECK(enumerate_homs(Presentation::free(2), TargetGroup::cyclic(2)).size() == 4);
  CHECK(enumerate_homs(Presentation::free(2), TargetGroup::symmetric(3)).size() == 36);
  CHECK(enumerate_homs(Presentation::surface(2), TargetGroup::cyclic(2)).size() == 16);
  // Surface(2) -> S3: relator is not automatic; compare with a direct count.
  const auto s3 = TargetGroup::symmetric(3);
  const auto homs = enumerate_homs(Presentation::surface(2), s3);
  CHECK(homs.size() == oracle::count_surface_homs_s3());
  CHECK(std::is_sorted(homs.begin(), homs.end()));
  CHECK_THROWS_AS(enumerate_homs(Presentation::free(2), TargetGroup::heisenberg_z()), Error);
  CHECK_THROWS_AS(enumerate_homs(Presentation::free(4), s3, 100), Error);
}

TEST_CASE("small orbits") {
  const Presentation p = Presentation::free(2);
  const auto c2 = TargetGroup::cyclic(2);
  const Homomorphism triv(p, c2, {Element{{0}}, Element{{0}}});
  CHECK(orbit(triv, nielsen_generators(2), 100).size() == 1);
  const Homomorphism h(p, c2, {Element{{1}}, Element{{0}}});
  const auto o = orbit(h, nielsen_generators(2), 100);
  CHECK(o.complete());
  CHECK(o.size() == 3);
  CHECK(o.find(triv) == OrbitResult::npos);

  const auto ab1 = TargetGroup::parse("ab:1");
  const Homomorphism es(p, ab1, {Element{{1}}, Element{{1}}});
  const auto big = orbit(es, nielsen_generators(2), 1000);
  CHECK_FALSE(big.complete());
  CHECK(big.size() == 1000);
}

TEST_CASE("fixed points") {
  const Presentation p = Presentation::free(2);
  const auto s3 = enumerate_homs(p, TargetGroup::symmetric(3));
  const auto fs = fixed_points(s3, nielsen_generators(2));
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].is_trivial());

  const auto c2 = enumerate_homs(p, TargetGroup::cyclic(2));
  const auto fb = fixed_points(c2, braid_generators(2));
  REQUIRE(fb.size() == 2);
  for (const auto& h : fb) CHECK(h.images()[0] == h.images()[1]);

  const auto sc = enumerate_homs(Presentation::surface(2), TargetGroup::cyclic(2));
  const auto fm = fixed_points(sc, surface_mcg_generators(2));
  REQUIRE(fm.size() == 1);
  CHECK(fm[0].is_trivial());
}

TEST_CASE("orbit partitions") {
  const Presentation p = Presentation::free(2);
  const auto homs = enumerate_homs(p, TargetGroup::cyclic(2));
  const auto parts = orbit_partition(homs, nielsen_generators(2));
  std::multiset<std::size_t> sizes;
  for (const auto& o : parts) sizes.insert(o.size());
  CHECK(sizes == std::multiset<std::size_t>{1, 3});

  const std::vector<Automorphism> only_id{Automorphism::identity(p)};
  for (const auto& o : orbit_partition(homs, only_id)) CHECK(o.size() == 1);

  // Singleton cells are exactly the fixed points.
  for (int k = 2; k <= 6; ++k) {
    const auto hk = enumerate_homs(p, TargetGroup::cyclic(k));
    const auto cat = nielsen_generators(2);
    std::set<Homomorphism> singles;
    for (const auto& o : orbit_partition(hk, cat))
      if (o.size() == 1) singles.insert(o.elements[0]);
    const auto fixed = fixed_points(hk, cat);
    CHECK(singles == std::set<Homomorphism>(fixed.begin(), fixed.end()));
  }
}

TEST_CASE("orbit partition matches the GL2(Z/k) action") {
  for (int k = 2; k <= 6; ++k) {
    CAPTURE(k);
    CHECK(oracle::nielsen_partition_matches_gl2(k));
  }
}

TEST_CASE("image is constant along orbits") {
  const Presentation p = Presentation::free(2);
  for (const char* t : {"cyclic:4", "sym:3", "heis:2"}) {
    const auto homs = enumerate_homs(p, TargetGroup::parse(t));
    for (const auto& o : orbit_partition(homs, nielsen_generators(2))) CHECK(oracle::image_constant(o));
  }
  const auto sc = enumerate_homs(Presentation::surface(2), TargetGroup::cyclic(3));
  for (const auto& o : orbit_partition(sc, surface_mcg_generators(2))) CHECK(oracle::image_constant(o));
}

TEST_CASE("stabilizer generators fix the base") {
  const Presentation p = Presentation::free(2);
  const auto cat = nielsen_generators(2);
  const Homomorphism h(p, TargetGroup::cyclic(2), {Element{{1}}, Element{{0}}});
  const auto o = orbit(h, cat, 100);
  const auto s = stabilizer_generators(o, cat);
  CHECK(s.schreier_generators.size() <= cat.size() * o.size());
  CHECK_FALSE(s.schreier_generators.empty());
  for (const auto& w : s.schreier_generators) CHECK(act(h, w, cat) == h);
  for (std::size_t i = 0; i < o.size(); ++i) CHECK(act(h, transversal_word(o, i), cat) == o.elements[i]);

  const Homomorphism triv(p, TargetGroup::cyclic(2), {Element{{0}}, Element{{0}}});
  const auto s1 = stabilizer_generators(orbit(triv, cat, 10), cat);
  REQUIRE(s1.schreier_generators.size() == cat.size());
  for (std::size_t g = 0; g < cat.size(); ++g)
    CHECK(s1.schreier_generators[g] == CatalogWord{static_cast<int>(g + 1)});

  const auto heis = heisenberg_standard(p, TargetGroup::heisenberg_mod(3));
  const auto oh = orbit(heis, cat, 10'000);
  for (const auto& w : stabilizer_generators(oh, cat).schreier_generators) {
    CHECK(act(heis, w, cat) == heis);
    CHECK(apply_to_hom(materialize(w, cat), heis) == heis);
  }
}

TEST_CASE("catalog words") {
  const auto cat = nielsen_generators(2);
  const CatalogWord w{3, -1, 2};
  const Automorphism m = materialize(w, cat);
  CHECK(m == compose(compose(cat[2], cat[0].inverse()), cat[1]));
  std::vector<IntMatrix> h1;
  for (const auto& phi : cat) h1.push_back(induced_h1(phi));
  CHECK(word_h1(w, h1) == induced_h1(m));
  CHECK(materialize(inverse_word(w), cat) == m.inverse());
}

TEST_CASE("DOT export") {
  const Presentation p = Presentation::free(2);
  const auto cat = nielsen_generators(2);
  const Homomorphism triv(p, TargetGroup::cyclic(2), {Element{{0}}, Element{{0}}});
  const std::string dot = export_orbit_dot(orbit(triv, cat, 10));
  CHECK(oracle::count(dot, "n0 -> n0") == cat.size());
  CHECK(oracle::count(dot, "];\n") - oracle::count(dot, "->") == 1);
  CHECK(oracle::count(dot, "doublecircle") == 1);

  const Homomorphism h(p, TargetGroup::cyclic(3), {Element{{1}}, Element{{0}}});
  const auto o = orbit(h, cat, 100);
  const std::string d1 = export_orbit_dot(o);
  CHECK(oracle::count(d1, "];\n") - oracle::count(d1, "->") == o.size());
  CHECK(d1 == export_orbit_dot(orbit(h, cat, 100)));
  CHECK(oracle::count(d1, "->") == o.edges.size());
}

TEST_CASE("conjugacy quotient and inner orbits") {
  const Presentation p = Presentation::free(2);
  const auto s3 = TargetGroup::symmetric(3);
  const Homomorphism h(p, s3, {Element{{1, 0, 2}}, Element{{1, 2, 0}}});
  // Onto S3 with trivial center: the inner orbit has |S3| / |Z(S3)| = 6 elements.
  CHECK(orbit(h, catalog_from_spec("inner", p), 100).size() == 6);
  const auto o = orbit(h, nielsen_generators(2), 1000);
  const auto r = conjugacy_quotient(o);
  CHECK(r.orbit_size == o.size());
  CHECK(r.class_count * 6 == o.size());
}

TEST_CASE("parallel kernels agree with the serial reference at 1 and 4 threads") {
  const Presentation p = Presentation::free(2);
  const int saved = thread_count();
  for (int threads : {1, 4}) {
    set_thread_count(threads);
    for (const char* t : {"sym:3", "cyclic:6", "heis:2"}) {
      const auto tg = TargetGroup::parse(t);
      CHECK(enumerate_homs(p, tg) == reference::enumerate_homs(p, tg));
    }
    CHECK(enumerate_homs(Presentation::surface(2), TargetGroup::symmetric(3)) ==
          reference::enumerate_homs(Presentation::surface(2), TargetGroup::symmetric(3)));
    for (long k : {3L, 5L}) {
      const auto rho = heisenberg_standard(p, TargetGroup::heisenberg_mod(k));
      const auto cat = nielsen_generators(2);
      for (std::size_t cap : {std::size_t{50}, std::size_t{100'000}}) {
        const auto a = orbit(rho, cat, cap);
        const auto b = reference::orbit(rho, cat, cap);
        CHECK(oracle::same_orbit(a, b));
      }
      const auto ca = closure(std::span<const Element>(rho.images()), rho.target(), 100'000);
      const auto cb = reference::closure(std::span<const Element>(rho.images()), rho.target(), 100'000);
      CHECK(ca.elements == cb.elements);
      CHECK(ca.words == cb.words);
    }
    const auto hz = heisenberg_standard(p, TargetGroup::heisenberg_z());
    CHECK(oracle::same_orbit(orbit(hz, nielsen_generators(2), 3000),
                             reference::orbit(hz, nielsen_generators(2), 3000)));
  }
  set_thread_count(saved);
}

TEST_CASE("orbit results do not depend on the thread count") {
  const Presentation p = Presentation::free(2);
  const auto rho = heisenberg_standard(p, TargetGroup::heisenberg_mod(5));
  const int saved = thread_count();
  set_thread_count(1);
  const auto one = orbit(rho, nielsen_generators(2), 100'000);
  const std::string dot1 = export_orbit_dot(one);
  set_thread_count(4);
  const auto four = orbit(rho, nielsen_generators(2), 100'000);
  set_thread_count(saved);
  CHECK(oracle::same_orbit(one, four));
  CHECK(dot1 == export_orbit_dot(four));
}

TEST_CASE("default cap honours the environment") {
  CHECK(default_cap() == kDefaultOrbitCap);
  setenv("FINORB_DEFAULT_CAP", "1234", 1);
  CHECK(default_cap() == 1234);
  setenv("FINORB_DEFAULT_CAP", "junk", 1);
  CHECK(default_cap() == kDefaultOrbitCap);
  unsetenv("FINORB_DEFAULT_CAP");
}
