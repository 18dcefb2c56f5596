#include <deque>
#include <random>
#include <set>

#include "doctest.h"
#include "finorb/autos.hpp"
#include "finorb/homomorphism.hpp"
#include "finorb/json_io.hpp"

using namespace finorb;

namespace {

bool certified(const Automorphism& phi) {
  const Presentation& p = phi.presentation();
  if (!compose(phi.forward(), phi.backward()).is_identity()) return false;
  if (!compose(phi.backward(), phi.forward()).is_identity()) return false;
  for (const auto& r : p.relators()) {
    const FreeWord img = phi.apply(r);
    if (!conjugate_in_free(img, r) && !conjugate_in_free(img, r.inverse())) return false;
  }
  return true;
}

std::vector<std::vector<Automorphism>> all_catalogs() {
  std::vector<std::vector<Automorphism>> out;
  for (int n = 2; n <= 4; ++n) {
    out.push_back(nielsen_generators(n));
    out.push_back(braid_generators(n));
  }
  for (int g = 2; g <= 3; ++g) out.push_back(surface_mcg_generators(g));
  return out;
}

}  // namespace

TEST_CASE("Nielsen generators") {
  const auto cat = nielsen_generators(2);
  REQUIRE(cat.size() == 3);
  const Automorphism& m = cat[2];
  CHECK(m.apply(FreeWord{1}) == FreeWord{2, 1});
  CHECK(m.apply(FreeWord{2}) == FreeWord{2});
  CHECK(induced_h1(m) == IntMatrix{{1, 0}, {1, 1}});
  for (const auto& phi : cat) CHECK(compose(phi.forward(), phi.backward()).is_identity());

  // The H_1 images act transitively on the nonzero vectors of (Z/2)^2.
  std::set<std::pair<long, long>> seen{{1, 0}};
  std::deque<std::pair<long, long>> queue{{1, 0}};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& phi : cat) {
      const IntMatrix a = induced_h1(phi);
      const long nx = ((a(0, 0).get_si() * x + a(0, 1).get_si() * y) % 2 + 2) % 2;
      const long ny = ((a(1, 0).get_si() * x + a(1, 1).get_si() * y) % 2 + 2) % 2;
      if (seen.insert({nx, ny}).second) queue.push_back({nx, ny});
    }
  }
  CHECK(seen.size() == 3);
}

TEST_CASE("every catalog entry is certified") {
  for (const auto& cat : all_catalogs()) {
    for (const auto& phi : cat) {
      CAPTURE(phi.label());
      CHECK(certified(phi));
      CHECK(certified(phi.inverse()));
      CHECK(is_unimodular(induced_h1(phi)));
    }
  }
}

TEST_CASE("bogus automorphisms are rejected") {
  const Presentation p = Presentation::free(2);
  const Endo square{p, {FreeWord{1, 1}, FreeWord{2}}, "sq"};
  CHECK_THROWS_AS(Automorphism(square, square, "sq"), Error);
  const Presentation s = Presentation::surface(2);
  // a1 -> a1 b1 alone is a homology transvection but does not preserve the relator.
  const Endo f{s, {FreeWord{1, 2}, FreeWord{2}, FreeWord{3}, FreeWord{4}}, "x"};
  const Endo b{s, {FreeWord{1, -2}, FreeWord{2}, FreeWord{3}, FreeWord{4}}, "x"};
  CHECK_NOTHROW(Automorphism(f, b, "x"));
  const Endo f2{s, {FreeWord{1, 3}, FreeWord{2}, FreeWord{3}, FreeWord{4}}, "y"};
  const Endo b2{s, {FreeWord{1, -3}, FreeWord{2}, FreeWord{3}, FreeWord{4}}, "y"};
  CHECK_THROWS_AS(Automorphism(f2, b2, "y"), Error);
}

TEST_CASE("surface catalog is symplectic and contains a_i -> a_i + b_i") {
  for (int g = 2; g <= 3; ++g) {
    for (const auto& phi : surface_mcg_generators(g)) CHECK(is_symplectic(induced_h1(phi), g));
  }
  // Breadth-first over products of depth <= 6 until a1 -> a1 + b1 (others fixed) shows up.
  const auto cat = surface_mcg_generators(2);
  IntMatrix target = IntMatrix::identity(4);
  target(1, 0) = 1;
  std::set<std::vector<mpz_class>> seen;
  std::vector<IntMatrix> layer{IntMatrix::identity(4)};
  bool found = false;
  for (int depth = 0; depth < 6 && !found; ++depth) {
    std::vector<IntMatrix> next;
    for (const auto& m : layer) {
      for (const auto& phi : cat) {
        const IntMatrix n = m * induced_h1(phi);
        if (n == target) found = true;
        if (seen.insert(n.entries()).second) next.push_back(n);
      }
    }
    layer = std::move(next);
  }
  CHECK(found);
}

TEST_CASE("braid generators") {
  const auto b2 = braid_generators(2);
  CHECK(b2[0].apply(FreeWord{1}) == FreeWord{1, 2, -1});
  CHECK(b2[0].apply(FreeWord{2}) == FreeWord{1});
  CHECK(induced_h1(b2[0]) == IntMatrix{{0, 1}, {1, 0}});
  const auto b4 = braid_generators(4);
  for (std::size_t i = 0; i < b4.size(); ++i) {
    IntMatrix swap = IntMatrix::identity(4);
    swap(i, i) = swap(i + 1, i + 1) = 0;
    swap(i, i + 1) = swap(i + 1, i) = 1;
    CHECK(induced_h1(b4[i]) == swap);
  }
  const auto b3 = braid_generators(3);
  const Automorphism& s1 = b3[0];
  const Automorphism& s2 = b3[1];
  CHECK(compose(compose(s1, s2), s1) == compose(compose(s2, s1), s2));
  CHECK_FALSE(compose(s1, s2) == compose(s2, s1));
  // Far-apart generators commute.
  CHECK(compose(b4[0], b4[2]) == compose(b4[2], b4[0]));
}

TEST_CASE("inner automorphisms") {
  const Presentation p = Presentation::free(2);
  CHECK(inner_automorphism(p, FreeWord{}) == Automorphism::identity(p));
  const auto s3 = TargetGroup::symmetric(3);
  const Homomorphism rho(p, s3, {Element{{1, 0, 2}}, Element{{1, 2, 0}}});
  const FreeWord g{2, -1};
  const Homomorphism conj = apply_to_hom(inner_automorphism(p, g), rho);
  const Element rg = rho(g);
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(conj.images()[k] == s3->multiply(s3->multiply(rg, rho.images()[k]), s3->inverse(rg)));
}

TEST_CASE("composition") {
  const auto cat = nielsen_generators(2);
  for (const auto& phi : cat) CHECK(compose(phi, phi.inverse()) == Automorphism::identity(phi.presentation()));
  std::mt19937 rng(5);
  std::vector<Automorphism> pool;
  for (const auto& phi : cat) {
    pool.push_back(phi);
    pool.push_back(phi.inverse());
  }
  for (int t = 0; t < 50; ++t) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    const auto& c = pool[rng() % pool.size()];
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(induced_h1(compose(a, b)) == induced_h1(a) * induced_h1(b));
  }
}

TEST_CASE("catalog specs and files") {
  const Presentation f2 = Presentation::free(2);
  CHECK(catalog_from_spec("nielsen", f2).size() == 3);
  CHECK(catalog_from_spec("braid", f2).size() == 1);
  CHECK(catalog_from_spec("inner", f2).size() == 2);
  CHECK(catalog_from_spec("mcg", Presentation::surface(2)).size() == surface_mcg_generators(2).size());
  CHECK_THROWS_AS(catalog_from_spec("mcg", f2), Error);
  CHECK_THROWS_AS(catalog_from_spec("spin", f2), Error);

  const auto cat = surface_mcg_generators(2);
  const Json j = catalog_to_json(cat);
  const std::string path = "/tmp/finorb_test_catalog.json";
  write_text_file(path, dump(j));
  const auto back = load_catalog(path);
  REQUIRE(back.size() == cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) CHECK(back[i] == cat[i]);
  CHECK(dump(catalog_to_json(back)) == dump(j));
}
