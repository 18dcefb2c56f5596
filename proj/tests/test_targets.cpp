#include "doctest.h"
#include "finorb/homomorphism.hpp"
#include "finorb/targets.hpp"

using namespace finorb;

namespace {

Element heis_elem(long a, long b, long c) { return Element{{a, b, c}}; }

}  // namespace

TEST_CASE("closure") {
  const auto s3 = TargetGroup::symmetric(3);
  const std::vector<Element> id{s3->identity()};
  const auto c1 = closure(std::span<const Element>(id), s3, 100);
  CHECK(c1.closed());
  CHECK(c1.order() == 1);

  const auto h3 = TargetGroup::heisenberg_mod(3);
  const std::vector<Element> g{heis_elem(1, 0, 0), heis_elem(0, 1, 0)};
  const auto c27 = closure(std::span<const Element>(g), h3, 1000);
  CHECK(c27.closed());
  CHECK(c27.order() == 27);
  // Oracle: all 27 unitriangular matrices mod 3.
  CHECK(h3->elements().size() == 27);
  for (std::size_t i = 0; i < c27.order(); ++i)
    CHECK(evaluate(c27.words[i], std::span<const Element>(g), *h3) == c27.elements[i]);

  const auto hz = TargetGroup::heisenberg_z();
  const auto cz = closure(std::span<const Element>(g), hz, 10'000);
  CHECK_FALSE(cz.closed());
  CHECK(cz.order() == 10'000);
}

TEST_CASE("center") {
  const std::vector<Element> g{Element{{1, 0}}};
  const auto c = closure(std::span<const Element>(g), TargetGroup::parse("abfin:4,6"), 100);
  CHECK(center(c).size() == c.order());

  const auto h3 = TargetGroup::heisenberg_mod(3);
  const std::vector<Element> hg{heis_elem(1, 0, 0), heis_elem(0, 1, 0)};
  const auto full = closure(std::span<const Element>(hg), h3, 100);
  const auto z = center(full);
  CHECK(z.size() == 3);
  for (const auto& e : z) CHECK((e.v[0] == 0 && e.v[1] == 0));

  const auto s3 = TargetGroup::symmetric(3);
  const std::vector<Element> sg{Element{{1, 0, 2}}, Element{{1, 2, 0}}};
  CHECK(center(closure(std::span<const Element>(sg), s3, 100)).size() == 1);
}

TEST_CASE("element order") {
  const auto s3 = TargetGroup::symmetric(3);
  CHECK(element_order(s3->identity(), *s3, 10) == 1u);
  CHECK(element_order(Element{{1, 2, 0}}, *s3, 10) == 3u);
  const auto m2 = TargetGroup::parse("matz:2");
  CHECK_FALSE(element_order(Element{{1, 1, 0, 1}}, *m2, 100).has_value());
}

TEST_CASE("central quotients") {
  const auto h3 = TargetGroup::heisenberg_mod(3);
  const std::vector<Element> hg{heis_elem(1, 0, 0), heis_elem(0, 1, 0)};
  const auto full = closure(std::span<const Element>(hg), h3, 100);
  const auto z = center(full);
  const auto q = quotient_map_to_finite(full, z, 1000);
  REQUIRE(q.finite);
  CHECK(q.quotient->order() == 9);
  const auto& f = *q.quotient->group;
  for (const auto& a : f.elements())
    for (const auto& b : f.elements()) CHECK(f.commute(a, b));

  const auto s3 = TargetGroup::symmetric(3);
  const std::vector<Element> sg{Element{{1, 0, 2}}, Element{{1, 2, 0}}};
  const auto cs = closure(std::span<const Element>(sg), s3, 100);
  const auto trivial = quotient_map_to_finite(cs, std::vector<Element>{}, 100);
  REQUIRE(trivial.finite);
  CHECK(trivial.quotient->order() == 6);

  const auto hz = TargetGroup::heisenberg_z();
  const auto cz = closure(std::span<const Element>(hg), hz, 500);
  const std::vector<Element> zc{heis_elem(0, 0, 1)};
  CHECK_FALSE(quotient_map_to_finite(cz, zc, 500).finite);
}

TEST_CASE("target specs round-trip") {
  for (const char* s : {"sym:3", "cyclic:5", "ab:2", "heis:3", "heis:Z", "matz:2", "abfin:2,2"}) {
    CHECK(TargetGroup::parse(s)->spec() == s);
  }
  CHECK_THROWS_AS(TargetGroup::parse("sym"), Error);
  CHECK_THROWS_AS(TargetGroup::parse("lie:3"), Error);
  const auto s3 = TargetGroup::symmetric(3);
  CHECK_THROWS_AS(s3->validate(Element{{0, 0, 1}}), Error);
}
