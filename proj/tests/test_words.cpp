#include <random>

#include "doctest.h"
#include "finorb/targets.hpp"
#include "finorb/words.hpp"

using namespace finorb;

namespace {

std::vector<Letter> random_letters(std::mt19937& rng, int rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::vector<Letter> out(len(rng));
  for (auto& l : out) l = static_cast<Letter>(rng() % 2 ? gen(rng) : -gen(rng));
  return out;
}

}  // namespace

TEST_CASE("reduction") {
  CHECK(reduce(std::vector<Letter>{1, -1}).empty());
  CHECK(reduce(std::vector<Letter>{1, 2, -2, 1}) == FreeWord{1, 1});
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto raw = random_letters(rng, 3, 64);
    const FreeWord w = reduce(raw);
    CHECK(reduce(w.letters()) == w);
    for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] != -w[k - 1]);
  }
}

TEST_CASE("zero letter is rejected") { CHECK_THROWS_AS(reduce(std::vector<Letter>{1, 0}), Error); }

TEST_CASE("surface relator") {
  CHECK(surface_relator(1) == FreeWord{1, 2, -1, -2});
  CHECK(surface_relator(2) == FreeWord{1, 2, -1, -2, 3, 4, -3, -4});
  for (int g = 1; g <= 3; ++g) {
    for (auto x : abelianize(surface_relator(g), 2 * g)) CHECK(x == 0);
  }
}

TEST_CASE("cyclic reduction") {
  const auto r = cyclic_reduce(FreeWord{1, 2, -1});
  CHECK(r.core == FreeWord{2});
  CHECK(r.conjugator == FreeWord{1});
  const auto same = cyclic_reduce(FreeWord{1, 2});
  CHECK(same.core == FreeWord{1, 2});
  CHECK(same.conjugator.empty());
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    const FreeWord w = reduce(random_letters(rng, 3, 40));
    const auto c = cyclic_reduce(w);
    CHECK(c.conjugator * c.core * c.conjugator.inverse() == w);
    if (c.core.size() > 1) CHECK(c.core[0] != -c.core[c.core.size() - 1]);
  }
}

TEST_CASE("conjugacy in the free group") {
  CHECK(conjugate_in_free(FreeWord{1, 2}, FreeWord{2, 1}));
  CHECK_FALSE(conjugate_in_free(FreeWord{1}, FreeWord{2}));
  const FreeWord r = surface_relator(2);
  CHECK(conjugate_in_free(r, conjugate(r, FreeWord{3, -1})));
  CHECK_FALSE(conjugate_in_free(r, r.inverse()));
}

TEST_CASE("evaluation") {
  const auto s3 = TargetGroup::symmetric(3);
  const Element cyc{{1, 2, 0}};
  const std::vector<Element> ims{cyc};
  CHECK(evaluate(FreeWord{}, std::span<const Element>(ims), *s3) == s3->identity());
  CHECK(evaluate(FreeWord{1, 1}, std::span<const Element>(ims), *s3) == Element{{2, 0, 1}});

  const std::vector<Element> two{Element{{1, 0, 2}}, cyc};
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    const FreeWord u = reduce(random_letters(rng, 2, 20));
    const FreeWord v = reduce(random_letters(rng, 2, 20));
    CHECK(evaluate(u * v, std::span<const Element>(two), *s3) ==
          s3->multiply(evaluate(u, std::span<const Element>(two), *s3),
                       evaluate(v, std::span<const Element>(two), *s3)));
  }
}

TEST_CASE("presentations") {
  CHECK(Presentation::parse("free:3").generator_count() == 3);
  CHECK(Presentation::parse("surface:2").generator_count() == 4);
  CHECK_THROWS_AS(Presentation::parse("free:1"), Error);
  CHECK_THROWS_AS(Presentation::parse("torus:2"), Error);
  CHECK_THROWS_AS(Presentation::free(2).check_word(FreeWord{3}), Error);
}
