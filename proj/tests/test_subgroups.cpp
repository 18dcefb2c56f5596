#include <random>

#include "doctest.h"
#include "finorb/reference.hpp"
#include "finorb/subgroups.hpp"

using namespace finorb;

namespace {

FiniteQuotient quotient(const std::string& group, const std::string& spec) {
  return FiniteQuotient::parse(Presentation::parse(group), spec);
}

std::string cyclic_first(int gens, int m) {
  std::string s = "cyclic:" + std::to_string(m) + ":[1";
  for (int i = 1; i < gens; ++i) s += ",0";
  return s + "]";
}

}  // namespace

TEST_CASE("coset tables") {
  const auto triv = coset_table(quotient("free:2", "cyclic:1:[0,0]"));
  CHECK(triv.index == 1);
  CHECK(triv.transversal == std::vector<FreeWord>{FreeWord{}});

  const auto t = coset_table(quotient("free:2", "cyclic:2:[1,1]"));
  CHECK(t.index == 2);
  CHECK(t.transversal == std::vector<FreeWord>{FreeWord{}, FreeWord{1}});

  const auto s = coset_table(quotient("surface:2", "cyclic:2:[1,0,0,0]"));
  CHECK(s.index == 2);
  for (std::size_t c = 0; c < s.index; ++c) {
    CHECK(s.coset_of(conjugate(surface_relator(2), s.transversal[c])) == 0);
  }
  CHECK_THROWS_AS(quotient("free:2", "cyclic:4:[2,0]"), Error);
}

TEST_CASE("Reidemeister-Schreier rewriting") {
  const auto t = coset_table(quotient("free:2", "cyclic:2:[1,1]"));
  CHECK(rewrite(t, FreeWord{}).empty());
  const FreeWord sq{1, 1};
  const FreeWord r = rewrite(t, sq);
  CHECK(r.size() == 1);  // the (0, x1) edge is in the tree, so only s_(1,x1) remains
  CHECK(expand(t, r) == sq);
  CHECK_THROWS_AS(rewrite(t, FreeWord{1}), Error);

  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<Letter> raw;
    for (int j = 0; j < 4; ++j) {
      std::vector<Letter> g;
      for (std::size_t l = rng() % 4; l-- > 0;) g.push_back(static_cast<Letter>((rng() % 2 ? 1 : -1) * (1 + rng() % 2)));
      const FreeWord gw = reduce(g);
      const Letter x = static_cast<Letter>((rng() % 2 ? 1 : -1) * (1 + rng() % 2));
      const FreeWord piece = conjugate(FreeWord{x, x}, gw);
      raw.insert(raw.end(), piece.begin(), piece.end());
    }
    const FreeWord w = reduce(raw);
    CHECK(expand(t, rewrite(t, w)) == w);
  }
}

TEST_CASE("Nielsen-Schreier and surface ranks") {
  for (int n : {2, 3})
    for (int m : {2, 3, 4, 6}) {
      const auto h = subgroup_homology(quotient("free:" + std::to_string(n), cyclic_first(n, m)));
      CHECK(h.lattice_rank == static_cast<std::size_t>(1 + m * (n - 1)));
      CHECK(h.rank == h.lattice_rank);
    }
  for (int g : {2, 3})
    for (int m : {2, 3, 4}) {
      const auto h = subgroup_homology(quotient("surface:" + std::to_string(g), cyclic_first(2 * g, m)));
      CHECK(h.rank == static_cast<std::size_t>(m * (2 * g - 2) + 2));
    }
}

TEST_CASE("q_action is a homomorphism") {
  for (const auto& [g, q] : std::vector<std::pair<std::string, std::string>>{
           {"free:2", "cyclic:2:[1,1]"},
           {"free:2", "sym:3:[[1,0,2],[1,2,0]]"},
           {"surface:2", "cyclic:2:[1,0,0,0]"},
           {"surface:2", "abfin:2,2:[[1,0],[0,1],[0,0],[0,0]]"},
           {"free:3", "cyclic:5:[1,2,0]"}}) {
    CAPTURE(q);
    const FiniteQuotient fq = quotient(g, q);
    const auto h = subgroup_homology(fq);
    CHECK(h.q_action[0] == IntMatrix::identity(h.rank));
    for (std::size_t a = 0; a < h.table.index; ++a)
      for (std::size_t b = 0; b < h.table.index; ++b)
        CHECK(h.q_action[a] * h.q_action[b] == h.q_action[h.table.multiply(*fq.target(), a, b)]);
    CHECK(h.q_action == reference::q_action(h));
  }
}

TEST_CASE("Chevalley-Weil characters") {
  const auto c2 = cw_verify(quotient("free:2", "cyclic:2:[1,1]"));
  CHECK(c2.pass);
  CHECK(c2.character.values == std::vector<mpz_class>{3, 1});
  const auto s3 = cw_verify(quotient("free:2", "sym:3:[[1,0,2],[1,2,0]]"));
  CHECK(s3.pass);
  CHECK(s3.character.values[0] == 7);
  for (std::size_t q = 1; q < 6; ++q) CHECK(s3.character.values[q] == 1);
  const auto sc = cw_verify(quotient("surface:2", "cyclic:2:[1,0,0,0]"));
  CHECK(sc.pass);
  CHECK(sc.character.values == std::vector<mpz_class>{6, 2});
  CHECK(sc.class_function);
  CHECK(sc.trivial_multiplicity == 4);  // (6 + 2) / 2: V_0 has dimension 2g

  const auto pred = predicted_character(Presentation::free(3), 4);
  CHECK(pred.values == std::vector<mpz_class>{9, 1, 1, 1});
}

TEST_CASE("transfer") {
  const auto triv = subgroup_homology(quotient("free:2", "cyclic:1:[0,0]"));
  CHECK(transfer_map(triv) == IntMatrix::identity(2));
  for (const auto& [g, q, r] : std::vector<std::tuple<std::string, std::string, std::size_t>>{
           {"free:2", "cyclic:2:[1,1]", 2}, {"surface:2", "cyclic:2:[1,0,0,0]", 4}}) {
    const auto h = subgroup_homology(quotient(g, q));
    const IntMatrix t = transfer_map(h);
    CHECK(rank(t) == r);
    for (const auto& m : h.q_action) CHECK(m * t == t);
    const RatMatrix fixed = fixed_subspace(std::span<const IntMatrix>(h.q_action));
    CHECK(fixed.cols() == r);
    CHECK(rank(hstack(std::span<const RatMatrix>(std::vector<RatMatrix>{fixed, to_rational(t)}), fixed.rows())) == r);
  }
}

TEST_CASE("characteristic core") {
  const Presentation p = Presentation::free(2);
  CHECK(characteristic_core(p, 1).order() == 1);
  const FiniteQuotient q2 = characteristic_core(p, 2);
  CHECK(q2.order() == 4);
  // Every element of the quotient has order <= 2, as in (Z/2)^2.
  const auto& t = *q2.target();
  for (const auto& e : t.elements()) CHECK(t.multiply(e, e) == t.identity());
  const auto table = coset_table(q2);
  for (const auto& phi : nielsen_generators(2)) CHECK(preserves_kernel(q2, table, phi));
  const FiniteQuotient q3 = characteristic_core(p, 3);
  const auto t3 = coset_table(q3);
  for (const auto& phi : nielsen_generators(2)) CHECK(preserves_kernel(q3, t3, phi));
}

TEST_CASE("kernel preservation") {
  const Presentation p = Presentation::free(2);
  const FiniteQuotient q = FiniteQuotient::parse(p, "cyclic:2:[1,0]");
  const auto t = coset_table(q);
  const auto cat = nielsen_generators(2);
  CHECK_FALSE(preserves_kernel(q, t, cat[0]));  // swapping the generators moves N
  CHECK(preserves_kernel(q, t, compose(cat[0], cat[0])));
  CHECK(preserves_kernel(q, t, std::vector<int>{1, 1}, cat));
  CHECK_FALSE(preserves_kernel(q, t, std::vector<int>{1}, cat));
  CHECK(preserves_kernel(q, t, cat[1]));
}
