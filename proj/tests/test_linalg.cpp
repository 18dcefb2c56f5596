#include <random>
#include <set>

#include "doctest.h"
#include "finorb/linalg.hpp"

using namespace finorb;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

IntMatrix power(const IntMatrix& m, int k) {
  IntMatrix out = IntMatrix::identity(m.rows());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

// |(Z/m)^n / <columns of R mod m>| by breadth-first closure of the subgroup.
std::size_t brute_quotient_order(const IntMatrix& rel, long m) {
  const std::size_t n = rel.rows();
  std::set<std::vector<long>> sub{std::vector<long>(n, 0)};
  std::vector<std::vector<long>> frontier{std::vector<long>(n, 0)};
  while (!frontier.empty()) {
    std::vector<std::vector<long>> next;
    for (const auto& v : frontier) {
      for (std::size_t j = 0; j < rel.cols(); ++j) {
        std::vector<long> w(n);
        for (std::size_t i = 0; i < n; ++i) {
          const long x = rel(i, j).get_si() % m;
          w[i] = ((v[i] + x) % m + m) % m;
        }
        if (sub.insert(w).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  return total / sub.size();
}

// |A tensor Z/m| read off the invariants: m^free * prod gcd(t, m).
std::size_t predicted_quotient_order(const AbelianInvariants& inv, long m) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < inv.free_rank; ++i) out *= static_cast<std::size_t>(m);
  for (const auto& t : inv.torsion) {
    mpz_class g;
    mpz_gcd_ui(g.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(m));
    out *= g.get_ui();
  }
  return out;
}

}  // namespace

TEST_CASE("snf examples") {
  const auto id = snf(IntMatrix::identity(3));
  CHECK(id.D == IntMatrix::identity(3));
  CHECK(id.U == IntMatrix::identity(3));
  CHECK(id.V == IntMatrix::identity(3));

  const IntMatrix a{{2, 4}, {6, 8}};
  const auto r = snf(a);
  CHECK(r.D == IntMatrix{{2, 0}, {0, 4}});
  CHECK(verify_snf(a, r));

  const auto z = snf(IntMatrix(2, 3));
  CHECK(z.D.is_zero());
  CHECK(is_unimodular(z.U));
  CHECK(is_unimodular(z.V));
}

TEST_CASE("snf identities on random matrices") {
  std::mt19937 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const IntMatrix a = random_matrix(rng, r, c, 9);
    const auto s = snf(a);
    REQUIRE(verify_snf(a, s));
    const auto w = snf_with_inverses(a);
    CHECK(w.U * w.U_inv == IntMatrix::identity(r));
    CHECK(w.V * w.V_inv == IntMatrix::identity(c));
    CHECK(w.D == s.D);
  }
}

TEST_CASE("coinvariants examples") {
  const IntMatrix t1{{1, 1}, {0, 1}}, t2{{1, 0}, {1, 1}};
  const std::vector<IntMatrix> id{IntMatrix::identity(3)};
  const auto free3 = coinvariants(3, std::span<const IntMatrix>(id));
  CHECK(free3.free_rank == 3);
  CHECK(free3.torsion.empty());

  const std::vector<IntMatrix> pair{t1, t2};
  CHECK(coinvariants(2, std::span<const IntMatrix>(pair)).trivial());

  for (int n : {2, 3, 5}) {
    const std::vector<IntMatrix> powers{power(t1, n), power(t2, n)};
    const auto inv = coinvariants(2, std::span<const IntMatrix>(powers));
    CHECK(inv.free_rank == 0);
    CHECK(inv.torsion == std::vector<mpz_class>{n, n});
  }
}

TEST_CASE("coinvariants agree with brute-force quotients") {
  // Generator pools on Z^n: elementary transvections, sign changes, swaps,
  // and their powers; every pair is tried against every modulus <= 8.
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<IntMatrix> pool{IntMatrix::identity(n)};
    for (std::size_t i = 0; i < n; ++i) {
      IntMatrix neg = IntMatrix::identity(n);
      neg(i, i) = -1;
      pool.push_back(neg);
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int k : {1, 2, 3}) {
          IntMatrix t = IntMatrix::identity(n);
          t(i, j) = k;
          pool.push_back(t);
        }
        IntMatrix sw = IntMatrix::identity(n);
        sw(i, i) = sw(j, j) = 0;
        sw(i, j) = sw(j, i) = 1;
        pool.push_back(sw);
      }
    }
    for (std::size_t a = 0; a < pool.size(); ++a) {
      for (std::size_t b = a; b < pool.size(); ++b) {
        const std::vector<IntMatrix> gens{pool[a], pool[b]};
        const IntMatrix rel = coinvariant_relations(n, std::span<const IntMatrix>(gens));
        const auto inv = cokernel_invariants(rel);
        for (long m = 2; m <= 8; ++m) CHECK(brute_quotient_order(rel, m) == predicted_quotient_order(inv, m));
      }
    }
  }
}

TEST_CASE("symplectic forms") {
  CHECK(is_symplectic(IntMatrix::identity(4), 2));
  IntMatrix t = IntMatrix::identity(4);
  t(1, 0) = 1;  // a1 -> a1 + b1
  CHECK(is_symplectic(t, 2));
  IntMatrix d = IntMatrix::identity(4);
  d(0, 0) = 2;
  CHECK_FALSE(is_symplectic(d, 2));
}

TEST_CASE("fixed subspaces and projectors") {
  const std::vector<IntMatrix> id{IntMatrix::identity(3)};
  CHECK(fixed_subspace(std::span<const IntMatrix>(id)).cols() == 3);

  const IntMatrix swap{{0, 1}, {1, 0}};
  const std::vector<IntMatrix> sw{swap};
  const RatMatrix f = fixed_subspace(std::span<const IntMatrix>(sw));
  REQUIRE(f.cols() == 1);
  CHECK(f(0, 0) == f(1, 0));

  const IntMatrix c3{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  const std::vector<IntMatrix> reg{c3};
  CHECK(fixed_subspace(std::span<const IntMatrix>(reg)).cols() == 1);

  const std::vector<IntMatrix> triv{IntMatrix::identity(2)};
  CHECK(averaging_projector(std::span<const IntMatrix>(triv)) == RatMatrix::identity(2));
  const std::vector<IntMatrix> z2{IntMatrix::identity(2), swap};
  const RatMatrix p = averaging_projector(std::span<const IntMatrix>(z2));
  const mpq_class half(1, 2);
  CHECK(p(0, 0) == half);
  CHECK(p(0, 1) == half);
  CHECK(p(1, 0) == half);
  CHECK(p(1, 1) == half);
  CHECK(p * p == p);
  const std::vector<IntMatrix> z3{IntMatrix::identity(3), c3, c3 * c3};
  const RatMatrix p3 = averaging_projector(std::span<const IntMatrix>(z3));
  CHECK(p3 * p3 == p3);
}

TEST_CASE("rank and solve") {
  const IntMatrix a{{1, 2}, {2, 4}, {0, 1}};
  CHECK(rank(a) == 2);
  const RatMatrix x = solve_left(to_rational(a), to_rational(a * IntMatrix{{3}, {-1}}));
  CHECK(to_integer(x) == IntMatrix{{3}, {-1}});
  CHECK(determinant(IntMatrix{{2, 1}, {1, 1}}) == 1);
}
