#include "finorb/central.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "finorb/error.hpp"

namespace finorb {

namespace {

mpz_class mod(const mpz_class& x, const mpz_class& m) {
  if (m == 0) return x;
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

FiniteQuotient trivial_pullback(const Presentation& p, TargetPtr& f) {
  f = TargetGroup::table({0}, "table:1");
  return FiniteQuotient(Homomorphism(
      p, f, std::vector<Element>(static_cast<std::size_t>(p.generator_count()), f->identity())));
}

CentralOutcome abelian_image(const Homomorphism& rho) {
  const TargetPtr& t = rho.target();
  const auto dim = static_cast<std::size_t>(t->degree());
  std::vector<mpz_class> moduli =
      t->realization() == Realization::abelian_finite ? t->moduli() : std::vector<mpz_class>(dim, 0);
  TargetPtr f;
  FiniteQuotient pull = trivial_pullback(rho.presentation(), f);
  CentralData d{CentralKind::abelian_image, {}, {}, moduli, std::nullopt, f, std::move(pull), {}};
  for (std::size_t k = 0; k < rho.images().size(); ++k) {
    d.z_generators.push_back(rho.images()[k]);
    d.z_words.push_back(FreeWord{static_cast<Letter>(k + 1)});
  }
  d.coordinates = [](const Element& e) { return e.v; };
  return {std::move(d), {}};
}

/// Coordinates on a finite abelian group given by its elements: exponent
/// vectors over a greedy generating set, relations from the BFS, and SNF.
struct FiniteAbelianChart {
  std::vector<Element> gens;
  std::vector<mpz_class> moduli;
  std::unordered_map<std::string, std::vector<mpz_class>> coords;
};

FiniteAbelianChart chart(const std::vector<Element>& z, const TargetPtr& t) {
  FiniteAbelianChart c;
  const std::size_t order = z.size();
  for (const auto& e : z) {
    if (e == t->identity()) continue;
    const SubgroupClosure cur = closure(std::span<const Element>(c.gens), t, order + 1);
    if (cur.find(e) != SubgroupClosure::npos) continue;
    c.gens.push_back(e);
    if (closure(std::span<const Element>(c.gens), t, order + 1).order() == order) break;
  }
  const std::size_t s = c.gens.size();
  std::vector<Element> elems{t->identity()};
  std::vector<std::vector<mpz_class>> exps{std::vector<mpz_class>(s)};
  std::unordered_map<std::string, std::size_t> index{{elems[0].key(), 0}};
  std::vector<std::vector<mpz_class>> rels;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t g = 0; g < s; ++g) {
      Element n = t->multiply(elems[i], c.gens[g]);
      std::vector<mpz_class> v = exps[i];
      v[g] += 1;
      auto it = index.find(n.key());
      if (it == index.end()) {
        index.emplace(n.key(), elems.size());
        elems.push_back(std::move(n));
        exps.push_back(std::move(v));
      } else {
        for (std::size_t k = 0; k < s; ++k) v[k] -= exps[it->second][k];
        if (std::any_of(v.begin(), v.end(), [](const mpz_class& x) { return x != 0; }))
          rels.push_back(std::move(v));
      }
    }
  }
  if (elems.size() != order) fail(ErrorKind::consistency, "center chart does not cover the center");
  IntMatrix r(s, rels.size());
  for (std::size_t j = 0; j < rels.size(); ++j)
    for (std::size_t i = 0; i < s; ++i) r(i, j) = rels[j][i];
  const SNFResult snf_r = snf(r);
  const auto diag = snf_diagonal(snf_r.D);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s; ++i) {
    const mpz_class d = i < diag.size() ? diag[i] : mpz_class(0);
    if (d == 0) fail(ErrorKind::consistency, "finite center has a free coordinate");
    if (d != 1) {
      keep.push_back(i);
      c.moduli.push_back(d);
    }
  }
  for (std::size_t e = 0; e < elems.size(); ++e) {
    std::vector<mpz_class> coord;
    for (std::size_t kk = 0; kk < keep.size(); ++kk) {
      mpz_class x = 0;
      for (std::size_t k = 0; k < s; ++k) x += snf_r.U(keep[kk], k) * exps[e][k];
      coord.push_back(mod(x, c.moduli[kk]));
    }
    c.coords.emplace(elems[e].key(), std::move(coord));
  }
  return c;
}

}  // namespace

CentralOutcome inner_orbit_central_check(const Homomorphism& rho, std::size_t cap) {
  const TargetPtr& t = rho.target();
  if (t->is_abelian_realization()) return abelian_image(rho);

  const SubgroupClosure c = image_closure(rho, cap);
  if (!c.closed()) {
    // Symbolic route: quotient by the commutators of the generator images.
    std::vector<Element> z;
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
      for (std::size_t j = i + 1; j < c.generators.size(); ++j) {
        const Element& a = c.generators[i];
        const Element& b = c.generators[j];
        Element comm = t->multiply(t->multiply(a, b), t->multiply(t->inverse(a), t->inverse(b)));
        bool central = true;
        for (const auto& g : c.generators) central = central && t->commute(comm, g);
        if (central && !(comm == t->identity())) z.push_back(std::move(comm));
      }
    }
    if (z.empty()) {
      return {std::nullopt, "image closure exceeded cap " + std::to_string(cap) +
                                " and no central commutators were found"};
    }
    const QuotientOutcome q = quotient_map_to_finite(c, z, cap);
    if (!q.finite) return {std::nullopt, "image modulo its central commutators is not finite (" + q.reason + ")"};
    return {std::nullopt, "image closure exceeded cap " + std::to_string(cap) +
                              " although the central quotient is finite; Z is not finite within cap"};
  }

  const std::vector<Element> z = center(c);
  QuotientOutcome q = quotient_map_to_finite(c, z, cap);
  if (!q.finite) return {std::nullopt, "quotient by the center failed: " + q.reason};
  const CentralQuotient& cq = *q.quotient;

  std::vector<Element> pull_images;
  for (const auto& x : rho.images()) pull_images.push_back(cq.project(x));
  FiniteQuotient pull(Homomorphism(rho.presentation(), cq.group, std::move(pull_images)));

  auto ch = std::make_shared<FiniteAbelianChart>(chart(z, t));
  CentralData d{CentralKind::finite_center, ch->gens, {}, ch->moduli,
                mpz_class(static_cast<unsigned long>(z.size())), cq.group, std::move(pull), {}};
  for (const auto& g : d.z_generators) d.z_words.push_back(c.words[c.find(g)]);
  d.coordinates = [ch](const Element& e) {
    auto it = ch->coords.find(e.key());
    if (it == ch->coords.end()) fail(ErrorKind::not_in_subgroup, "element is not in Z");
    return it->second;
  };
  return {std::move(d), {}};
}

}  // namespace finorb
