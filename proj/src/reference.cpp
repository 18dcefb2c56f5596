#include "finorb/reference.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "finorb/error.hpp"

namespace finorb::reference {

std::vector<Homomorphism> enumerate_homs(const Presentation& p, TargetPtr target,
                                         std::size_t budget) {
  const auto ord = target->order();
  if (!ord) fail(ErrorKind::unsupported, "cannot enumerate homs into infinite " + target->spec());
  const auto n = static_cast<std::size_t>(p.generator_count());
  mpz_class total;
  mpz_pow_ui(total.get_mpz_t(), ord->get_mpz_t(), n);
  if (total > budget) fail(ErrorKind::budget, "enumeration exceeds budget");
  const std::vector<Element> elems = target->elements(budget);
  const Element id = target->identity();

  std::vector<Homomorphism> out;
  std::vector<std::size_t> digit(n, 0);
  std::vector<Element> ims(n, elems.at(0));
  while (true) {
    for (std::size_t k = 0; k < n; ++k) ims[k] = elems[digit[k]];
    bool ok = true;
    for (const auto& r : p.relators())
      ok = ok && evaluate(r, std::span<const Element>(ims), *target) == id;
    if (ok) out.emplace_back(p, target, ims);
    std::size_t k = n;
    while (k > 0 && ++digit[k - 1] == elems.size()) digit[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

OrbitResult orbit(const Homomorphism& rho, const std::vector<Automorphism>& catalog,
                  std::size_t cap) {
  if (cap == 0) fail(ErrorKind::invalid_argument, "orbit cap must be >= 1");
  std::map<Homomorphism, std::size_t> seen{{rho, 0}};
  std::vector<Homomorphism> found{rho};
  std::vector<std::size_t> parent{OrbitResult::npos}, parent_gen{0};
  std::vector<OrbitEdge> edges;
  std::deque<std::size_t> queue{0};
  bool exceeded = false;
  while (!queue.empty() && !exceeded) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < catalog.size(); ++g) {
      Homomorphism next = apply_to_hom(catalog[g], found[i]);
      auto it = seen.find(next);
      std::size_t to;
      if (it != seen.end()) {
        to = it->second;
      } else {
        if (found.size() >= cap) {
          exceeded = true;
          break;
        }
        to = found.size();
        seen.emplace(next, to);
        found.push_back(std::move(next));
        parent.push_back(i);
        parent_gen.push_back(g);
        queue.push_back(to);
      }
      edges.push_back({i, g, to});
    }
  }

  // Map's iteration order is the canonical order.
  std::vector<std::size_t> rank_of(found.size());
  std::size_t r = 0;
  for (const auto& [h, idx] : seen) rank_of[idx] = r++;

  OrbitResult o{rho, {}, {}, {}, exceeded ? OrbitStatus::exceeded_cap : OrbitStatus::complete,
                cap, rank_of[0], {}, {}};
  o.elements.assign(found.size(), rho);
  o.parent.resize(found.size());
  o.parent_generator.resize(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    o.elements[rank_of[i]] = found[i];
    o.parent[rank_of[i]] = parent[i] == OrbitResult::npos ? OrbitResult::npos : rank_of[parent[i]];
    o.parent_generator[rank_of[i]] = parent_gen[i];
  }
  for (auto& e : edges) e = {rank_of[e.from], e.generator, rank_of[e.to]};
  std::sort(edges.begin(), edges.end(), [](const OrbitEdge& a, const OrbitEdge& b) {
    return std::tie(a.from, a.generator, a.to) < std::tie(b.from, b.generator, b.to);
  });
  o.edges = std::move(edges);
  for (const auto& phi : catalog) o.labels.push_back(phi.label());
  return o;
}

SubgroupClosure closure(std::span<const Element> gens, TargetPtr target, std::size_t cap) {
  if (cap == 0) fail(ErrorKind::invalid_argument, "closure cap must be >= 1");
  const TargetGroup& g = *target;
  std::map<Element, FreeWord> seen{{g.identity(), FreeWord{}}};
  std::deque<std::pair<Element, FreeWord>> queue{{g.identity(), FreeWord{}}};
  bool exceeded = false;
  while (!queue.empty() && !exceeded) {
    auto [e, w] = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < gens.size() && !exceeded; ++k) {
      for (int sign : {1, -1}) {
        Element n = g.multiply(e, sign > 0 ? gens[k] : g.inverse(gens[k]));
        if (seen.count(n)) continue;
        if (seen.size() >= cap) {
          exceeded = true;
          break;
        }
        FreeWord nw = w * FreeWord{static_cast<Letter>(sign * static_cast<int>(k + 1))};
        seen.emplace(n, nw);
        queue.emplace_back(std::move(n), std::move(nw));
      }
    }
  }
  SubgroupClosure c;
  c.target = std::move(target);
  c.generators.assign(gens.begin(), gens.end());
  c.cap = cap;
  c.status = exceeded ? ClosureStatus::exceeded_cap : ClosureStatus::closed;
  for (auto& [e, w] : seen) {
    c.elements.push_back(e);
    c.words.push_back(w);
  }
  return c;
}

std::vector<IntMatrix> q_action(const SubgroupHomology& h) {
  const CosetTable& t = h.table;
  std::vector<IntMatrix> out;
  for (std::size_t c = 0; c < t.index; ++c) {
    IntMatrix m(h.rank, h.rank);
    for (std::size_t j = 0; j < h.rank; ++j) {
      // Image of the j-th basis class: sum of section(:, j) weighted Schreier generators.
      for (std::size_t s = 0; s < h.lattice_rank; ++s) {
        const mpz_class& w = h.section(s, j);
        if (w == 0) continue;
        const IntMatrix col = h.class_of(conjugate(t.schreier_words[s], t.transversal[c]));
        for (std::size_t i = 0; i < h.rank; ++i) m(i, j) += w * col(i, 0);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace finorb::reference
