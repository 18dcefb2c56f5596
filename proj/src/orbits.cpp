#include "finorb/orbits.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "finorb/error.hpp"

namespace finorb {

std::size_t default_cap() {
  if (const char* env = std::getenv("FINORB_DEFAULT_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultOrbitCap;
}

std::vector<Homomorphism> enumerate_homs(const Presentation& p, TargetPtr target,
                                         std::size_t budget) {
  const auto ord = target->order();
  if (!ord) fail(ErrorKind::unsupported, "cannot enumerate homs into infinite " + target->spec());
  const auto n = static_cast<unsigned long>(p.generator_count());
  mpz_class total;
  mpz_pow_ui(total.get_mpz_t(), ord->get_mpz_t(), n);
  if (total > budget) {
    fail(ErrorKind::budget, "enumerating Hom(" + p.spec() + ", " + target->spec() + ") needs " +
                                total.get_str() + " candidates, budget is " + std::to_string(budget));
  }
  const std::vector<Element> elems = target->elements(budget);
  const std::size_t g = elems.size();
  const std::size_t count = total.get_ui();
  const Element id = target->identity();

  std::vector<std::optional<Homomorphism>> slots(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<Element> ims(n);
    std::size_t rest = t;
    for (std::size_t k = n; k-- > 0;) {
      ims[k] = elems[rest % g];
      rest /= g;
    }
    bool ok = true;
    for (const auto& r : p.relators()) {
      if (!(evaluate(r, std::span<const Element>(ims), *target) == id)) {
        ok = false;
        break;
      }
    }
    if (ok) slots[t].emplace(p, target, std::move(ims));
  }
  std::vector<Homomorphism> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

std::size_t OrbitResult::find(const Homomorphism& h) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), h);
  if (it == elements.end() || !(*it == h)) return npos;
  return static_cast<std::size_t>(it - elements.begin());
}

OrbitResult orbit(const Homomorphism& rho, const std::vector<Automorphism>& catalog,
                  std::size_t cap) {
  if (cap == 0) fail(ErrorKind::invalid_argument, "orbit cap must be >= 1");
  for (const auto& phi : catalog) {
    if (!(phi.presentation() == rho.presentation()))
      fail(ErrorKind::invalid_argument, "catalog entry '" + phi.label() + "' acts on " +
                                            phi.presentation().spec());
  }
  const std::size_t fan = catalog.size();
  std::vector<Homomorphism> found{rho};
  std::vector<std::size_t> parent{OrbitResult::npos}, parent_gen{0};
  std::unordered_map<std::string, std::size_t> seen{{rho.key(), 0}};
  std::vector<OrbitEdge> edges;
  bool exceeded = false;
  std::size_t begin = 0;

  while (begin < found.size() && !exceeded) {
    const std::size_t end = found.size();
    const std::size_t width = end - begin;
    std::vector<std::optional<Homomorphism>> next(width * fan);
    std::vector<std::string> keys(width * fan);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t t = 0; t < width * fan; ++t) {
      next[t].emplace(apply_to_hom(catalog[t % fan], found[begin + t / fan]));
      keys[t] = next[t]->key();
    }
    for (std::size_t t = 0; t < width * fan; ++t) {
      const std::size_t from = begin + t / fan;
      auto it = seen.find(keys[t]);
      std::size_t to;
      if (it != seen.end()) {
        to = it->second;
      } else {
        if (found.size() >= cap) {
          exceeded = true;
          break;
        }
        to = found.size();
        seen.emplace(keys[t], to);
        found.push_back(std::move(*next[t]));
        parent.push_back(from);
        parent_gen.push_back(t % fan);
      }
      edges.push_back({from, t % fan, to});
    }
    begin = end;
  }

  // Canonical renumbering.
  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return found[a] < found[b]; });
  std::vector<std::size_t> rank_of(found.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r;

  OrbitResult o{rho, {}, {}, {}, exceeded ? OrbitStatus::exceeded_cap : OrbitStatus::complete,
                cap, rank_of[0], {}, {}};
  o.elements.reserve(found.size());
  o.parent.resize(found.size());
  o.parent_generator.resize(found.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t old = order[r];
    o.elements.push_back(std::move(found[old]));
    o.parent[r] = parent[old] == OrbitResult::npos ? OrbitResult::npos : rank_of[parent[old]];
    o.parent_generator[r] = parent_gen[old];
  }
  for (auto& e : edges) {
    e.from = rank_of[e.from];
    e.to = rank_of[e.to];
  }
  std::sort(edges.begin(), edges.end(), [](const OrbitEdge& a, const OrbitEdge& b) {
    return std::tie(a.from, a.generator, a.to) < std::tie(b.from, b.generator, b.to);
  });
  o.edges = std::move(edges);
  for (const auto& phi : catalog) o.labels.push_back(phi.label());
  return o;
}

std::vector<Homomorphism> fixed_points(const std::vector<Homomorphism>& homs,
                                       const std::vector<Automorphism>& catalog) {
  std::vector<char> fixed(homs.size(), 1);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < homs.size(); ++i) {
    for (const auto& phi : catalog) {
      if (!(apply_to_hom(phi, homs[i]) == homs[i])) {
        fixed[i] = 0;
        break;
      }
    }
  }
  std::vector<Homomorphism> out;
  for (std::size_t i = 0; i < homs.size(); ++i)
    if (fixed[i]) out.push_back(homs[i]);
  return out;
}

std::vector<OrbitResult> orbit_partition(const std::vector<Homomorphism>& homs,
                                         const std::vector<Automorphism>& catalog) {
  std::vector<const Homomorphism*> sorted;
  for (const auto& h : homs) sorted.push_back(&h);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return *a < *b; });
  std::unordered_map<std::string, bool> assigned;
  for (auto* h : sorted) assigned.emplace(h->key(), false);

  std::vector<OrbitResult> out;
  for (auto* h : sorted) {
    if (assigned.at(h->key())) continue;
    OrbitResult o = orbit(*h, catalog, homs.size() + 1);
    for (const auto& e : o.elements) {
      auto it = assigned.find(e.key());
      if (it == assigned.end())
        fail(ErrorKind::invalid_argument, "orbit leaves the supplied hom set");
      it->second = true;
    }
    out.push_back(std::move(o));
  }
  return out;
}

Homomorphism act(const Homomorphism& rho, const CatalogWord& word,
                 const std::vector<Automorphism>& catalog) {
  Homomorphism h = rho;
  for (int l : word) {
    const auto& phi = catalog.at(static_cast<std::size_t>(std::abs(l) - 1));
    h = l > 0 ? apply_to_hom(phi, h) : apply_inverse_to_hom(phi, h);
  }
  return h;
}

Automorphism materialize(const CatalogWord& word, const std::vector<Automorphism>& catalog) {
  if (catalog.empty()) fail(ErrorKind::invalid_argument, "empty catalog");
  Automorphism a = Automorphism::identity(catalog.front().presentation());
  for (int l : word) {
    const auto& phi = catalog.at(static_cast<std::size_t>(std::abs(l) - 1));
    a = compose(a, l > 0 ? phi : phi.inverse());
  }
  return a;
}

IntMatrix word_h1(const CatalogWord& word, const std::vector<IntMatrix>& catalog_h1) {
  if (catalog_h1.empty()) fail(ErrorKind::invalid_argument, "empty catalog");
  const std::size_t n = catalog_h1.front().rows();
  IntMatrix m = IntMatrix::identity(n);
  for (int l : word) {
    const IntMatrix& g = catalog_h1.at(static_cast<std::size_t>(std::abs(l) - 1));
    m = m * (l > 0 ? g : to_integer(solve_left(to_rational(g), RatMatrix::identity(n))));
  }
  return m;
}

CatalogWord inverse_word(const CatalogWord& w) {
  CatalogWord r(w.rbegin(), w.rend());
  for (auto& l : r) l = -l;
  return r;
}

std::string word_label(const CatalogWord& w, const std::vector<Automorphism>& catalog) {
  if (w.empty()) return "id";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '*';
    s += catalog.at(static_cast<std::size_t>(std::abs(w[i]) - 1)).label();
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

CatalogWord transversal_word(const OrbitResult& o, std::size_t i) {
  CatalogWord w;
  while (o.parent.at(i) != OrbitResult::npos) {
    w.push_back(static_cast<int>(o.parent_generator[i] + 1));
    i = o.parent[i];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

namespace {

CatalogWord free_reduce(const CatalogWord& w) {
  CatalogWord r;
  for (int l : w) {
    if (!r.empty() && r.back() == -l) {
      r.pop_back();
    } else {
      r.push_back(l);
    }
  }
  return r;
}

}  // namespace

StabilizerData stabilizer_generators(const OrbitResult& o,
                                     const std::vector<Automorphism>& catalog) {
  if (!o.complete()) fail(ErrorKind::unsupported, "stabilizer of an orbit that exceeded its cap");
  std::vector<CatalogWord> t(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) t[i] = transversal_word(o, i);
  StabilizerData s;
  s.orbit_size = o.size();
  s.catalog_size = catalog.size();
  std::set<CatalogWord> seen;
  for (const auto& e : o.edges) {
    if (o.parent[e.to] == e.from && o.parent_generator[e.to] == e.generator) continue;
    CatalogWord w = t[e.from];
    w.push_back(static_cast<int>(e.generator + 1));
    const CatalogWord back = inverse_word(t[e.to]);
    w.insert(w.end(), back.begin(), back.end());
    w = free_reduce(w);
    if (w.empty() || !seen.insert(w).second) continue;
    s.schreier_generators.push_back(std::move(w));
  }
  return s;
}

std::string export_orbit_dot(const OrbitResult& o) {
  std::ostringstream out;
  out << "digraph orbit {\n";
  out << "  // " << o.size() << " nodes, "
      << (o.complete() ? "complete" : "cap " + std::to_string(o.cap)) << "\n";
  for (std::size_t i = 0; i < o.size(); ++i) {
    out << "  n" << i << " [label=\"" << i << "\"" << (i == o.base_index ? ", shape=doublecircle" : "")
        << "];\n";
  }
  for (const auto& e : o.edges) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << o.labels.at(e.generator)
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

ConjugacyReport conjugacy_quotient(const OrbitResult& o, std::size_t budget) {
  const TargetPtr& t = o.base.target();
  const auto elems = t->elements(budget);
  if (elems.size() * o.size() > budget)
    fail(ErrorKind::budget, "conjugacy quotient exceeds budget");
  std::vector<std::string> canon(o.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < o.size(); ++i) {
    std::string best;
    for (const auto& g : elems) {
      const Element gi = t->inverse(g);
      std::string k;
      for (const auto& x : o.elements[i].images()) {
        k += t->multiply(t->multiply(g, x), gi).key();
        k += '|';
      }
      if (best.empty() || k < best) best = std::move(k);
    }
    canon[i] = std::move(best);
  }
  std::set<std::string> classes(canon.begin(), canon.end());
  return {o.size(), classes.size()};
}

}  // namespace finorb
