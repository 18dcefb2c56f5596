#include "finorb/subgroups.hpp"

#include <algorithm>
#include <set>

#include "finorb/error.hpp"
#include "finorb/orbits.hpp"
#include "json.hpp"

namespace finorb {

namespace {

std::size_t require_finite(const TargetPtr& t) {
  const auto ord = t->order();
  if (!ord) fail(ErrorKind::unsupported, "quotient target " + t->spec() + " is not finite");
  return ord->get_ui();
}

IntMatrix column_vector(const std::vector<std::int64_t>& v) {
  IntMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = static_cast<long>(v[i]);
  return m;
}

}  // namespace

FiniteQuotient::FiniteQuotient(Homomorphism surjection)
    : surjection_(std::move(surjection)), order_(require_finite(surjection_.target())) {
  const SubgroupClosure c = image_closure(surjection_, order_ + 1);
  if (!c.closed() || c.order() != order_) {
    fail(ErrorKind::not_surjective, "images generate a subgroup of order " +
                                        std::to_string(c.order()) + " in " +
                                        surjection_.target()->spec() + " of order " +
                                        std::to_string(order_));
  }
}

FiniteQuotient FiniteQuotient::parse(const Presentation& p, const std::string& spec) {
  const auto at = spec.find(":[");
  if (at == std::string::npos)
    fail(ErrorKind::malformed, "quotient spec must look like <target>:[images], got '" + spec + "'");
  auto target = TargetGroup::parse(spec.substr(0, at));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(spec.substr(at + 1));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::malformed, std::string("bad image list in quotient spec: ") + e.what());
  }
  if (!j.is_array()) fail(ErrorKind::malformed, "quotient images must be a JSON array");
  std::vector<Element> ims;
  for (const auto& x : j) ims.push_back(target->element_from_json(x));
  return FiniteQuotient(Homomorphism(p, target, std::move(ims)));
}

// ---------------------------------------------------------------------------
// Coset tables and rewriting

std::size_t CosetTable::coset_of(const FreeWord& w) const {
  std::size_t c = 0;
  for (Letter l : w) {
    const auto k = static_cast<std::size_t>(std::abs(l) - 1);
    c = l > 0 ? action.at(k)[c] : inverse_action.at(k)[c];
  }
  return c;
}

std::size_t CosetTable::multiply(const TargetGroup& q, std::size_t a, std::size_t b) const {
  return coset_index.at(q.multiply(coset_element[a], coset_element[b]).key());
}

CosetTable coset_table(const FiniteQuotient& q) {
  const Homomorphism& rho = q.surjection();
  const TargetGroup& g = *q.target();
  const auto n = static_cast<std::size_t>(q.presentation().generator_count());

  CosetTable t;
  t.generators = n;
  t.coset_element.push_back(g.identity());
  t.transversal.push_back(FreeWord{});
  t.coset_index.emplace(t.coset_element[0].key(), 0);

  std::vector<Element> step, step_inv;
  for (const auto& x : rho.images()) {
    step.push_back(x);
    step_inv.push_back(g.inverse(x));
  }
  // Shortlex BFS: letters 1, -1, 2, -2, ...
  for (std::size_t c = 0; c < t.coset_element.size(); ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      for (int sign : {1, -1}) {
        Element e = g.multiply(t.coset_element[c], sign > 0 ? step[k] : step_inv[k]);
        auto key = e.key();
        if (t.coset_index.count(key)) continue;
        t.coset_index.emplace(std::move(key), static_cast<std::uint32_t>(t.coset_element.size()));
        t.coset_element.push_back(std::move(e));
        t.transversal.push_back(t.transversal[c] * FreeWord{sign * static_cast<Letter>(k + 1)});
      }
    }
  }
  t.index = t.coset_element.size();
  if (t.index != q.order()) fail(ErrorKind::consistency, "coset count differs from |Q|");

  t.action.assign(n, std::vector<std::uint32_t>(t.index));
  t.inverse_action.assign(n, std::vector<std::uint32_t>(t.index));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < t.index; ++c) {
      t.action[k][c] = t.coset_index.at(g.multiply(t.coset_element[c], step[k]).key());
      t.inverse_action[k][c] = t.coset_index.at(g.multiply(t.coset_element[c], step_inv[k]).key());
    }
  }
  for (const auto& r : q.presentation().relators()) {
    for (std::size_t c = 0; c < t.index; ++c) {
      std::size_t d = c;
      for (Letter l : r) {
        const auto k = static_cast<std::size_t>(std::abs(l) - 1);
        d = l > 0 ? t.action[k][d] : t.inverse_action[k][d];
      }
      if (d != c) fail(ErrorKind::consistency, "relator moves a coset");
    }
  }

  t.schreier_index.assign(t.index, std::vector<int>(n, -1));
  for (std::size_t c = 0; c < t.index; ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t d = t.action[k][c];
      FreeWord w = t.transversal[c] * FreeWord{static_cast<Letter>(k + 1)} * t.transversal[d].inverse();
      if (w.empty()) continue;
      t.schreier_index[c][k] = static_cast<int>(t.schreier_words.size());
      t.schreier_words.push_back(std::move(w));
      t.schreier_source.emplace_back(static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(k));
    }
  }
  return t;
}

FreeWord rewrite(const CosetTable& t, const FreeWord& w) {
  std::vector<Letter> out;
  std::size_t c = 0;
  for (Letter l : w) {
    const auto k = static_cast<std::size_t>(std::abs(l) - 1);
    if (k >= t.generators) fail(ErrorKind::out_of_range, "letter out of range in rewrite");
    if (l > 0) {
      const int s = t.schreier_index[c][k];
      if (s >= 0) out.push_back(s + 1);
      c = t.action[k][c];
    } else {
      const std::size_t prev = t.inverse_action[k][c];
      const int s = t.schreier_index[prev][k];
      if (s >= 0) out.push_back(-(s + 1));
      c = prev;
    }
  }
  if (c != 0) fail(ErrorKind::not_in_subgroup, "word " + w.to_string() + " is not in the subgroup");
  return FreeWord(std::move(out));
}

FreeWord expand(const CosetTable& t, const FreeWord& rewritten) {
  FreeWord acc;
  for (Letter l : rewritten) {
    const FreeWord& s = t.schreier_words.at(static_cast<std::size_t>(std::abs(l) - 1));
    acc = acc * (l > 0 ? s : s.inverse());
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Homology of N

IntMatrix SubgroupHomology::class_of(const FreeWord& w) const {
  const auto v = abelianize(rewrite(table, w), static_cast<int>(lattice_rank));
  return projection * column_vector(v);
}

SubgroupHomology subgroup_homology(const FiniteQuotient& q) {
  SubgroupHomology h;
  h.table = coset_table(q);
  const CosetTable& t = h.table;
  const Presentation& p = q.presentation();
  const std::size_t L = t.schreier_words.size();
  const int Li = static_cast<int>(L);
  h.lattice_rank = L;

  if (p.is_surface()) {
    const FreeWord& r = p.relators().front();
    h.relations = IntMatrix(L, t.index);
    for (std::size_t c = 0; c < t.index; ++c) {
      const auto v = abelianize(rewrite(t, conjugate(r, t.transversal[c])), Li);
      for (std::size_t i = 0; i < L; ++i) h.relations(i, c) = static_cast<long>(v[i]);
    }
    const SNFWithInverses s = snf_with_inverses(h.relations);
    std::size_t nonzero = 0;
    for (const auto& d : snf_diagonal(s.D)) {
      if (d == 0) break;
      if (d != 1) fail(ErrorKind::consistency, "surface subgroup homology has torsion");
      ++nonzero;
    }
    h.rank = L - nonzero;
    h.projection = s.U.rows_range(nonzero, h.rank);
    h.section = s.U_inv.columns(nonzero, h.rank);
  } else {
    h.rank = L;
    h.projection = IntMatrix::identity(L);
    h.section = IntMatrix::identity(L);
  }

  const std::size_t expected =
      p.is_surface() ? t.index * static_cast<std::size_t>(2 * p.parameter() - 2) + 2
                     : t.index * static_cast<std::size_t>(p.parameter() - 1) + 1;
  if (h.rank != expected) {
    fail(ErrorKind::consistency, "H_1(N) has rank " + std::to_string(h.rank) + ", expected " +
                                     std::to_string(expected));
  }

  h.q_action.assign(t.index, IntMatrix());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < t.index; ++c) {
    IntMatrix a(L, L);
    for (std::size_t j = 0; j < L; ++j) {
      const auto v = abelianize(rewrite(t, conjugate(t.schreier_words[j], t.transversal[c])), Li);
      for (std::size_t i = 0; i < L; ++i) a(i, j) = static_cast<long>(v[i]);
    }
    h.q_action[c] = h.projection * a * h.section;
  }
  return h;
}

IntMatrix induced_on_subgroup(const SubgroupHomology& h, const Automorphism& phi) {
  const std::size_t L = h.lattice_rank;
  IntMatrix a(L, L);
  for (std::size_t j = 0; j < L; ++j) {
    const auto v = abelianize(rewrite(h.table, phi.apply(h.table.schreier_words[j])),
                              static_cast<int>(L));
    for (std::size_t i = 0; i < L; ++i) a(i, j) = static_cast<long>(v[i]);
  }
  return h.projection * a * h.section;
}

// ---------------------------------------------------------------------------
// Characters

QCharacter cw_character(const SubgroupHomology& h) {
  QCharacter chi;
  for (const auto& m : h.q_action) chi.values.push_back(m.trace());
  return chi;
}

QCharacter predicted_character(const Presentation& p, std::size_t order) {
  QCharacter chi;
  const long regular = p.is_surface() ? 2L * p.parameter() - 2 : p.parameter() - 1L;
  const long trivial = p.is_surface() ? 2 : 1;
  for (std::size_t c = 0; c < order; ++c)
    chi.values.emplace_back(c == 0 ? regular * static_cast<long>(order) + trivial : trivial);
  return chi;
}

CwReport cw_verify(const FiniteQuotient& q) { return cw_verify(q, subgroup_homology(q)); }

CwReport cw_verify(const FiniteQuotient& q, const SubgroupHomology& h) {
  CwReport r;
  r.rank = h.rank;
  r.order = h.table.index;
  r.character = cw_character(h);
  r.predicted = predicted_character(q.presentation(), r.order);
  mpz_class sum = 0;
  for (const auto& v : r.character.values) sum += v;
  r.trivial_multiplicity = mpq_class(sum, mpz_class(static_cast<unsigned long>(r.order)));
  r.trivial_multiplicity.canonicalize();
  const TargetGroup& g = *q.target();
  r.class_function = true;
  for (std::size_t a = 0; a < r.order && r.class_function; ++a) {
    const Element ai = g.inverse(h.table.coset_element[a]);
    for (std::size_t b = 0; b < r.order; ++b) {
      const Element conj = g.multiply(g.multiply(h.table.coset_element[a], h.table.coset_element[b]), ai);
      if (r.character.values[h.table.coset_index.at(conj.key())] != r.character.values[b]) {
        r.class_function = false;
        break;
      }
    }
  }
  r.pass = r.class_function && r.character == r.predicted;
  return r;
}

IntMatrix transfer_map(const SubgroupHomology& h) {
  const CosetTable& t = h.table;
  IntMatrix sums(h.lattice_rank, t.generators);
  for (std::size_t c = 0; c < t.index; ++c) {
    for (std::size_t k = 0; k < t.generators; ++k) {
      const int s = t.schreier_index[c][k];
      if (s >= 0) sums(static_cast<std::size_t>(s), k) += 1;
    }
  }
  return h.projection * sums;
}

// ---------------------------------------------------------------------------
// Characteristic core

namespace {

using Action = std::vector<std::vector<int>>;  // per generator, point images

bool transitive(const Action& a, int d) {
  std::vector<char> seen(static_cast<std::size_t>(d), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (const auto& g : a) {
      const int y = g[static_cast<std::size_t>(x)];
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        stack.push_back(y);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

/// Least relabeling over all base points, numbering points in BFS order
/// along generators (and their inverses) from the base.
Action canonical(const Action& a, int d) {
  Action best;
  const std::size_t ds = static_cast<std::size_t>(d);
  std::vector<std::vector<int>> inv(a.size(), std::vector<int>(ds));
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t x = 0; x < ds; ++x) inv[k][static_cast<std::size_t>(a[k][x])] = static_cast<int>(x);
  for (int base = 0; base < d; ++base) {
    std::vector<int> label(ds, -1), order{base};
    label[static_cast<std::size_t>(base)] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t k = 0; k < a.size(); ++k) {
        for (const std::vector<int>* perm : {&a[k], static_cast<const std::vector<int>*>(&inv[k])}) {
          const int y = (*perm)[static_cast<std::size_t>(order[i])];
          if (label[static_cast<std::size_t>(y)] < 0) {
            label[static_cast<std::size_t>(y)] = static_cast<int>(order.size());
            order.push_back(y);
          }
        }
      }
    }
    Action r(a.size(), std::vector<int>(ds));
    for (std::size_t k = 0; k < a.size(); ++k)
      for (std::size_t x = 0; x < ds; ++x)
        r[k][static_cast<std::size_t>(label[x])] = label[static_cast<std::size_t>(a[k][x])];
    if (best.empty() || r < best) best = std::move(r);
  }
  return best;
}

}  // namespace

FiniteQuotient characteristic_core(const Presentation& p, int m, std::size_t budget) {
  if (m < 1) fail(ErrorKind::invalid_argument, "index bound must be >= 1");
  const auto n = static_cast<std::size_t>(p.generator_count());
  std::set<std::pair<int, Action>> actions;
  for (int d = 2; d <= m; ++d) {
    for (const auto& h : enumerate_homs(p, TargetGroup::symmetric(d), budget)) {
      Action a;
      for (const auto& e : h.images()) {
        std::vector<int> perm;
        for (const auto& x : e.v) perm.push_back(static_cast<int>(x.get_si()));
        a.push_back(std::move(perm));
      }
      if (transitive(a, d)) actions.emplace(d, canonical(a, d));
    }
  }
  if (actions.empty()) {
    auto trivial = TargetGroup::table({0}, "table:1");
    return FiniteQuotient(Homomorphism(p, trivial, std::vector<Element>(n, trivial->identity())));
  }
  int degree = 0;
  for (const auto& [d, a] : actions) degree += d;
  auto sym = TargetGroup::symmetric(degree);
  std::vector<Element> diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    int offset = 0;
    for (const auto& [d, a] : actions) {
      for (int x = 0; x < d; ++x) diag[k].v.emplace_back(offset + a[k][static_cast<std::size_t>(x)]);
      offset += d;
    }
  }
  // Elements are degree-length permutations; keep the closure near 256 MB.
  const std::size_t per_element = 80 * static_cast<std::size_t>(degree);
  const std::size_t cap = std::min(budget, std::max<std::size_t>(1000, (std::size_t{1} << 28) / per_element));
  const SubgroupClosure c = closure(std::span<const Element>(diag), sym, cap);
  if (!c.closed()) fail(ErrorKind::budget, "characteristic core quotient exceeds budget");
  const CentralQuotient tab = tabulate(c);
  std::vector<Element> ims;
  for (const auto& e : diag) ims.push_back(tab.project(e));
  return FiniteQuotient(Homomorphism(p, tab.group, std::move(ims)));
}

bool preserves_kernel(const FiniteQuotient& q, const CosetTable& t, const Automorphism& phi) {
  const Element id = q.target()->identity();
  for (const auto& w : t.schreier_words)
    if (!(q.surjection()(phi.apply(w)) == id)) return false;
  return true;
}

bool preserves_kernel(const FiniteQuotient& q, const CosetTable& t, const std::vector<int>& word,
                      const std::vector<Automorphism>& catalog) {
  const Homomorphism h = act(q.surjection(), word, catalog);
  const Element id = q.target()->identity();
  for (const auto& w : t.schreier_words)
    if (!(h(w) == id)) return false;
  return true;
}

}  // namespace finorb
