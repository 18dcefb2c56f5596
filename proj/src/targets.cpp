#include "finorb/targets.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <span>
#include <fstream>
#include <numeric>
#include <sstream>

#include "finorb/error.hpp"

namespace finorb {

using nlohmann::json;

std::string Element::key() const {
  std::string k;
  for (const auto& x : v) {
    k += x.get_str(36);
    k += ',';
  }
  return k;
}

bool operator<(const Element& a, const Element& b) {
  if (a.v.size() != b.v.size()) return a.v.size() < b.v.size();
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const int c = cmp(a.v[i], b.v[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

namespace {

mpz_class mod(const mpz_class& x, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

long parse_long(const std::string& s, const std::string& context) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::malformed, "bad integer '" + s + "' in " + context);
  }
  return v;
}

IntMatrix as_matrix(const Element& e, int m) {
  IntMatrix a(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = e.v[i * a.cols() + j];
  return a;
}

Element from_matrix(const IntMatrix& a) { return Element{a.entries()}; }

json mpz_json(const mpz_class& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

mpz_class json_mpz(const json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) return mpz_class(j.get<std::string>());
  fail(ErrorKind::malformed, "expected an integer, got " + j.dump());
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

std::shared_ptr<const TargetGroup> TargetGroup::symmetric(int degree) {
  if (degree < 1) fail(ErrorKind::invalid_argument, "symmetric degree must be >= 1");
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::permutations));
  g->size_ = degree;
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::cyclic(long modulus) {
  return abelian_finite({mpz_class(modulus)});
}

std::shared_ptr<const TargetGroup> TargetGroup::abelian_finite(std::vector<mpz_class> moduli) {
  if (moduli.empty()) fail(ErrorKind::invalid_argument, "abelian group needs a modulus");
  for (const auto& m : moduli)
    if (m < 1) fail(ErrorKind::invalid_argument, "moduli must be >= 1");
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::abelian_finite));
  g->size_ = static_cast<int>(moduli.size());
  g->moduli_ = std::move(moduli);
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::abelian_free(int rank) {
  if (rank < 1) fail(ErrorKind::invalid_argument, "free abelian rank must be >= 1");
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::abelian_free));
  g->size_ = rank;
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::heisenberg_mod(long modulus) {
  if (modulus < 2) fail(ErrorKind::invalid_argument, "Heisenberg modulus must be >= 2");
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::heisenberg_mod));
  g->modulus_ = modulus;
  g->size_ = 3;
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::heisenberg_z() {
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::heisenberg_z));
  g->size_ = 3;
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::matrix_z(int size,
                                                         std::vector<Element> designated) {
  if (size < 1) fail(ErrorKind::invalid_argument, "matrix size must be >= 1");
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::matrix_z));
  g->size_ = size;
  for (const auto& e : designated) g->validate(e);
  g->designated_ = std::move(designated);
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::table(std::vector<std::uint32_t> mult,
                                                      std::string label) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(mult.size()))));
  if (n == 0 || n * n != mult.size()) fail(ErrorKind::invalid_argument, "Cayley table not square");
  std::vector<std::uint32_t> inv(n, static_cast<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (mult[i] != i || mult[i * n] != i)
      fail(ErrorKind::not_a_group, "element 0 of a Cayley table must be the identity");
    for (std::size_t j = 0; j < n; ++j) {
      if (mult[i * n + j] >= n) fail(ErrorKind::not_a_group, "Cayley table entry out of range");
      if (mult[i * n + j] == 0) inv[i] = static_cast<std::uint32_t>(j);
    }
    if (inv[i] == n) fail(ErrorKind::not_a_group, "Cayley table element without inverse");
  }
  auto g = std::shared_ptr<TargetGroup>(new TargetGroup(Realization::table));
  g->table_n_ = n;
  g->mult_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(mult));
  g->inv_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(inv));
  g->label_ = std::move(label);
  return g;
}

std::shared_ptr<const TargetGroup> TargetGroup::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail(ErrorKind::malformed, "bad target spec '" + spec + "'");
  const std::string head = spec.substr(0, colon);
  const std::string tail = spec.substr(colon + 1);
  if (head == "sym") return symmetric(static_cast<int>(parse_long(tail, spec)));
  if (head == "cyclic") return cyclic(parse_long(tail, spec));
  if (head == "ab") return abelian_free(static_cast<int>(parse_long(tail, spec)));
  if (head == "abfin") {
    std::vector<mpz_class> moduli;
    std::stringstream ss(tail);
    std::string part;
    while (std::getline(ss, part, ',')) moduli.emplace_back(parse_long(part, spec));
    return abelian_finite(std::move(moduli));
  }
  if (head == "heis") {
    if (tail == "Z") return heisenberg_z();
    return heisenberg_mod(parse_long(tail, spec));
  }
  if (head == "matz") {
    if (tail.rfind("file:", 0) == 0) {
      const std::string path = tail.substr(5);
      std::ifstream in(path);
      if (!in) fail(ErrorKind::malformed, "cannot open matrix generator file '" + path + "'");
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        fail(ErrorKind::malformed, std::string("bad JSON in '") + path + "': " + e.what());
      }
      const json& mats = j.is_object() ? j.at("generators") : j;
      if (!mats.is_array() || mats.empty())
        fail(ErrorKind::malformed, "matrix generator file needs a non-empty array");
      const int m = static_cast<int>(mats.front().size());
      auto probe = matrix_z(m);
      std::vector<Element> gens;
      for (const auto& mj : mats) gens.push_back(probe->element_from_json(mj));
      auto g = std::const_pointer_cast<TargetGroup>(matrix_z(m, std::move(gens)));
      g->source_ = path;
      return g;
    }
    return matrix_z(static_cast<int>(parse_long(tail, spec)));
  }
  fail(ErrorKind::malformed, "unknown target kind '" + head + "'");
}

std::string TargetGroup::spec() const {
  switch (kind_) {
    case Realization::permutations:
      return "sym:" + std::to_string(size_);
    case Realization::abelian_free:
      return "ab:" + std::to_string(size_);
    case Realization::abelian_finite: {
      if (moduli_.size() == 1) return "cyclic:" + moduli_[0].get_str();
      std::string s = "abfin:";
      for (std::size_t i = 0; i < moduli_.size(); ++i) s += (i ? "," : "") + moduli_[i].get_str();
      return s;
    }
    case Realization::heisenberg_mod:
      return "heis:" + std::to_string(modulus_);
    case Realization::heisenberg_z:
      return "heis:Z";
    case Realization::matrix_z:
      return source_.empty() ? "matz:" + std::to_string(size_) : "matz:file:" + source_;
    case Realization::table:
      return label_;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Group law

Element TargetGroup::identity() const {
  switch (kind_) {
    case Realization::permutations: {
      Element e;
      e.v.reserve(static_cast<std::size_t>(size_));
      for (int i = 0; i < size_; ++i) e.v.emplace_back(i);
      return e;
    }
    case Realization::abelian_free:
    case Realization::abelian_finite:
      return Element{std::vector<mpz_class>(static_cast<std::size_t>(size_))};
    case Realization::heisenberg_mod:
    case Realization::heisenberg_z:
      return Element{std::vector<mpz_class>(3)};
    case Realization::matrix_z:
      return from_matrix(IntMatrix::identity(static_cast<std::size_t>(size_)));
    case Realization::table:
      return Element{{mpz_class(0)}};
  }
  return {};
}

Element TargetGroup::multiply(const Element& a, const Element& b) const {
  switch (kind_) {
    case Realization::permutations: {
      Element r;
      r.v.resize(a.v.size());
      for (std::size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[b.v[i].get_ui()];
      return r;
    }
    case Realization::abelian_free: {
      Element r{a.v};
      for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
      return r;
    }
    case Realization::abelian_finite: {
      Element r{a.v};
      for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = mod(r.v[i] + b.v[i], moduli_[i]);
      return r;
    }
    case Realization::heisenberg_mod: {
      const mpz_class k(modulus_);
      return Element{{mod(a.v[0] + b.v[0], k), mod(a.v[1] + b.v[1], k),
                      mod(a.v[2] + b.v[2] + a.v[0] * b.v[1], k)}};
    }
    case Realization::heisenberg_z:
      return Element{{a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2] + a.v[0] * b.v[1]}};
    case Realization::matrix_z:
      return from_matrix(as_matrix(a, size_) * as_matrix(b, size_));
    case Realization::table:
      return Element{{mpz_class((*mult_)[a.v[0].get_ui() * table_n_ + b.v[0].get_ui()])}};
  }
  return {};
}

Element TargetGroup::inverse(const Element& a) const {
  switch (kind_) {
    case Realization::permutations: {
      Element r;
      r.v.resize(a.v.size());
      for (std::size_t i = 0; i < a.v.size(); ++i) r.v[a.v[i].get_ui()] = static_cast<unsigned long>(i);
      return r;
    }
    case Realization::abelian_free: {
      Element r{a.v};
      for (auto& x : r.v) x = -x;
      return r;
    }
    case Realization::abelian_finite: {
      Element r{a.v};
      for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = mod(-r.v[i], moduli_[i]);
      return r;
    }
    case Realization::heisenberg_mod: {
      const mpz_class k(modulus_);
      return Element{{mod(-a.v[0], k), mod(-a.v[1], k), mod(a.v[0] * a.v[1] - a.v[2], k)}};
    }
    case Realization::heisenberg_z:
      return Element{{-a.v[0], -a.v[1], a.v[0] * a.v[1] - a.v[2]}};
    case Realization::matrix_z: {
      const IntMatrix m = as_matrix(a, size_);
      const auto n = static_cast<std::size_t>(size_);
      return from_matrix(to_integer(solve_left(to_rational(m), RatMatrix::identity(n))));
    }
    case Realization::table:
      return Element{{mpz_class((*inv_)[a.v[0].get_ui()])}};
  }
  return {};
}

Element TargetGroup::power(const Element& a, long k) const {
  Element base = k < 0 ? inverse(a) : a;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  Element acc = identity();
  while (e) {
    if (e & 1u) acc = multiply(acc, base);
    base = multiply(base, base);
    e >>= 1u;
  }
  return acc;
}

std::optional<mpz_class> TargetGroup::order() const {
  switch (kind_) {
    case Realization::permutations: {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(size_));
      return f;
    }
    case Realization::abelian_finite: {
      mpz_class o = 1;
      for (const auto& m : moduli_) o *= m;
      return o;
    }
    case Realization::heisenberg_mod: {
      mpz_class k(modulus_);
      return k * k * k;
    }
    case Realization::table:
      return mpz_class(static_cast<unsigned long>(table_n_));
    case Realization::abelian_free:
    case Realization::heisenberg_z:
    case Realization::matrix_z:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Element> TargetGroup::elements(std::size_t budget) const {
  const auto ord = order();
  if (!ord) fail(ErrorKind::unsupported, "cannot enumerate the infinite group " + spec());
  if (*ord > budget) {
    fail(ErrorKind::budget, spec() + " has " + ord->get_str() + " elements, budget is " +
                                std::to_string(budget));
  }
  std::vector<Element> out;
  out.reserve(ord->get_ui());
  switch (kind_) {
    case Realization::permutations: {
      std::vector<int> p(static_cast<std::size_t>(size_));
      std::iota(p.begin(), p.end(), 0);
      do {
        Element e;
        for (int x : p) e.v.emplace_back(x);
        out.push_back(std::move(e));
      } while (std::next_permutation(p.begin(), p.end()));
      break;
    }
    case Realization::abelian_finite:
    case Realization::heisenberg_mod: {
      std::vector<mpz_class> bounds =
          kind_ == Realization::abelian_finite
              ? moduli_
              : std::vector<mpz_class>(3, mpz_class(modulus_));
      std::vector<mpz_class> cur(bounds.size());
      while (true) {
        out.push_back(Element{cur});
        std::size_t i = bounds.size();
        while (i > 0) {
          --i;
          if (++cur[i] < bounds[i]) break;
          cur[i] = 0;
          if (i == 0) return out;
        }
        if (bounds.empty()) break;
      }
      break;
    }
    case Realization::table:
      for (std::size_t i = 0; i < table_n_; ++i) out.push_back(Element{{mpz_class(static_cast<unsigned long>(i))}});
      break;
    default:
      break;
  }
  return out;
}

void TargetGroup::validate(const Element& e) const {
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::malformed, "invalid element for " + spec() + ": " + why);
  };
  switch (kind_) {
    case Realization::permutations: {
      if (e.v.size() != static_cast<std::size_t>(size_)) bad("wrong degree");
      std::vector<bool> seen(e.v.size(), false);
      for (const auto& x : e.v) {
        if (x < 0 || x >= size_ || seen[x.get_ui()]) bad("not a permutation");
        seen[x.get_ui()] = true;
      }
      break;
    }
    case Realization::abelian_free:
      if (e.v.size() != static_cast<std::size_t>(size_)) bad("wrong rank");
      break;
    case Realization::abelian_finite:
      if (e.v.size() != moduli_.size()) bad("wrong rank");
      for (std::size_t i = 0; i < e.v.size(); ++i)
        if (e.v[i] < 0 || e.v[i] >= moduli_[i]) bad("entry not reduced");
      break;
    case Realization::heisenberg_mod:
      if (e.v.size() != 3) bad("need (a, b, c)");
      for (const auto& x : e.v)
        if (x < 0 || x >= modulus_) bad("entry not reduced");
      break;
    case Realization::heisenberg_z:
      if (e.v.size() != 3) bad("need (a, b, c)");
      break;
    case Realization::matrix_z:
      if (e.v.size() != static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_))
        bad("wrong matrix size");
      if (!is_unimodular(as_matrix(e, size_))) bad("determinant is not +-1");
      break;
    case Realization::table:
      if (e.v.size() != 1 || e.v[0] < 0 || e.v[0] >= static_cast<unsigned long>(table_n_))
        bad("index out of range");
      break;
  }
}

json TargetGroup::element_to_json(const Element& e) const {
  switch (kind_) {
    case Realization::table:
      return mpz_json(e.v[0]);
    case Realization::matrix_z: {
      json rows = json::array();
      const auto m = static_cast<std::size_t>(size_);
      for (std::size_t i = 0; i < m; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m; ++j) row.push_back(mpz_json(e.v[i * m + j]));
        rows.push_back(std::move(row));
      }
      return rows;
    }
    default: {
      json arr = json::array();
      for (const auto& x : e.v) arr.push_back(mpz_json(x));
      return arr;
    }
  }
}

Element TargetGroup::element_from_json(const json& j) const {
  Element e;
  if (kind_ == Realization::matrix_z) {
    if (!j.is_array()) fail(ErrorKind::malformed, "matrix element must be an array of rows");
    for (const auto& row : j) {
      if (!row.is_array()) fail(ErrorKind::malformed, "matrix row must be an array");
      for (const auto& x : row) e.v.push_back(json_mpz(x));
    }
  } else if (j.is_array()) {
    for (const auto& x : j) e.v.push_back(json_mpz(x));
  } else {
    e.v.push_back(json_mpz(j));
  }
  if (kind_ == Realization::abelian_finite) {
    if (e.v.size() == moduli_.size())
      for (std::size_t i = 0; i < e.v.size(); ++i) e.v[i] = mod(e.v[i], moduli_[i]);
  } else if (kind_ == Realization::heisenberg_mod && e.v.size() == 3) {
    for (auto& x : e.v) x = mod(x, mpz_class(modulus_));
  }
  validate(e);
  return e;
}

// ---------------------------------------------------------------------------
// Closure

std::size_t SubgroupClosure::find(const Element& e) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), e);
  if (it == elements.end() || !(*it == e)) return npos;
  return static_cast<std::size_t>(it - elements.begin());
}

SubgroupClosure closure(std::span<const Element> gens, TargetPtr target, std::size_t cap) {
  if (cap == 0) fail(ErrorKind::invalid_argument, "closure cap must be >= 1");
  const TargetGroup& g = *target;

  // Letters in order 1, -1, 2, -2, ...
  std::vector<Letter> letters;
  std::vector<Element> steps;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    g.validate(gens[k]);
    letters.push_back(static_cast<Letter>(k + 1));
    steps.push_back(gens[k]);
    letters.push_back(-static_cast<Letter>(k + 1));
    steps.push_back(g.inverse(gens[k]));
  }

  std::vector<Element> found{g.identity()};
  std::vector<FreeWord> words{FreeWord{}};
  std::unordered_map<std::string, std::size_t> seen{{found[0].key(), 0}};
  std::size_t frontier_begin = 0;
  bool exceeded = false;

  while (frontier_begin < found.size() && !exceeded) {
    const std::size_t frontier_end = found.size();
    const std::size_t width = frontier_end - frontier_begin;
    const std::size_t fan = steps.size();
    std::vector<Element> products(width * fan);
    std::vector<std::string> keys(width * fan);

#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < width * fan; ++t) {
      const std::size_t i = frontier_begin + t / fan;
      products[t] = g.multiply(found[i], steps[t % fan]);
      keys[t] = products[t].key();
    }

    for (std::size_t t = 0; t < width * fan; ++t) {
      if (seen.count(keys[t])) continue;
      if (found.size() >= cap) {
        exceeded = true;
        break;
      }
      seen.emplace(keys[t], found.size());
      words.push_back(words[frontier_begin + t / fan] * FreeWord{letters[t % fan]});
      found.push_back(std::move(products[t]));
    }
    frontier_begin = frontier_end;
  }

  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return found[a] < found[b]; });

  SubgroupClosure c;
  c.target = std::move(target);
  c.generators.assign(gens.begin(), gens.end());
  c.cap = cap;
  c.status = exceeded ? ClosureStatus::exceeded_cap : ClosureStatus::closed;
  c.elements.reserve(found.size());
  c.words.reserve(found.size());
  for (auto i : order) {
    c.elements.push_back(std::move(found[i]));
    c.words.push_back(std::move(words[i]));
  }
  return c;
}

std::vector<Element> center(const SubgroupClosure& c) {
  if (!c.closed()) fail(ErrorKind::unsupported, "center of a closure that exceeded its cap");
  std::vector<Element> z;
  for (const auto& e : c.elements) {
    bool central = true;
    for (const auto& gen : c.generators) {
      if (!c.target->commute(e, gen)) {
        central = false;
        break;
      }
    }
    if (central) z.push_back(e);
  }
  return z;
}

std::optional<std::size_t> element_order(const Element& e, const TargetGroup& g, std::size_t cap) {
  const Element id = g.identity();
  Element acc = e;
  for (std::size_t k = 1; k <= cap; ++k) {
    if (acc == id) return k;
    acc = g.multiply(acc, e);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Central quotients

namespace {

/// Canonical representatives of Z^r modulo an integer lattice, via an
/// echelon basis with positive pivots.
class LatticeReducer {
 public:
  LatticeReducer(std::vector<std::vector<mpz_class>> vectors, std::size_t dim) : dim_(dim) {
    std::size_t top = 0;
    for (std::size_t col = 0; col < dim_ && top < vectors.size(); ++col) {
      while (true) {
        std::size_t best = vectors.size();
        for (std::size_t i = top; i < vectors.size(); ++i) {
          if (vectors[i][col] == 0) continue;
          if (best == vectors.size() || abs(vectors[i][col]) < abs(vectors[best][col])) best = i;
        }
        if (best == vectors.size()) break;
        std::swap(vectors[top], vectors[best]);
        bool others = false;
        for (std::size_t i = top + 1; i < vectors.size(); ++i) {
          if (vectors[i][col] == 0) continue;
          mpz_class q;
          mpz_tdiv_q(q.get_mpz_t(), vectors[i][col].get_mpz_t(), vectors[top][col].get_mpz_t());
          for (std::size_t k = 0; k < dim_; ++k) vectors[i][k] -= q * vectors[top][k];
          if (vectors[i][col] != 0) others = true;
        }
        if (!others) {
          if (vectors[top][col] < 0)
            for (auto& x : vectors[top]) x = -x;
          basis_.push_back(vectors[top]);
          pivots_.push_back(col);
          ++top;
          break;
        }
      }
    }
  }

  std::vector<mpz_class> reduce(std::vector<mpz_class> x) const {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      const std::size_t p = pivots_[r];
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), x[p].get_mpz_t(), basis_[r][p].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t k = 0; k < dim_; ++k) x[k] -= q * basis_[r][k];
    }
    return x;
  }

 private:
  std::size_t dim_;
  std::vector<std::vector<mpz_class>> basis_;
  std::vector<std::size_t> pivots_;
};

std::function<Element(const Element&)> make_normal_form(const SubgroupClosure& c,
                                                        std::span<const Element> z,
                                                        std::size_t cap, std::string& why) {
  const TargetPtr& t = c.target;
  if (t->is_abelian_realization()) {
    std::vector<std::vector<mpz_class>> vecs;
    for (const auto& e : z) vecs.push_back(e.v);
    const auto dim = static_cast<std::size_t>(t->degree());
    if (t->realization() == Realization::abelian_finite) {
      for (std::size_t i = 0; i < dim; ++i) {
        std::vector<mpz_class> m(dim);
        m[i] = t->moduli()[i];
        vecs.push_back(std::move(m));
      }
    }
    auto red = std::make_shared<LatticeReducer>(std::move(vecs), dim);
    return [red](const Element& g) { return Element{red->reduce(g.v)}; };
  }
  if (t->realization() == Realization::heisenberg_z &&
      std::all_of(z.begin(), z.end(), [](const Element& e) { return e.v[0] == 0 && e.v[1] == 0; })) {
    mpz_class gcd = 0;
    for (const auto& e : z) mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), e.v[2].get_mpz_t());
    return [gcd](const Element& g) {
      Element r = g;
      if (gcd != 0) mpz_fdiv_r(r.v[2].get_mpz_t(), g.v[2].get_mpz_t(), gcd.get_mpz_t());
      return r;
    };
  }
  // Generic path: <z> must itself be finite; representative is the least coset member.
  auto zc = std::make_shared<SubgroupClosure>(closure(z, t, cap));
  if (!zc->closed()) {
    why = "central subgroup <z> exceeded cap " + std::to_string(cap);
    return {};
  }
  return [zc, t](const Element& g) {
    Element best = t->multiply(g, zc->elements.front());
    for (std::size_t i = 1; i < zc->elements.size(); ++i) {
      Element cand = t->multiply(g, zc->elements[i]);
      if (cand < best) best = std::move(cand);
    }
    return best;
  };
}

std::string heisenberg_abelian_part(const SubgroupClosure& c) {
  IntMatrix m(2, c.generators.size());
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    m(0, j) = c.generators[j].v[0];
    m(1, j) = c.generators[j].v[1];
  }
  // Rank of the (a, b) projection lattice; image/<z> surjects onto it.
  const std::size_t r = rank(m);
  return r == 0 ? std::string("0") : (r == 1 ? std::string("Z") : std::string("Z x Z"));
}

}  // namespace

Element CentralQuotient::project(const Element& g) const {
  auto it = index_of.find(normal_form(g).key());
  if (it == index_of.end())
    fail(ErrorKind::not_in_subgroup, "element does not lie in the quotiented subgroup");
  return Element{{mpz_class(static_cast<unsigned long>(it->second))}};
}

QuotientOutcome quotient_map_to_finite(const SubgroupClosure& c, std::span<const Element> z,
                                       std::size_t cap) {
  const TargetPtr& t = c.target;
  for (const auto& e : z) {
    t->validate(e);
    for (const auto& gen : c.generators) {
      if (!t->commute(e, gen)) fail(ErrorKind::not_central, "designated element is not central");
    }
  }

  QuotientOutcome out;
  std::string why;
  auto nf = make_normal_form(c, z, cap, why);
  if (!nf) {
    out.reason = why;
    return out;
  }

  std::vector<Element> reps{nf(t->identity())};
  std::unordered_map<std::string, std::uint32_t> index{{reps[0].key(), 0}};
  std::vector<Element> steps;
  for (const auto& gen : c.generators) {
    steps.push_back(gen);
    steps.push_back(t->inverse(gen));
  }
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (const auto& s : steps) {
      Element n = nf(t->multiply(reps[i], s));
      auto key = n.key();
      if (index.count(key)) continue;
      if (reps.size() >= cap) {
        out.reason = "quotient exceeded cap " + std::to_string(cap);
        if (t->realization() == Realization::heisenberg_z)
          out.reason += "; abelianized image part is " + heisenberg_abelian_part(c);
        return out;
      }
      index.emplace(std::move(key), static_cast<std::uint32_t>(reps.size()));
      reps.push_back(std::move(n));
    }
  }

  // Canonical numbering: identity first, the rest sorted.
  std::vector<std::size_t> order(reps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin() + 1, order.end(),
            [&](std::size_t a, std::size_t b) { return reps[a] < reps[b]; });
  std::vector<Element> sorted;
  sorted.reserve(reps.size());
  index.clear();
  for (auto i : order) {
    index.emplace(reps[i].key(), static_cast<std::uint32_t>(sorted.size()));
    sorted.push_back(std::move(reps[i]));
  }

  const std::size_t n = sorted.size();
  std::vector<std::uint32_t> mult(n * n);
#pragma omp parallel for schedule(static)
  for (std::size_t ij = 0; ij < n * n; ++ij) {
    mult[ij] = index.at(nf(t->multiply(sorted[ij / n], sorted[ij % n])).key());
  }

  CentralQuotient q;
  q.ambient = t;
  q.group = TargetGroup::table(std::move(mult), "table:" + std::to_string(n));
  q.representatives = std::move(sorted);
  q.normal_form = std::move(nf);
  q.index_of = std::move(index);
  out.finite = true;
  out.quotient = std::move(q);
  return out;
}

CentralQuotient tabulate(const SubgroupClosure& c) {
  if (!c.closed()) fail(ErrorKind::unsupported, "cannot tabulate a closure that exceeded its cap");
  auto r = quotient_map_to_finite(c, {}, std::max<std::size_t>(c.order(), 1));
  if (!r.finite) fail(ErrorKind::consistency, "tabulating a closed closure failed: " + r.reason);
  return std::move(*r.quotient);
}

}  // namespace finorb
