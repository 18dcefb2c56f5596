#pragma once

// Target groups G for representations Gamma -> G.
//
// Every element is a short vector of exact integers in a realization-specific
// normal form; equality, ordering and hashing all go through that vector.
// Permutations act on 0..d-1 and compose with the right factor acting first:
// (p * q)(i) = p(q(i)).

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "finorb/linalg.hpp"
#include "finorb/words.hpp"

namespace finorb {

struct Element {
  std::vector<mpz_class> v;

  /// Canonical byte serialization; the hash key of the element.
  std::string key() const;
  friend bool operator==(const Element&, const Element&) = default;
  friend bool operator<(const Element& a, const Element& b);
};

enum class Realization {
  permutations,    // degree d
  abelian_free,    // Z^r
  abelian_finite,  // Z/m_1 x ... x Z/m_k
  heisenberg_mod,  // upper unitriangular 3x3 over Z/k, stored (a, b, c)
  heisenberg_z,    // same over Z
  matrix_z,        // GL_m(Z), row-major
  table,           // abstract finite group given by a Cayley table
};

class TargetGroup {
 public:
  static std::shared_ptr<const TargetGroup> symmetric(int degree);
  static std::shared_ptr<const TargetGroup> cyclic(long modulus);
  static std::shared_ptr<const TargetGroup> abelian_finite(std::vector<mpz_class> moduli);
  static std::shared_ptr<const TargetGroup> abelian_free(int rank);
  static std::shared_ptr<const TargetGroup> heisenberg_mod(long modulus);
  static std::shared_ptr<const TargetGroup> heisenberg_z();
  static std::shared_ptr<const TargetGroup> matrix_z(int size,
                                                     std::vector<Element> designated = {});
  /// mult[i * n + j] = index of i*j; element 0 must be the identity.
  static std::shared_ptr<const TargetGroup> table(std::vector<std::uint32_t> mult,
                                                  std::string label = "table");

  /// sym:d, cyclic:k, abfin:m1,m2,..., ab:r, heis:k, heis:Z, matz:m, matz:file:<path>
  static std::shared_ptr<const TargetGroup> parse(const std::string& spec);

  Realization realization() const noexcept { return kind_; }
  std::string spec() const;

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, long k) const;
  bool commute(const Element& a, const Element& b) const {
    return multiply(a, b) == multiply(b, a);
  }

  /// Exact order, or nullopt for infinite realizations.
  std::optional<mpz_class> order() const;
  bool is_finite() const { return order().has_value(); }
  bool is_abelian_realization() const {
    return kind_ == Realization::abelian_free || kind_ == Realization::abelian_finite;
  }

  /// All elements in canonical order. Throws budget above `budget` elements.
  std::vector<Element> elements(std::size_t budget = 10'000'000) const;

  /// Throws malformed unless e is a valid element in normal form.
  void validate(const Element& e) const;

  nlohmann::json element_to_json(const Element& e) const;
  Element element_from_json(const nlohmann::json& j) const;

  /// Generators shipped with a matz:file target, if any.
  const std::vector<Element>& designated_generators() const { return designated_; }

  // Realization parameters.
  int degree() const noexcept { return size_; }
  long modulus() const noexcept { return modulus_; }
  const std::vector<mpz_class>& moduli() const noexcept { return moduli_; }
  std::size_t table_order() const noexcept { return table_n_; }

 private:
  explicit TargetGroup(Realization kind) : kind_(kind) {}

  Realization kind_;
  int size_ = 0;        // degree, rank, or matrix size
  long modulus_ = 0;    // heis:k
  std::vector<mpz_class> moduli_;
  std::vector<Element> designated_;
  std::string source_;  // matz:file path, kept for spec()
  std::shared_ptr<const std::vector<std::uint32_t>> mult_;
  std::shared_ptr<const std::vector<std::uint32_t>> inv_;
  std::size_t table_n_ = 0;
  std::string label_;
};

using TargetPtr = std::shared_ptr<const TargetGroup>;

// ---------------------------------------------------------------------------
// Subgroup closure

enum class ClosureStatus { closed, exceeded_cap };

struct SubgroupClosure {
  TargetPtr target;
  std::vector<Element> generators;
  /// Canonically sorted. Complete iff status == closed.
  std::vector<Element> elements;
  /// words[i] spells elements[i] in the generators (letter k = generators[k-1]).
  std::vector<FreeWord> words;
  ClosureStatus status = ClosureStatus::closed;
  std::size_t cap = 0;

  bool closed() const { return status == ClosureStatus::closed; }
  std::size_t order() const { return elements.size(); }
  /// Index into elements, or npos.
  std::size_t find(const Element& e) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Breadth-first closure under right multiplication by generators and their
/// inverses; frontier expansion runs in parallel, insertion is serial so the
/// result does not depend on the schedule.
SubgroupClosure closure(std::span<const Element> gens, TargetPtr target, std::size_t cap);

/// Elements commuting with every generator. Throws unsupported on ExceededCap.
std::vector<Element> center(const SubgroupClosure& c);

/// Least k <= cap with e^k = 1.
std::optional<std::size_t> element_order(const Element& e, const TargetGroup& g, std::size_t cap);

// ---------------------------------------------------------------------------
// Central quotients

/// A finite group F = image / <z> tabulated as a Cayley table together with
/// the projection from the ambient realization.
struct CentralQuotient {
  TargetPtr ambient;
  TargetPtr group;                      // table realization of F
  std::vector<Element> representatives; // ambient representative of each F element
  std::function<Element(const Element&)> normal_form;
  std::unordered_map<std::string, std::uint32_t> index_of;

  std::size_t order() const { return representatives.size(); }
  /// Image in F of an element of the subgroup the quotient was built from.
  Element project(const Element& g) const;
};

struct QuotientOutcome {
  bool finite = false;
  std::optional<CentralQuotient> quotient;
  std::string reason;  // populated when not finite
};

/// Quotient of <c.generators> by <z>. Throws not_central if some z fails to
/// commute with a generator. Non-finite quotients (or quotients that exceed
/// `cap`) are reported, not thrown.
QuotientOutcome quotient_map_to_finite(const SubgroupClosure& c, std::span<const Element> z,
                                       std::size_t cap);

/// Cayley-table copy of a closed closure (quotient by the trivial subgroup).
CentralQuotient tabulate(const SubgroupClosure& c);

}  // namespace finorb
