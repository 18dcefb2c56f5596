#pragma once

// Finite-index normal subgroups N = ker(Gamma -> Q) for an explicit surjection
// onto a concrete finite group Q: coset tables, Reidemeister-Schreier
// rewriting, H_1(N, Z) with its Q-action, the transfer map and the
// Chevalley-Weil character check.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "finorb/autos.hpp"
#include "finorb/homomorphism.hpp"
#include "finorb/linalg.hpp"

namespace finorb {

class FiniteQuotient {
 public:
  /// Throws unsupported for an infinite target and not_surjective unless
  /// the images generate all of Q.
  explicit FiniteQuotient(Homomorphism surjection);

  /// "<target>:<json images>", e.g. "cyclic:2:[1,1]" or "sym:3:[[1,0,2],[1,2,0]]".
  static FiniteQuotient parse(const Presentation& p, const std::string& spec);

  const Presentation& presentation() const noexcept { return surjection_.presentation(); }
  const TargetPtr& target() const noexcept { return surjection_.target(); }
  const Homomorphism& surjection() const noexcept { return surjection_; }
  std::size_t order() const noexcept { return order_; }

 private:
  Homomorphism surjection_;
  std::size_t order_;
};

struct CosetTable {
  std::size_t index = 0;
  std::size_t generators = 0;
  /// action[k][c] = c . x_{k+1}; inverse_action[k][c] = c . x_{k+1}^-1.
  std::vector<std::vector<std::uint32_t>> action, inverse_action;
  /// Prefix-closed shortlex BFS transversal; transversal[0] is empty.
  std::vector<FreeWord> transversal;
  /// Q element of each coset.
  std::vector<Element> coset_element;
  std::unordered_map<std::string, std::uint32_t> coset_index;  // element key -> coset
  /// Schreier generator index of (coset, generator), or -1 for tree edges.
  std::vector<std::vector<int>> schreier_index;
  /// Words t_c x_k t_{c.x_k}^-1 of the nontrivial Schreier generators.
  std::vector<FreeWord> schreier_words;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> schreier_source;  // (coset, k-1)

  std::size_t coset_of(const FreeWord& w) const;
  /// Coset of the product of the Q elements of cosets a and b.
  std::size_t multiply(const TargetGroup& q, std::size_t a, std::size_t b) const;
};

CosetTable coset_table(const FiniteQuotient& q);

/// Signed 1-based letters over the Schreier generators. Throws
/// not_in_subgroup unless w lies in N.
FreeWord rewrite(const CosetTable& t, const FreeWord& w);
/// Expands a rewritten word back to Gamma.
FreeWord expand(const CosetTable& t, const FreeWord& rewritten);

struct SubgroupHomology {
  std::size_t lattice_rank = 0;   // number of Schreier generators
  std::size_t rank = 0;           // rank of H_1(N, Z)
  IntMatrix relations;            // lattice_rank x index (surface case), empty otherwise
  IntMatrix projection;           // rank x lattice_rank
  IntMatrix section;              // lattice_rank x rank, projection * section == I
  std::vector<IntMatrix> q_action;  // indexed by coset; conjugation by t_q
  CosetTable table;

  /// Abelianized class of a word in N, in H_1(N) coordinates.
  IntMatrix class_of(const FreeWord& w) const;
};

SubgroupHomology subgroup_homology(const FiniteQuotient& q);

/// Action of an automorphism preserving N on H_1(N). Throws not_in_subgroup
/// if phi does not map N into itself.
IntMatrix induced_on_subgroup(const SubgroupHomology& h, const Automorphism& phi);

struct QCharacter {
  std::vector<mpz_class> values;  // indexed by coset
  friend bool operator==(const QCharacter&, const QCharacter&) = default;
};

QCharacter cw_character(const SubgroupHomology& h);
QCharacter predicted_character(const Presentation& p, std::size_t order);

struct CwReport {
  bool pass = false;
  std::size_t rank = 0;
  std::size_t order = 0;
  QCharacter character, predicted;
  /// <chi, chi_triv> computed as (1/|Q|) sum chi(q).
  mpq_class trivial_multiplicity;
  bool class_function = false;
};

CwReport cw_verify(const FiniteQuotient& q);
CwReport cw_verify(const FiniteQuotient& q, const SubgroupHomology& h);

/// H_1(Gamma) -> H_1(N): column k is the class of prod_i t_i x_k t_{i.x_k}^-1.
IntMatrix transfer_map(const SubgroupHomology& h);

/// Quotient by the intersection of all subgroups of index <= m, realized as a
/// Cayley-table group. Throws budget when enumeration exceeds `budget`.
FiniteQuotient characteristic_core(const Presentation& p, int m,
                                   std::size_t budget = 2'000'000);

/// True iff phi(N) == N, tested on the Schreier generators of N.
bool preserves_kernel(const FiniteQuotient& q, const CosetTable& t, const Automorphism& phi);
/// Same test for rho . word without materializing the word.
bool preserves_kernel(const FiniteQuotient& q, const CosetTable& t, const std::vector<int>& word,
                      const std::vector<Automorphism>& catalog);

}  // namespace finorb
