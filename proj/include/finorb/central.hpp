#pragma once

// Central-extension data 1 -> Z -> rho(Gamma) -> F -> 1 with F finite, and a
// coordinate system on Z (Z is abelian, written as Z^a x prod Z/m_i).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finorb/homomorphism.hpp"
#include "finorb/subgroups.hpp"

namespace finorb {

enum class CentralKind {
  finite_center,  // closed finite image, Z = its center
  abelian_image,  // abelian realization, Z = the whole image
};

struct CentralData {
  CentralKind kind;
  std::vector<Element> z_generators;
  std::vector<FreeWord> z_words;     // rho(z_words[i]) == z_generators[i]
  std::vector<mpz_class> moduli;     // coordinate moduli of Z; 0 = free
  std::optional<mpz_class> z_order;  // known when Z is finite by construction
  TargetPtr f_group;                 // Cayley-table realization of F
  FiniteQuotient pullback;           // Gamma -> F; N = its kernel = rho^-1(Z)
  /// Coordinates of an element of Z; throws not_in_subgroup outside Z.
  std::function<std::vector<mpz_class>(const Element&)> coordinates;

  std::size_t f_order() const { return pullback.order(); }
};

struct CentralOutcome {
  std::optional<CentralData> data;
  std::string reason;  // why no finite central quotient was found
  bool ok() const { return data.has_value(); }
};

/// Finds Z central with rho(Gamma)/Z finite. Abelian realizations use the
/// whole image; closed finite images use their center; Heisenberg images
/// that are not closed within `cap` are quotiented by their commutators and
/// reported as not finite.
CentralOutcome inner_orbit_central_check(const Homomorphism& rho, std::size_t cap);

}  // namespace finorb
