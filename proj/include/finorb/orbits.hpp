#pragma once

// Representation variety at desk scale: Hom enumeration, capped orbits under
// an automorphism catalog, fixed points, orbit partitions, Schreier
// generators of stabilizers and DOT export.
//
// The action is right precomposition rho . phi = rho o phi, so a catalog word
// phi_1 phi_2 ... phi_L acts as rho o phi_1 o ... o phi_L.

#include <cstddef>
#include <string>
#include <vector>

#include "finorb/autos.hpp"
#include "finorb/homomorphism.hpp"

namespace finorb {

inline constexpr std::size_t kDefaultOrbitCap = 100'000;
inline constexpr std::size_t kDefaultEnumBudget = 2'000'000;

/// Cap from FINORB_DEFAULT_CAP if set and positive, else kDefaultOrbitCap.
std::size_t default_cap();

std::vector<Homomorphism> enumerate_homs(const Presentation& p, TargetPtr target,
                                         std::size_t budget = kDefaultEnumBudget);

enum class OrbitStatus { complete, exceeded_cap };

struct OrbitEdge {
  std::size_t from;
  std::size_t generator;  // index into the catalog
  std::size_t to;
};

struct OrbitResult {
  Homomorphism base;
  std::vector<Homomorphism> elements;  // canonical order
  std::vector<OrbitEdge> edges;        // sorted; only between discovered elements
  std::vector<std::string> labels;     // catalog labels, for export
  OrbitStatus status = OrbitStatus::complete;
  std::size_t cap = 0;
  std::size_t base_index = 0;
  /// BFS tree: parent[i] and the catalog generator with elements[parent[i]] . g == elements[i];
  /// the base has parent == npos.
  std::vector<std::size_t> parent;
  std::vector<std::size_t> parent_generator;

  bool complete() const { return status == OrbitStatus::complete; }
  std::size_t size() const { return elements.size(); }
  std::size_t find(const Homomorphism& h) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

OrbitResult orbit(const Homomorphism& rho, const std::vector<Automorphism>& catalog,
                  std::size_t cap);

std::vector<Homomorphism> fixed_points(const std::vector<Homomorphism>& homs,
                                       const std::vector<Automorphism>& catalog);

/// Orbits in order of their least element.
std::vector<OrbitResult> orbit_partition(const std::vector<Homomorphism>& homs,
                                         const std::vector<Automorphism>& catalog);

/// Word in the catalog: +(g+1) is catalog[g], -(g+1) its inverse; read left to
/// right as composition phi_1 o phi_2 o ...
using CatalogWord = std::vector<int>;

/// rho . word
Homomorphism act(const Homomorphism& rho, const CatalogWord& word,
                 const std::vector<Automorphism>& catalog);
/// The automorphism spelled by the word (materialized; may be long).
Automorphism materialize(const CatalogWord& word, const std::vector<Automorphism>& catalog);
/// Product of the catalog H_1 matrices along the word.
IntMatrix word_h1(const CatalogWord& word, const std::vector<IntMatrix>& catalog_h1);
CatalogWord inverse_word(const CatalogWord& w);
std::string word_label(const CatalogWord& w, const std::vector<Automorphism>& catalog);

struct StabilizerData {
  std::vector<CatalogWord> schreier_generators;  // each fixes the base exactly
  std::size_t orbit_size = 0;
  std::size_t catalog_size = 0;
};

/// Schreier generators t_i . phi . t_j^-1 over non-tree edges. Throws
/// unsupported for an incomplete orbit.
StabilizerData stabilizer_generators(const OrbitResult& o,
                                     const std::vector<Automorphism>& catalog);

/// Transversal word t_i with base . t_i == elements[i].
CatalogWord transversal_word(const OrbitResult& o, std::size_t i);

std::string export_orbit_dot(const OrbitResult& o);

/// Orbits of conjugacy classes: homs identified up to conjugation in the
/// target (finite targets only).
struct ConjugacyReport {
  std::size_t orbit_size = 0;
  std::size_t class_count = 0;
};
ConjugacyReport conjugacy_quotient(const OrbitResult& o, std::size_t budget = kDefaultEnumBudget);

}  // namespace finorb
