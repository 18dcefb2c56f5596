#pragma once

// Replays the finiteness argument on a concrete representation and records
// every intermediate matrix in a self-contained JSON certificate:
//
//   orbit -> stabilizer -> central data -> N = rho^-1(Z) -> H_1(N) with its
//   Q-action -> character check -> rho_ab -> kernel step -> co-invariants on
//   V_0 -> conclusion, cross-checked against the direct closure of the image.
//
// ImageFinite is only ever reported when every step passed and the direct
// closure agrees on the order.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "finorb/central.hpp"
#include "finorb/json_io.hpp"
#include "finorb/orbits.hpp"
#include "finorb/subgroups.hpp"

namespace finorb {

struct StepReport {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// rho_ab: H_1(N, Z) -> coordinates of Z. Throws consistency if some
/// Schreier generator of N does not land in Z.
IntMatrix rho_ab_matrix(const Homomorphism& rho, const CentralData& z, const SubgroupHomology& h);

/// rho_ab . q == rho_ab (mod the Z moduli) for every q, and the free rows
/// of rho_ab vanish on the complement of the averaging projector.
StepReport kernel_step(const IntMatrix& rho_ab, const std::vector<mpz_class>& moduli,
                       const SubgroupHomology& h);

/// Rows of rho_ab with modulus 0, i.e. rho_ab tensor Q.
RatMatrix free_rows(const IntMatrix& rho_ab, const std::vector<mpz_class>& moduli);

struct NaturalitySample {
  CatalogWord word;
  IntMatrix phi;  // action on H_1(N)
  IntMatrix m;    // induced action on V_0 in the transfer basis
};

struct CoinvariantsOutcome {
  StepReport report;
  bool inconclusive = false;              // no N-preserving power found
  std::vector<CatalogWord> generators;    // N-preserving stabilizer elements used
  std::vector<IntMatrix> matrices;        // distinct actions on V_0, sorted
  IntMatrix relations;
  SNFResult snf;
  AbelianInvariants invariants;
  std::vector<NaturalitySample> naturality;
};

struct CoinvariantsOptions {
  std::size_t naturality_samples = 12;
  int power_bound = 12;
};

/// Co-invariants of V_0 (the transfer image) under the stabilizer; PASS iff
/// they are finite and rho_ab tensor Q vanishes on V_0.
CoinvariantsOutcome coinvariants_step(const StabilizerData& stab,
                                      const std::vector<Automorphism>& catalog,
                                      const FiniteQuotient& q, const SubgroupHomology& h,
                                      const IntMatrix& rho_ab, const std::vector<mpz_class>& moduli,
                                      const CoinvariantsOptions& options = {});

struct CertifyOptions {
  std::string catalog_spec = "nielsen";
  std::size_t orbit_cap = kDefaultOrbitCap;
  std::size_t closure_cap = kDefaultOrbitCap;
  bool characteristic = false;  // always pass to the characteristic core
  CoinvariantsOptions coinvariants;
};

enum class Conclusion { image_finite, inconclusive };

struct Certificate {
  Conclusion conclusion = Conclusion::inconclusive;
  mpz_class order;          // when image_finite
  std::string reason;       // when inconclusive
  std::string failed_step;  // when inconclusive
  bool consistent = true;   // false only on an internal contradiction
  std::vector<StepReport> steps;
  Json json;
};

Certificate certify(const Homomorphism& rho, const std::vector<Automorphism>& catalog,
                    const CertifyOptions& options);

struct BraidReport {
  bool pass = false;
  std::size_t strands = 0;
  std::vector<std::string> fixed_by;       // braid generators fixing the hom
  bool infinite_image = false;
  std::vector<std::string> moved_by_nielsen;
  bool certify_image_finite = false;
  std::string certify_failed_step;
  Json json;
};

/// Exponent-sum hom F_n -> target (designated infinite-order element): fixed
/// by every braid generator, infinite image, moved by the Nielsen inversion,
/// and certify under the braid catalog stops short of ImageFinite.
BraidReport braid_counterexample_check(int n, const std::string& target_spec = "ab:1",
                                       std::size_t order_cap = 1000);

}  // namespace finorb
