#pragma once

// Plain serial versions of the OpenMP kernels. They share no code with the
// parallel paths beyond the group arithmetic, and exist to pin the parallel
// output in tests and to give the benchmarks a baseline.

#include <vector>

#include "finorb/orbits.hpp"
#include "finorb/subgroups.hpp"

namespace finorb::reference {

/// Odometer over images, last generator fastest (same order as the parallel sweep).
std::vector<Homomorphism> enumerate_homs(const Presentation& p, TargetPtr target,
                                         std::size_t budget = kDefaultEnumBudget);

/// FIFO breadth-first search; same elements, tree and edges as finorb::orbit.
OrbitResult orbit(const Homomorphism& rho, const std::vector<Automorphism>& catalog,
                  std::size_t cap);

SubgroupClosure closure(std::span<const Element> gens, TargetPtr target, std::size_t cap);

/// Conjugation action of each coset representative on H_1(N), one coset at a time.
std::vector<IntMatrix> q_action(const SubgroupHomology& h);

}  // namespace finorb::reference
