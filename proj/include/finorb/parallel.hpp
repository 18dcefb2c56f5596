#pragma once

namespace finorb {

/// Worker count used by the OpenMP kernels (orbit frontiers, closures,
/// hom enumeration, per-coset action matrices). Results never depend on it.
void set_thread_count(int n);
int thread_count();

}  // namespace finorb
