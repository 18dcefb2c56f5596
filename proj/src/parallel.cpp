#include "finorb/parallel.hpp"

#include <omp.h>

#include <algorithm>

namespace finorb {

void set_thread_count(int n) { omp_set_num_threads(std::max(1, n)); }

int thread_count() { return omp_get_max_threads(); }

}  // namespace finorb
