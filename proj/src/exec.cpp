#include "monex/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace monex {

int thread_count(Exec mode) {
  if (mode == Exec::serial) return 1;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace monex
