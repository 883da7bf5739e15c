#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mimosa::parallel {

inline bool available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline double wall_time() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return 0.0;
#endif
}

}  // namespace mimosa::parallel
