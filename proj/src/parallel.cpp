#include "affsteer/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace affsteer {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_max_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int apply_thread_cap_from_env() {
  const char* env = std::getenv("STEER_THREADS");
  if (env == nullptr) return max_threads();
  int cap = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, cap);
  if (ec == std::errc() && ptr == end && cap > 0 && cap < max_threads()) set_max_threads(cap);
  return max_threads();
}

}  // namespace affsteer
