#include "phantom/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phantom {

int thread_budget() {
  int budget = 1;
#ifdef _OPENMP
  budget = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("PHANTOM_BUDGET_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1 && cap < budget) budget = cap;
    } catch (...) {
      // Ignore unparsable values; default budget stands.
    }
  }
  return budget;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  std::uint64_t mixed = splitmix64(s);
  s = mixed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  return splitmix64(s);
}

}  // namespace phantom
