#include "spectra_lab/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace spectra_lab {

int thread_count() {
  int threads = omp_get_max_threads();
  if (const char* cap = std::getenv("SPECTRA_LAB_THREADS")) {
    try {
      const int value = std::stoi(cap);
      if (value > 0) threads = std::min(threads, value);
    } catch (const std::exception&) {
      // unparsable cap is ignored
    }
  }
  return std::max(threads, 1);
}

}  // namespace spectra_lab
