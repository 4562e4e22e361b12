#pragma once

namespace spectra_lab {

// Number of OpenMP threads kernels may use: omp_get_max_threads(), capped by the
// SPECTRA_LAB_THREADS environment variable when it holds a positive integer.
int thread_count();

}  // namespace spectra_lab
