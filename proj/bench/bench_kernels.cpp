// Serial reference vs OpenMP kernel, same inputs; also checks the outputs agree.
//   bench_kernels [--repeat R]
// SPECTRA_LAB_THREADS caps the thread count of the parallel side.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "spectra_lab/limit_integrals.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/spectra.hpp"
#include "spectra_lab/word_engine.hpp"

using namespace spectra_lab;

namespace {

double best_of(int repeat, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const std::string& name, double serial, double parallel, bool same) {
  std::printf("%-44s %10.4f %10.4f %8.2fx  %s\n", name.c_str(), serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernels"};
  int repeat = 3;
  app.add_option("--repeat", repeat, "best of R runs")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", thread_count());
  std::printf("%-44s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  {
    const Word w("abcabc");
    SignedCount a, b;
    const double s = best_of(repeat, [&] { a = count_circuits_serial(w, MatchRelation::ExactL, LinkKind::Hankel, 64); });
    const double p = best_of(repeat, [&] { b = count_circuits(w, MatchRelation::ExactL, LinkKind::Hankel, 64); });
    row("count_circuits abcabc hankel n=64", s, p, a == b);
  }
  {
    const Word w("abab");
    SignedCount a, b;
    const double s = best_of(repeat, [&] { a = count_circuits_serial(w, MatchRelation::ExactL, LinkKind::Toeplitz, 256); });
    const double p = best_of(repeat, [&] { b = count_circuits(w, MatchRelation::ExactL, LinkKind::Toeplitz, 256); });
    row("count_circuits abab toeplitz n=256", s, p, a == b);
  }
  {
    const EnsembleSpec spec{LinkKind::Toeplitz, {SignModifier::Skew}, 400, InputDistribution::Rademacher, 2024};
    std::vector<RealSpectrum> a, b;
    const double s = best_of(repeat, [&] { a = replicate_spectra_serial(spec, 8); });
    const double p = best_of(repeat, [&] { b = replicate_spectra(spec, 8); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].values == b[i].values;
    row("replicate_spectra skew toeplitz n=400 x8", s, p, same);
  }
  {
    const Word w("abcabc");
    IntegralEstimate a, b;
    const double s = best_of(repeat, [&] { a = word_limit_integral_serial(w, LinkKind::Hankel, SignWeight::Skew, 2'000'000, 2024); });
    const double p = best_of(repeat, [&] { b = word_limit_integral(w, LinkKind::Hankel, SignWeight::Skew, 2'000'000, 2024); });
    row("word_limit_integral abcabc skew 2e6", s, p, a.value == b.value && a.std_error == b.std_error);
  }
  return 0;
}
