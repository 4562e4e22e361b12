#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spectra_lab/matrix_core.hpp"

namespace spectra_lab {

// Real spectrum of a patterned matrix, sorted ascending. For a skew-symmetric source the
// values are the i*lambda_j, which come in exact +/- pairs (plus a 0 when n is odd).
struct RealSpectrum {
  std::vector<double> values;
  Symmetry source_symmetry = Symmetry::Symmetric;
};

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

// Empirical CDF F(x) = #{v <= x} / n.
class ESD {
 public:
  ESD() = default;
  explicit ESD(std::vector<double> values);

  double operator()(double x) const;
  // F(x-) = #{v < x} / n
  double left_limit(double x) const;

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

  // Bins [e_k, e_{k+1}); the last bin is closed on the right. Values outside are dropped.
  std::vector<HistogramBin> histogram(std::span<const double> edges) const;

 private:
  std::vector<double> values_;
};

RealSpectrum spectrum(const PatternedMatrix& m);

ESD esd(const RealSpectrum& s);

// (1/n) sum v_j^h
double esd_moment(const RealSpectrum& s, int h);

// (-1)^k tr(m^{2k}) / n for skew matrices, tr(m^{2k}) / n for symmetric ones.
double trace_moment(const PatternedMatrix& m, int two_k);

// sup_x |e(x) - ref(x)|, evaluated at every jump of e from both sides.
double kolmogorov_distance(const ESD& e, const std::function<double(double)>& ref_cdf);

// sup_x |e(x) - f(x)| between two empirical CDFs (exact).
double kolmogorov_distance(const ESD& e, const ESD& f);

// Sup distance between the ESD of a skew matrix and that of its leading (n-1)x(n-1)
// principal submatrix. Interlacing bounds this by 1/n.
double interlacing_gap(const PatternedMatrix& m);

// `bins` equal bins over [-max|v|, max|v|].
std::vector<double> symmetric_bin_edges(const RealSpectrum& s, int bins = 81);

struct ReplicateMoments {
  int order = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::vector<double> values;

  // Half-width of the mean +/- 3 * sd / sqrt(reps) band.
  double band_halfwidth() const;
};

// Spectra of `reps` independent draws; replicate r uses seed mix_seed(spec.seed, r).
// OpenMP over replicates; results do not depend on the thread count.
std::vector<RealSpectrum> replicate_spectra(const EnsembleSpec& spec, int reps);
std::vector<RealSpectrum> replicate_spectra_serial(const EnsembleSpec& spec, int reps);

std::vector<ReplicateMoments> moments_of(std::span<const RealSpectrum> spectra,
                                         std::span<const int> orders);

ReplicateMoments replicate_moments(const EnsembleSpec& spec, int h, int reps);
std::vector<ReplicateMoments> replicate_moments(const EnsembleSpec& spec,
                                                std::span<const int> orders, int reps);

}  // namespace spectra_lab
