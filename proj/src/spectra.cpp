#include "spectra_lab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/random.hpp"

namespace spectra_lab {
namespace {

void check_symmetry_tag(const PatternedMatrix& m) {
  const auto& a = m.entries;
  if (a.rows() != a.cols() || a.rows() == 0) throw ContractViolation("matrix must be square and non-empty");
  const bool ok = m.symmetry == Symmetry::Symmetric ? a == a.transpose()
                                                    : a == -a.transpose();
  if (!ok) {
    throw ContractViolation("matrix is not exactly " + to_string(m.symmetry));
  }
}

std::vector<double> skew_values(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues();  // descending
  const double cutoff = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                        (sv.size() ? sv(0) : 0.0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index p = 0; p + 1 < n; p += 2) {
    double sigma = 0.5 * (sv(p) + sv(p + 1));
    if (sigma <= cutoff) sigma = 0.0;
    out.push_back(sigma);
    out.push_back(-sigma);
  }
  if (n % 2 == 1) out.push_back(0.0);
  std::sort(out.begin(), out.end());
  return out;
}

// Walks the merged jump points of two sorted samples; values closer than `tie` are
// treated as one point. Returns sup |F_a - F_b|.
double merged_sup_distance(const std::vector<double>& a, const std::vector<double>& b, double tie) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double best = 0.0;
  while (ia < a.size() || ib < b.size()) {
    double x = std::numeric_limits<double>::infinity();
    if (ia < a.size()) x = a[ia];
    if (ib < b.size()) x = std::min(x, b[ib]);
    // absorb a chain of near-equal values
    double hi = x;
    bool moved = true;
    while (moved) {
      moved = false;
      while (ia < a.size() && a[ia] <= hi + tie) { hi = std::max(hi, a[ia]); ++ia; moved = true; }
      while (ib < b.size() && b[ib] <= hi + tie) { hi = std::max(hi, b[ib]); ++ib; moved = true; }
    }
    best = std::max(best, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return best;
}

}  // namespace

ESD::ESD(std::vector<double> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

double ESD::operator()(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double ESD::left_limit(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

std::vector<HistogramBin> ESD::histogram(std::span<const double> edges) const {
  if (edges.size() < 2) throw DomainError("histogram needs at least two edges");
  if (!std::is_sorted(edges.begin(), edges.end())) throw DomainError("histogram edges must be sorted");
  std::vector<HistogramBin> bins(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    bins[k].left = edges[k];
    bins[k].right = edges[k + 1];
    const bool last = k + 2 == edges.size();
    const auto lo = std::lower_bound(values_.begin(), values_.end(), edges[k]);
    const auto hi = last ? std::upper_bound(values_.begin(), values_.end(), edges[k + 1])
                         : std::lower_bound(values_.begin(), values_.end(), edges[k + 1]);
    bins[k].count = static_cast<std::size_t>(std::max<std::ptrdiff_t>(hi - lo, 0));
  }
  return bins;
}

RealSpectrum spectrum(const PatternedMatrix& m) {
  check_symmetry_tag(m);
  RealSpectrum s;
  s.source_symmetry = m.symmetry;
  if (m.symmetry == Symmetry::Symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ContractViolation("eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    s.values.assign(ev.data(), ev.data() + ev.size());
    std::sort(s.values.begin(), s.values.end());
  } else {
    s.values = skew_values(m.entries);
  }
  return s;
}

ESD esd(const RealSpectrum& s) { return ESD(s.values); }

double esd_moment(const RealSpectrum& s, int h) {
  if (h < 0) throw DomainError("moment order must be non-negative");
  if (s.values.empty()) return 0.0;
  double sum = 0.0;
  for (const double v : s.values) sum += std::pow(v, h);
  return sum / static_cast<double>(s.values.size());
}

double trace_moment(const PatternedMatrix& m, int two_k) {
  if (two_k <= 0 || two_k % 2 != 0) throw DomainError("trace_moment needs an even positive order");
  const int k = two_k / 2;
  const Eigen::MatrixXd sq = m.entries * m.entries;
  double trace = 0.0;
  if (k == 1) {
    trace = sq.trace();
  } else {
    // tr(sq^k) = <sq^{k-j}, sq^j> for the symmetric matrix sq
    Eigen::MatrixXd left = sq;
    int left_power = 1;
    const int half = k / 2;
    while (left_power < half) {
      left = left * sq;
      ++left_power;
    }
    Eigen::MatrixXd right = left;
    if (k - half != half) right = left * sq;
    trace = left.cwiseProduct(right).sum();
  }
  const double sign = (m.symmetry == Symmetry::SkewSymmetric && k % 2 == 1) ? -1.0 : 1.0;
  return sign * trace / static_cast<double>(m.n());
}

double kolmogorov_distance(const ESD& e, const std::function<double(double)>& ref_cdf) {
  const auto& v = e.values();
  if (v.empty()) throw DomainError("empty ESD");
  double best = 0.0;
  std::size_t p = 0;
  while (p < v.size()) {
    const double x = v[p];
    const double before = e.left_limit(x);
    while (p < v.size() && v[p] == x) ++p;
    const double after = static_cast<double>(p) / static_cast<double>(v.size());
    const double ref_before = ref_cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    const double ref_at = ref_cdf(x);
    best = std::max({best, std::abs(before - ref_before), std::abs(after - ref_at)});
  }
  return best;
}

double kolmogorov_distance(const ESD& e, const ESD& f) {
  if (e.size() == 0 || f.size() == 0) throw DomainError("empty ESD");
  return merged_sup_distance(e.values(), f.values(), 0.0);
}

double interlacing_gap(const PatternedMatrix& m) {
  if (m.symmetry != Symmetry::SkewSymmetric) throw DomainError("interlacing_gap needs a skew-symmetric matrix");
  const int n = m.n();
  if (n < 2) throw DomainError("interlacing_gap needs n >= 2");
  PatternedMatrix sub;
  sub.entries = m.entries.topLeftCorner(n - 1, n - 1);
  sub.symmetry = m.symmetry;
  const RealSpectrum full = spectrum(m);
  const RealSpectrum minor = spectrum(sub);
  double radius = 1.0;
  for (const double v : full.values) radius = std::max(radius, std::abs(v));
  return merged_sup_distance(full.values, minor.values, 1e-9 * radius);
}

std::vector<double> symmetric_bin_edges(const RealSpectrum& s, int bins) {
  if (bins < 1) throw DomainError("need at least one bin");
  double r = 0.0;
  for (const double v : s.values) r = std::max(r, std::abs(v));
  if (r == 0.0) r = 1.0;
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) edges[k] = -r + 2.0 * r * k / bins;
  edges.back() = r;
  return edges;
}

double ReplicateMoments::band_halfwidth() const {
  if (values.empty()) return 0.0;
  return 3.0 * std::sqrt(variance / static_cast<double>(values.size()));
}

std::vector<RealSpectrum> replicate_spectra_serial(const EnsembleSpec& spec, int reps) {
  if (reps < 1) throw DomainError("reps must be positive");
  std::vector<RealSpectrum> out(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    EnsembleSpec draw = spec;
    draw.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(r));
    out[r] = spectrum(build_matrix(draw));
  }
  return out;
}

std::vector<RealSpectrum> replicate_spectra(const EnsembleSpec& spec, int reps) {
  if (reps < 1) throw DomainError("reps must be positive");
  std::vector<RealSpectrum> out(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (int r = 0; r < reps; ++r) {
    EnsembleSpec draw = spec;
    draw.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(r));
    out[r] = spectrum(build_matrix(draw));
  }
  return out;
}

std::vector<ReplicateMoments> moments_of(std::span<const RealSpectrum> spectra,
                                         std::span<const int> orders) {
  std::vector<ReplicateMoments> out;
  for (const int h : orders) {
    ReplicateMoments rm;
    rm.order = h;
    for (const auto& s : spectra) rm.values.push_back(esd_moment(s, h));
    const double count = static_cast<double>(rm.values.size());
    rm.mean = std::accumulate(rm.values.begin(), rm.values.end(), 0.0) / count;
    double ss = 0.0;
    for (const double v : rm.values) ss += (v - rm.mean) * (v - rm.mean);
    rm.variance = rm.values.size() > 1 ? ss / (count - 1.0) : 0.0;
    out.push_back(std::move(rm));
  }
  return out;
}

ReplicateMoments replicate_moments(const EnsembleSpec& spec, int h, int reps) {
  const int orders[] = {h};
  return replicate_moments(spec, orders, reps).front();
}

std::vector<ReplicateMoments> replicate_moments(const EnsembleSpec& spec,
                                                std::span<const int> orders, int reps) {
  if (reps < 2) throw DomainError("replicate_moments needs reps >= 2");
  const auto spectra = replicate_spectra(spec, reps);
  return moments_of(spectra, orders);
}

}  // namespace spectra_lab
