#include "spectra_lab/limit_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/random.hpp"

namespace spectra_lab {
namespace {

constexpr std::uint64_t kBatchSize = 1u << 16;
constexpr int kStrataPerAxis = 8;
constexpr std::uint64_t kMinSamples = 10'000;

bool is_sum_link(LinkKind kind) {
  return kind == LinkKind::Hankel || kind == LinkKind::ReverseCirculant;
}

// Dense double copy of the vertex forms, for the sampling loop.
struct CompiledRelations {
  int dimension = 0;
  int h = 0;
  std::vector<double> coeffs;  // (h+1) x dimension, row-major
  std::vector<int> constrained;

  explicit CompiledRelations(const VertexRelations& r)
      : dimension(r.dimension()), h(r.word.length()), constrained(r.constrained) {
    coeffs.resize(static_cast<std::size_t>((h + 1) * dimension));
    for (int v = 0; v <= h; ++v) {
      for (int g = 0; g < dimension; ++g) {
        coeffs[static_cast<std::size_t>(v * dimension + g)] =
            boost::rational_cast<double>(r.vertex[static_cast<std::size_t>(v)].coeffs[static_cast<std::size_t>(g)]);
      }
    }
  }

  // Integrand at the generating point u; nu is scratch of size h+1.
  int evaluate(const double* u, double* nu, SignWeight weight) const {
    for (int v = 0; v <= h; ++v) {
      const double* row = &coeffs[static_cast<std::size_t>(v * dimension)];
      double s = 0.0;
      for (int g = 0; g < dimension; ++g) s += row[g] * u[g];
      nu[v] = s;
    }
    for (const int v : constrained) {
      if (nu[v] < 0.0 || nu[v] > 1.0) return 0;
    }
    return sign_weight(weight, std::span<const double>(nu, static_cast<std::size_t>(h + 1)));
  }
};

struct Tally {
  std::int64_t sum = 0;
  std::int64_t nonzero = 0;  // f^2 summed; f takes values in {-1, 0, 1}
  std::uint64_t count = 0;
};

Tally run_batch(const CompiledRelations& rel, SignWeight weight, std::uint64_t seed,
                std::uint64_t batch, std::uint64_t count) {
  std::mt19937_64 rng(mix_seed(seed, batch));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> u(static_cast<std::size_t>(rel.dimension));
  std::vector<double> nu(static_cast<std::size_t>(rel.h + 1));
  Tally t;
  for (std::uint64_t s = 0; s < count; ++s) {
    for (auto& x : u) x = unit(rng);
    const int f = rel.evaluate(u.data(), nu.data(), weight);
    t.sum += f;
    t.nonzero += f * f;
  }
  t.count = count;
  return t;
}

struct CellResult {
  double mean = 0.0;
  double variance = 0.0;
};

CellResult run_cell(const CompiledRelations& rel, SignWeight weight, std::uint64_t seed,
                    std::uint64_t cell, std::uint64_t per_cell) {
  std::mt19937_64 rng(mix_seed(seed, cell));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offset(static_cast<std::size_t>(rel.dimension));
  std::uint64_t code = cell;
  for (auto& o : offset) {
    o = static_cast<double>(code % kStrataPerAxis) / kStrataPerAxis;
    code /= kStrataPerAxis;
  }
  std::vector<double> u(offset.size());
  std::vector<double> nu(static_cast<std::size_t>(rel.h + 1));
  std::int64_t sum = 0, sq = 0;
  for (std::uint64_t s = 0; s < per_cell; ++s) {
    for (std::size_t g = 0; g < u.size(); ++g) u[g] = offset[g] + unit(rng) / kStrataPerAxis;
    const int f = rel.evaluate(u.data(), nu.data(), weight);
    sum += f;
    sq += f * f;
  }
  const double m = static_cast<double>(per_cell);
  CellResult r;
  r.mean = static_cast<double>(sum) / m;
  r.variance = std::max(0.0, (static_cast<double>(sq) / m - r.mean * r.mean) * m / (m - 1.0));
  return r;
}

IntegralEstimate finish_mc(const std::vector<Tally>& tallies) {
  Tally total;
  for (const auto& t : tallies) {
    total.sum += t.sum;
    total.nonzero += t.nonzero;
    total.count += t.count;
  }
  const double n = static_cast<double>(total.count);
  const double mean = static_cast<double>(total.sum) / n;
  const double var = std::max(0.0, (static_cast<double>(total.nonzero) / n - mean * mean) * n / (n - 1.0));
  IntegralEstimate e;
  e.value = mean;
  e.std_error = std::sqrt(var / n);
  e.sample_count = total.count;
  e.method = IntegrationMethod::MonteCarlo;
  return e;
}

IntegralEstimate finish_stratified(const std::vector<CellResult>& cells, std::uint64_t per_cell) {
  const double c = static_cast<double>(cells.size());
  double value = 0.0, var = 0.0;
  for (const auto& r : cells) {
    value += r.mean / c;
    var += r.variance / static_cast<double>(per_cell) / (c * c);
  }
  IntegralEstimate e;
  e.value = value;
  e.std_error = std::sqrt(var);
  e.sample_count = per_cell * cells.size();
  e.method = IntegrationMethod::Stratified;
  return e;
}

std::uint64_t cell_count(int dimension) {
  std::uint64_t c = 1;
  for (int d = 0; d < dimension; ++d) c *= kStrataPerAxis;
  return c;
}

IntegralEstimate integrate(const Word& w, LinkKind kind, SignWeight weight, std::uint64_t samples,
                           std::uint64_t seed, IntegrationMethod method, bool parallel) {
  if (samples < kMinSamples) throw DomainError("word_limit_integral needs at least 10^4 samples");
  const VertexRelations rel = derive_relations(w, kind);
  if (rel.degenerate()) {
    IntegralEstimate e;
    e.method = IntegrationMethod::Exact;
    return e;
  }
  const CompiledRelations compiled(rel);
  IntegralEstimate est;
  if (method == IntegrationMethod::Stratified) {
    const std::uint64_t cells = cell_count(compiled.dimension);
    const std::uint64_t per_cell = std::max<std::uint64_t>(2, samples / cells);
    std::vector<CellResult> results(cells);
    const auto count = static_cast<std::int64_t>(cells);
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_count()) if (parallel)
    for (std::int64_t c = 0; c < count; ++c) {
      results[static_cast<std::size_t>(c)] =
          run_cell(compiled, weight, seed, static_cast<std::uint64_t>(c), per_cell);
    }
    est = finish_stratified(results, per_cell);
  } else if (method == IntegrationMethod::MonteCarlo) {
    const std::uint64_t batches = (samples + kBatchSize - 1) / kBatchSize;
    std::vector<Tally> tallies(batches);
    const auto count = static_cast<std::int64_t>(batches);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count()) if (parallel)
    for (std::int64_t b = 0; b < count; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const std::uint64_t n = std::min(kBatchSize, samples - ub * kBatchSize);
      tallies[ub] = run_batch(compiled, weight, seed, ub, n);
    }
    est = finish_mc(tallies);
  } else {
    throw DomainError("exact integration is only available for degenerate relation systems");
  }
  if (weight == SignWeight::Skew && w.half_length() % 2 == 1) est.value = -est.value;
  return est;
}

}  // namespace

VertexRelations derive_relations(const Word& w, LinkKind kind) {
  if (kind == LinkKind::Wigner || kind == LinkKind::PalindromicToeplitz) {
    throw UnsupportedOperation("no affine vertex relations for " + to_string(kind));
  }
  if (!w.is_pair_matched()) throw DomainError("derive_relations needs a pair-matched word");
  const int h = w.length();

  VertexRelations r;
  r.word = w;
  r.kind = kind;
  r.zero_branch_only = kind == LinkKind::SymmetricCirculant || kind == LinkKind::ReverseCirculant;
  r.generating.push_back(0);
  for (int i = 1; i <= h; ++i) {
    if (w.is_first_occurrence(i)) r.generating.push_back(i);
  }
  const std::size_t dim = r.generating.size();

  r.vertex.assign(static_cast<std::size_t>(h + 1), AffineForm(dim));
  r.vertex[0] = AffineForm::variable(dim, 0);
  std::size_t next_var = 1;
  for (int i = 1; i <= h; ++i) {
    if (w.is_first_occurrence(i)) {
      r.vertex[static_cast<std::size_t>(i)] = AffineForm::variable(dim, next_var++);
      continue;
    }
    const int p = w.partner(i);
    const AffineForm& prev = r.vertex[static_cast<std::size_t>(i - 1)];
    const AffineForm& a = r.vertex[static_cast<std::size_t>(p - 1)];
    const AffineForm& b = r.vertex[static_cast<std::size_t>(p)];
    // sum links: nu_{i-1} + nu_i = nu_{p-1} + nu_p; difference links: nu_i - nu_{i-1} = -(nu_p - nu_{p-1})
    AffineForm derived = is_sum_link(kind) ? (a + b) - prev : (prev + a) - b;
    if (i == h) {
      r.closure_defect = derived - r.vertex[0];
      r.vertex[static_cast<std::size_t>(h)] = r.vertex[0];
    } else {
      r.vertex[static_cast<std::size_t>(i)] = std::move(derived);
      r.constrained.push_back(i);
    }
  }
  return r;
}

int sign_weight(SignWeight weight, std::span<const double> nu) {
  int flips = 0;
  switch (weight) {
    case SignWeight::Unit:
      return 1;
    case SignWeight::Skew:
      for (std::size_t j = 1; j < nu.size(); ++j) flips += nu[j - 1] < nu[j] ? 1 : 0;
      break;
    case SignWeight::Modified:
      for (std::size_t j = 1; j < nu.size(); ++j) flips += nu[j - 1] + nu[j] > 1.0 ? 1 : 0;
      break;
  }
  return flips % 2 == 0 ? 1 : -1;
}

IntegralEstimate word_limit_integral(const Word& w, LinkKind kind, SignWeight weight,
                                     std::uint64_t samples, std::uint64_t seed,
                                     IntegrationMethod method) {
  return integrate(w, kind, weight, samples, seed, method, true);
}

IntegralEstimate word_limit_integral_serial(const Word& w, LinkKind kind, SignWeight weight,
                                            std::uint64_t samples, std::uint64_t seed,
                                            IntegrationMethod method) {
  return integrate(w, kind, weight, samples, seed, method, false);
}

std::vector<IntegrationBound> region_lower_bound_bounds() {
  constexpr std::size_t vars = 4;  // nu0..nu3
  const auto nu = [](std::size_t i) { return AffineForm::variable(vars, i); };
  const auto c = [](Rational v) { return AffineForm::constant_form(vars, v); };
  const Rational half(1, 2);
  return {
      {3, nu(2), c(1) + nu(0) - nu(2)},
      {2, c(1) - nu(1), half * (c(1) + nu(0))},
      {1, nu(0), c(half)},
      {0, c(Rational(1, 3)), c(half)},
  };
}

Rational region_lower_bound_exact() {
  const auto bounds = region_lower_bound_bounds();
  return iterated_integral(4, bounds);
}

IntegralEstimate region_lower_bound_check(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 100'000) throw DomainError("region_lower_bound_check needs at least 10^5 samples");
  const double lo[4] = {1.0 / 3.0, 1.0 / 3.0, 0.5, 0.5};
  const double hi[4] = {0.5, 0.5, 0.75, 1.0};
  double box = 1.0;
  for (int d = 0; d < 4; ++d) box *= hi[d] - lo[d];

  const std::uint64_t batches = (samples + kBatchSize - 1) / kBatchSize;
  std::vector<std::uint64_t> hits(batches, 0);
  const auto count = static_cast<std::int64_t>(batches);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (std::int64_t b = 0; b < count; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const std::uint64_t n = std::min(kBatchSize, samples - ub * kBatchSize);
    std::mt19937_64 rng(mix_seed(seed, ub));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t local = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
      double v[4];
      for (int d = 0; d < 4; ++d) v[d] = lo[d] + (hi[d] - lo[d]) * unit(rng);
      const bool inside = v[0] <= v[1] && v[2] >= 1.0 - v[1] && v[2] <= 0.5 * (1.0 + v[0]) &&
                          v[3] >= v[2] && v[3] <= 1.0 + v[0] - v[2];
      local += inside ? 1 : 0;
    }
    hits[ub] = local;
  }
  std::uint64_t total = 0;
  for (const auto h : hits) total += h;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(total) / n;
  IntegralEstimate e;
  e.value = box * p;
  e.std_error = box * std::sqrt(p * (1.0 - p) / (n - 1.0));
  e.sample_count = samples;
  e.method = IntegrationMethod::MonteCarlo;
  return e;
}

IntegralEstimate skew_hankel_sixth_limit(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 100'000) throw DomainError("skew_hankel_sixth_limit needs at least 10^5 samples");
  return word_limit_integral(Word("abcabc"), LinkKind::Hankel, SignWeight::Skew, samples, seed);
}

std::string to_string(SignWeight weight) {
  switch (weight) {
    case SignWeight::Unit: return "unit";
    case SignWeight::Skew: return "skew";
    case SignWeight::Modified: return "modified";
  }
  return "?";
}

std::string to_string(IntegrationMethod method) {
  switch (method) {
    case IntegrationMethod::MonteCarlo: return "MC";
    case IntegrationMethod::Stratified: return "stratified";
    case IntegrationMethod::Exact: return "exact";
  }
  return "?";
}

SignWeight parse_sign_weight(std::string_view name) {
  if (name == "unit" || name == "unsigned" || name == "none") return SignWeight::Unit;
  if (name == "skew" || name == "g") return SignWeight::Skew;
  if (name == "modified") return SignWeight::Modified;
  throw DomainError("unknown sign weight '" + std::string(name) + "'");
}

}  // namespace spectra_lab
