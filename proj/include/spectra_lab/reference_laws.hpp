#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectra_lab/matrix_core.hpp"
#include "spectra_lab/word_engine.hpp"

namespace spectra_lab {

// Exact even moments. k >= 1; DomainError if the value does not fit in 64 bits.
std::int64_t semicircle_moment(int two_k);  // Catalan number C_k
std::int64_t gaussian_moment(int two_k);    // (2k-1)!!
std::int64_t rc_moment(int two_k);          // k!

enum class LawKind { Semicircle, StandardGaussian, ReverseCirculant, WordSum };

struct ReferenceLaw {
  LawKind kind = LawKind::Semicircle;

  // WordSum only: beta_2, beta_4, ... from word limits.
  LinkKind link = LinkKind::Toeplitz;
  SignKind sign = SignKind::Unsigned;
  std::vector<double> even_moments;
  std::vector<double> uncertainties;
  std::vector<std::string> provenance;
  bool complete = true;

  static ReferenceLaw of(LawKind k) {
    ReferenceLaw law;
    law.kind = k;
    return law;
  }
  static ReferenceLaw semicircle() { return of(LawKind::Semicircle); }
  static ReferenceLaw gaussian() { return of(LawKind::StandardGaussian); }
  static ReferenceLaw reverse_circulant() { return of(LawKind::ReverseCirculant); }

  // h-th moment; odd moments are 0.
  double moment(int h) const;
  std::string name() const;
};

// Semicircle on [-2, 2], standard normal, and the law with density |x| exp(-x^2).
// WordSum laws have no CDF: UnsupportedOperation.
double reference_cdf(const ReferenceLaw& law, double x);
double reference_density(const ReferenceLaw& law, double x);

// beta_{2k} = sum over W_{2k} of the word limits (integral route), for 2k <= 2*k_max.
ReferenceLaw word_sum_moments(LinkKind kind, SignKind sign, int k_max, const WordLimitOptions& options = {});

// S_K = sum_{k <= K} beta_{2k}^{-1/(2k)} for K = 1..size.
std::vector<double> carleman_partial_sums(std::span<const double> even_moments);
std::vector<double> even_moments_of(const ReferenceLaw& law, int k_max);

ReferenceLaw parse_reference_law(std::string_view name);

// The law the ESD is known to approach, when there is one with a CDF.
std::optional<ReferenceLaw> default_reference(LinkKind kind, std::span<const SignModifier> modifiers);

}  // namespace spectra_lab
