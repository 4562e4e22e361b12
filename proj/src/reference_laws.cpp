#include "spectra_lab/reference_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spectra_lab/errors.hpp"

namespace spectra_lab {
namespace {

int half_order(int two_k) {
  if (two_k < 2 || two_k % 2 != 0) throw DomainError("moment order must be positive and even");
  return two_k / 2;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("moment does not fit in 64 bits");
  return out;
}

}  // namespace

std::int64_t semicircle_moment(int two_k) {
  const int k = half_order(two_k);
  // C_{j+1} = C_j * 2(2j+1) / (j+2), exact at every step
  std::int64_t c = 1;
  for (int j = 0; j < k; ++j) c = checked_mul(c, 2 * (2 * j + 1)) / (j + 2);
  return c;
}

std::int64_t gaussian_moment(int two_k) {
  const int k = half_order(two_k);
  std::int64_t m = 1;
  for (int j = 1; j <= 2 * k - 1; j += 2) m = checked_mul(m, j);
  return m;
}

std::int64_t rc_moment(int two_k) {
  const int k = half_order(two_k);
  std::int64_t m = 1;
  for (int j = 2; j <= k; ++j) m = checked_mul(m, j);
  return m;
}

double ReferenceLaw::moment(int h) const {
  if (h < 0) throw DomainError("negative moment order");
  if (h == 0) return 1.0;
  if (h % 2 != 0) return 0.0;
  switch (kind) {
    case LawKind::Semicircle: return static_cast<double>(semicircle_moment(h));
    case LawKind::StandardGaussian: return static_cast<double>(gaussian_moment(h));
    case LawKind::ReverseCirculant: return static_cast<double>(rc_moment(h));
    case LawKind::WordSum: {
      const auto idx = static_cast<std::size_t>(h / 2 - 1);
      if (idx >= even_moments.size()) throw DomainError("word-sum law has no moment of order " + std::to_string(h));
      return even_moments[idx];
    }
  }
  return 0.0;
}

std::string ReferenceLaw::name() const {
  switch (kind) {
    case LawKind::Semicircle: return "semicircle";
    case LawKind::StandardGaussian: return "gaussian";
    case LawKind::ReverseCirculant: return "rc";
    case LawKind::WordSum: return "word-sum(" + to_string(link) + "," + to_string(sign) + ")";
  }
  return "?";
}

double reference_cdf(const ReferenceLaw& law, double x) {
  switch (law.kind) {
    case LawKind::Semicircle:
      if (x <= -2.0) return 0.0;
      if (x >= 2.0) return 1.0;
      return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
    case LawKind::StandardGaussian:
      return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    case LawKind::ReverseCirculant:
      return x < 0.0 ? 0.5 * std::exp(-x * x) : 1.0 - 0.5 * std::exp(-x * x);
    case LawKind::WordSum:
      throw UnsupportedOperation("word-sum laws are known through their moments only");
  }
  return 0.0;
}

double reference_density(const ReferenceLaw& law, double x) {
  switch (law.kind) {
    case LawKind::Semicircle:
      return std::abs(x) >= 2.0 ? 0.0 : std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
    case LawKind::StandardGaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case LawKind::ReverseCirculant:
      return std::abs(x) * std::exp(-x * x);
    case LawKind::WordSum:
      throw UnsupportedOperation("word-sum laws are known through their moments only");
  }
  return 0.0;
}

ReferenceLaw word_sum_moments(LinkKind kind, SignKind sign, int k_max, const WordLimitOptions& options) {
  if (k_max < 1) throw DomainError("k_max must be positive");
  ReferenceLaw law;
  law.kind = LawKind::WordSum;
  law.link = kind;
  law.sign = sign;
  for (int k = 1; k <= k_max; ++k) {
    const MomentFromWords m = limiting_moment_via_words(kind, sign, 2 * k, LimitMethod::Integral, options);
    law.even_moments.push_back(m.value);
    law.uncertainties.push_back(m.uncertainty);
    std::string prov;
    for (const auto& w : m.words) {
      if (!prov.empty()) prov += "; ";
      prov += w.word.letters() + ": " + (w.available ? w.provenance : "missing (" + w.provenance + ")");
    }
    law.provenance.push_back(std::move(prov));
    law.complete = law.complete && m.complete;
  }
  return law;
}

std::vector<double> carleman_partial_sums(std::span<const double> even_moments) {
  std::vector<double> out;
  double s = 0.0;
  for (std::size_t i = 0; i < even_moments.size(); ++i) {
    const double two_k = 2.0 * static_cast<double>(i + 1);
    if (even_moments[i] <= 0.0) throw DomainError("even moments must be positive");
    s += std::pow(even_moments[i], -1.0 / two_k);
    out.push_back(s);
  }
  return out;
}

std::vector<double> even_moments_of(const ReferenceLaw& law, int k_max) {
  std::vector<double> out;
  for (int k = 1; k <= k_max; ++k) {
    // lgamma keeps large orders finite where the exact integers overflow
    switch (law.kind) {
      case LawKind::Semicircle:
        out.push_back(std::exp(std::lgamma(2.0 * k + 1) - std::lgamma(k + 1.0) - std::lgamma(k + 2.0)));
        break;
      case LawKind::StandardGaussian:
        out.push_back(std::exp(std::lgamma(2.0 * k + 1) - std::lgamma(k + 1.0) - k * std::numbers::ln2));
        break;
      case LawKind::ReverseCirculant:
        out.push_back(std::exp(std::lgamma(k + 1.0)));
        break;
      case LawKind::WordSum:
        out.push_back(law.moment(2 * k));
        break;
    }
  }
  return out;
}

ReferenceLaw parse_reference_law(std::string_view name) {
  if (name == "semicircle") return ReferenceLaw::semicircle();
  if (name == "gaussian" || name == "normal") return ReferenceLaw::gaussian();
  if (name == "rc" || name == "reverse-circulant") return ReferenceLaw::reverse_circulant();
  throw DomainError("unknown reference law '" + std::string(name) + "'");
}

std::optional<ReferenceLaw> default_reference(LinkKind kind, std::span<const SignModifier> modifiers) {
  const bool skew = has_modifier(modifiers, SignModifier::Skew);
  const bool modified = has_modifier(modifiers, SignModifier::Modified);
  const bool triangular = has_modifier(modifiers, SignModifier::TriangularUpper);
  if (triangular) return std::nullopt;
  switch (kind) {
    case LinkKind::Wigner:
      if (!modified) return ReferenceLaw::semicircle();
      break;
    case LinkKind::SymmetricCirculant:
    case LinkKind::PalindromicToeplitz:
      if (!modified) return ReferenceLaw::gaussian();
      break;
    case LinkKind::ReverseCirculant:
      if (!skew) return ReferenceLaw::reverse_circulant();
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace spectra_lab
