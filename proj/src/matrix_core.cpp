#include "spectra_lab/matrix_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/random.hpp"

namespace spectra_lab {
namespace {

void check_index(int n, int i, int j) {
  if (n < 1 || i < 1 || j < 1 || i > n || j > n) {
    throw DomainError("index (" + std::to_string(i) + "," + std::to_string(j) +
                      ") outside 1.." + std::to_string(n));
  }
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

}  // namespace

LinkKey link_value(LinkKind kind, int n, int i, int j) {
  check_index(n, i, j);
  const std::int64_t d = std::abs(i - j);
  switch (kind) {
    case LinkKind::Wigner:
      return {std::min(i, j), std::max(i, j)};
    case LinkKind::Toeplitz:
      return {d};
    case LinkKind::Hankel:
      return {i + j};
    case LinkKind::SymmetricCirculant:
      // n/2 - |n/2 - |i-j||, kept in integers
      return {std::min<std::int64_t>(d, n - d)};
    case LinkKind::ReverseCirculant:
      return {(i + j) % n};
    case LinkKind::PalindromicToeplitz:
      return {std::min<std::int64_t>(d, n - 1 - d)};
  }
  throw DomainError("unknown link kind");
}

int skew_sign(int i, int j) {
  if (i == j) return 0;
  return i < j ? 1 : -1;
}

int modified_sign(int n, int i, int j) {
  check_index(n, i, j);
  const int s = i + j;
  if (s < n + 1) return 1;
  if (s == n + 1) return 0;
  return -1;
}

int triangular_mask(int n, int i, int j) {
  check_index(n, i, j);
  return i + j <= n + 1 ? 1 : 0;
}

int modifier_mask(std::span<const SignModifier> modifiers, int n, int i, int j) {
  int mask = 1;
  for (const SignModifier m : modifiers) {
    switch (m) {
      case SignModifier::None:
        break;
      case SignModifier::Skew:
        mask *= skew_sign(i, j);
        break;
      case SignModifier::Modified:
        mask *= modified_sign(n, i, j);
        break;
      case SignModifier::TriangularUpper:
        mask *= triangular_mask(n, i, j);
        break;
    }
    if (mask == 0) return 0;
  }
  return mask;
}

bool has_modifier(std::span<const SignModifier> modifiers, SignModifier m) noexcept {
  return std::find(modifiers.begin(), modifiers.end(), m) != modifiers.end();
}

double input_value(InputDistribution dist, std::uint64_t seed, LinkKey key) noexcept {
  std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
  h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(key.primary)));
  h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(key.secondary) + 0x3C6EF372FE94F82BULL));
  switch (dist) {
    case InputDistribution::Rademacher:
      return (h >> 63) ? 1.0 : -1.0;
    case InputDistribution::UniformSymmetric:
      return (2.0 * to_unit_interval(h) - 1.0) * std::numbers::sqrt3;
    case InputDistribution::StandardGaussian: {
      // Box-Muller; u1 is shifted into (0, 1) so the log is finite.
      const double u1 = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
      const double u2 = to_unit_interval(splitmix64(h));
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  return 0.0;
}

std::vector<double> draw_input(InputDistribution dist, std::uint64_t seed, std::size_t count) {
  std::vector<double> x(count);
  for (std::size_t c = 0; c < count; ++c) {
    x[c] = input_value(dist, seed, LinkKey{static_cast<std::int64_t>(c)});
  }
  return x;
}

Eigen::MatrixXd build_unscaled(const EnsembleSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw DomainError("dimension must be positive");
  for (const SignModifier m : {SignModifier::Skew, SignModifier::Modified, SignModifier::TriangularUpper}) {
    if (std::count(spec.modifiers.begin(), spec.modifiers.end(), m) > 1) {
      throw DomainError("modifier " + to_string(m) + " listed more than once");
    }
  }

  // Scalar links take values in [0, 2n]; realize each x once.
  std::vector<double> scalar_inputs;
  if (spec.kind != LinkKind::Wigner) {
    scalar_inputs = draw_input(spec.dist, spec.seed, static_cast<std::size_t>(2 * n + 1));
  }

  Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      const int mask = modifier_mask(spec.modifiers, n, i, j);
      const LinkKey key = link_value(spec.kind, n, i, j);
      const double x = spec.kind == LinkKind::Wigner
                           ? input_value(spec.dist, spec.seed, key)
                           : scalar_inputs[static_cast<std::size_t>(key.primary)];
      a(i - 1, j - 1) = mask == 0 ? 0.0 : mask * x;
    }
  }
  return a;
}

PatternedMatrix build_matrix(const EnsembleSpec& spec) {
  PatternedMatrix m;
  m.entries = build_unscaled(spec) / std::sqrt(static_cast<double>(spec.n));
  m.symmetry = has_modifier(spec.modifiers, SignModifier::Skew) ? Symmetry::SkewSymmetric
                                                                : Symmetry::Symmetric;
  return m;
}

std::string to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::Wigner: return "wigner";
    case LinkKind::Toeplitz: return "toeplitz";
    case LinkKind::Hankel: return "hankel";
    case LinkKind::SymmetricCirculant: return "symmetric-circulant";
    case LinkKind::ReverseCirculant: return "reverse-circulant";
    case LinkKind::PalindromicToeplitz: return "palindromic-toeplitz";
  }
  return "?";
}

std::string to_string(SignModifier modifier) {
  switch (modifier) {
    case SignModifier::None: return "none";
    case SignModifier::Skew: return "skew";
    case SignModifier::Modified: return "modified";
    case SignModifier::TriangularUpper: return "triangular";
  }
  return "?";
}

std::string to_string(InputDistribution dist) {
  switch (dist) {
    case InputDistribution::Rademacher: return "rademacher";
    case InputDistribution::StandardGaussian: return "gaussian";
    case InputDistribution::UniformSymmetric: return "uniform";
  }
  return "?";
}

std::string to_string(Symmetry symmetry) {
  return symmetry == Symmetry::Symmetric ? "symmetric" : "skew-symmetric";
}

LinkKind parse_link_kind(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "wigner" || s == "w") return LinkKind::Wigner;
  if (s == "toeplitz" || s == "t") return LinkKind::Toeplitz;
  if (s == "hankel" || s == "h") return LinkKind::Hankel;
  if (s == "symmetric-circulant" || s == "sc") return LinkKind::SymmetricCirculant;
  if (s == "reverse-circulant" || s == "rc") return LinkKind::ReverseCirculant;
  if (s == "palindromic-toeplitz" || s == "pt") return LinkKind::PalindromicToeplitz;
  throw DomainError("unknown link kind '" + std::string(name) + "'");
}

SignModifier parse_sign_modifier(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "none") return SignModifier::None;
  if (s == "skew") return SignModifier::Skew;
  if (s == "modified") return SignModifier::Modified;
  if (s == "triangular" || s == "triangular-upper") return SignModifier::TriangularUpper;
  throw DomainError("unknown modifier '" + std::string(name) + "'");
}

InputDistribution parse_input_distribution(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "rademacher") return InputDistribution::Rademacher;
  if (s == "gaussian" || s == "normal" || s == "standard-gaussian") return InputDistribution::StandardGaussian;
  if (s == "uniform" || s == "uniform-symmetric") return InputDistribution::UniformSymmetric;
  throw DomainError("unknown input distribution '" + std::string(name) + "'");
}

std::vector<LinkKind> all_link_kinds() {
  return {LinkKind::Wigner,           LinkKind::Toeplitz,         LinkKind::Hankel,
          LinkKind::SymmetricCirculant, LinkKind::ReverseCirculant, LinkKind::PalindromicToeplitz};
}

}  // namespace spectra_lab
