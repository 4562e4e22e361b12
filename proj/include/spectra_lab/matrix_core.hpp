#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spectra_lab {

enum class LinkKind {
  Wigner,
  Toeplitz,
  Hankel,
  SymmetricCirculant,
  ReverseCirculant,
  PalindromicToeplitz,
};

// Entrywise masks applied to a patterned matrix. Masks multiply, so the order of a
// modifier list does not change the matrix.
enum class SignModifier {
  None,
  Skew,             // s_ij = +1 above the diagonal, -1 below, 0 on it
  Modified,         // m_ij = +1 / 0 / -1 as i+j is below / on / above n+1
  TriangularUpper,  // keeps i+j <= n+1
};

// All three have mean 0 and variance 1.
enum class InputDistribution { Rademacher, StandardGaussian, UniformSymmetric };

enum class Symmetry { Symmetric, SkewSymmetric };

// Value of the link function. Wigner links are the ordered pair (min, max); every
// other kind is a single integer stored in `primary` with `secondary == -1`.
struct LinkKey {
  std::int64_t primary = 0;
  std::int64_t secondary = -1;

  bool is_pair() const noexcept { return secondary >= 0; }
  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

struct EnsembleSpec {
  LinkKind kind = LinkKind::Wigner;
  std::vector<SignModifier> modifiers;
  int n = 1;
  InputDistribution dist = InputDistribution::Rademacher;
  std::uint64_t seed = 0;
};

struct PatternedMatrix {
  Eigen::MatrixXd entries;
  Symmetry symmetry = Symmetry::Symmetric;

  int n() const noexcept { return static_cast<int>(entries.rows()); }
};

// L(i, j) for 1 <= i, j <= n.
LinkKey link_value(LinkKind kind, int n, int i, int j);

int skew_sign(int i, int j);
int modified_sign(int n, int i, int j);
int triangular_mask(int n, int i, int j);

// Product of the masks of every modifier at (i, j).
int modifier_mask(std::span<const SignModifier> modifiers, int n, int i, int j);

bool has_modifier(std::span<const SignModifier> modifiers, SignModifier m) noexcept;

// x_key for a given seed. A pure function of (dist, seed, key), so the realized value
// does not depend on the order in which matrix entries are visited.
double input_value(InputDistribution dist, std::uint64_t seed, LinkKey key) noexcept;

// x_0, ..., x_{count-1}.
std::vector<double> draw_input(InputDistribution dist, std::uint64_t seed, std::size_t count);

// Entries mask(i,j) * x_{L(i,j)} without the n^{-1/2} scale.
Eigen::MatrixXd build_unscaled(const EnsembleSpec& spec);

// n^{-1/2} * mask(i,j) * x_{L(i,j)}; tagged SkewSymmetric iff the modifiers contain Skew.
PatternedMatrix build_matrix(const EnsembleSpec& spec);

std::string to_string(LinkKind kind);
std::string to_string(SignModifier modifier);
std::string to_string(InputDistribution dist);
std::string to_string(Symmetry symmetry);

// Accepts the names printed by to_string plus short aliases (sc, rc, pt, gaussian, ...).
LinkKind parse_link_kind(std::string_view name);
SignModifier parse_sign_modifier(std::string_view name);
InputDistribution parse_input_distribution(std::string_view name);

std::vector<LinkKind> all_link_kinds();

}  // namespace spectra_lab
