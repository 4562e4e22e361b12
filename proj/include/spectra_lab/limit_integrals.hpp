#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectra_lab/matrix_core.hpp"
#include "spectra_lab/rational_poly.hpp"
#include "spectra_lab/words.hpp"

namespace spectra_lab {

// Affine description of a word's circuits in the scaled variables nu_i = pi(i)/n.
// The generating vertices are free in [0,1]; every other vertex is an affine form in
// them and must also land in [0,1].
struct VertexRelations {
  Word word;
  LinkKind kind = LinkKind::Hankel;
  std::vector<int> generating;       // vertex indices, ascending; generating[g] is variable g
  std::vector<AffineForm> vertex;    // size h+1, over the generating variables
  std::vector<int> constrained;      // non-generating vertices in 1..h-1
  // What the match relations force nu_h - nu_0 to be. Non-zero means the closure
  // nu_h = nu_0 cuts the cube to a null set.
  AffineForm closure_defect;
  // SymmetricCirculant / ReverseCirculant: only the zero-offset branch is described.
  bool zero_branch_only = false;

  bool degenerate() const { return !closure_defect.is_zero(); }
  int dimension() const { return static_cast<int>(generating.size()); }
};

enum class SignWeight {
  Unit,      // plain volume
  Skew,      // g(nu) = (-1)^{#{j : nu_{j-1} < nu_j}}, with the (-1)^k prefix
  Modified,  // (-1)^{#{i : nu_{i-1} + nu_i > 1}}
};

enum class IntegrationMethod { MonteCarlo, Stratified, Exact };

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t sample_count = 0;
  IntegrationMethod method = IntegrationMethod::MonteCarlo;
};

// Hankel / ReverseCirculant: nu_{i-1} + nu_i equal on matched steps.
// Toeplitz / SymmetricCirculant: nu_i - nu_{i-1} opposite on matched steps.
// Throws UnsupportedOperation for Wigner and PalindromicToeplitz.
VertexRelations derive_relations(const Word& w, LinkKind kind);

// Sign weight of one full vertex sequence nu_0..nu_h (without the (-1)^k prefix).
int sign_weight(SignWeight weight, std::span<const double> nu);

// Monte Carlo (or 8-strata-per-axis stratified) estimate of the word limit. Batches and
// strata are seeded by mix_seed(seed, index), so the result is bit-identical for any
// thread count. Degenerate relation systems give exactly 0.
IntegralEstimate word_limit_integral(const Word& w, LinkKind kind, SignWeight weight,
                                     std::uint64_t samples, std::uint64_t seed,
                                     IntegrationMethod method = IntegrationMethod::MonteCarlo);
IntegralEstimate word_limit_integral_serial(const Word& w, LinkKind kind, SignWeight weight,
                                            std::uint64_t samples, std::uint64_t seed,
                                            IntegrationMethod method = IntegrationMethod::MonteCarlo);

// The iterated integral
//   int_{1/3}^{1/2} int_{nu0}^{1/2} int_{1-nu1}^{(1+nu0)/2} int_{nu2}^{1+nu0-nu2} dnu3 dnu2 dnu1 dnu0
// bounding the g = +1 part of the skew Hankel abcabc region from below.
Rational region_lower_bound_exact();
std::vector<IntegrationBound> region_lower_bound_bounds();
// MC over the box [1/3,1/2]^2 x [1/2,3/4] x [1/2,1] that contains the region.
IntegralEstimate region_lower_bound_check(std::uint64_t samples, std::uint64_t seed);

// Skew Hankel limit of "abcabc".
IntegralEstimate skew_hankel_sixth_limit(std::uint64_t samples, std::uint64_t seed);

std::string to_string(SignWeight weight);
std::string to_string(IntegrationMethod method);
SignWeight parse_sign_weight(std::string_view name);

}  // namespace spectra_lab
