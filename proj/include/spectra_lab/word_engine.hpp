#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectra_lab/matrix_core.hpp"
#include "spectra_lab/words.hpp"

namespace spectra_lab {

// Which circuits count as realizing a word. For steps i < j with w[i] = w[j]:
//   ExactL        L(pi(i-1), pi(i)) = L(pi(j-1), pi(j))
//   ToeplitzSum   s(i) + s(j) = 0
//   CirculantSum  s(i) + s(j) in {0, n, -n}
enum class MatchRelation { ExactL, ToeplitzSum, CirculantSum };

enum class SignKind { Unsigned, Skew, Modified };

// pi(0..h) with pi(h) = pi(0), vertices in 1..n.
struct Circuit {
  std::vector<int> pi;

  int length() const noexcept { return static_cast<int>(pi.size()) - 1; }
  int s(int i) const { return pi[static_cast<std::size_t>(i)] - pi[static_cast<std::size_t>(i - 1)]; }
  int t(int i) const { return pi[static_cast<std::size_t>(i)] + pi[static_cast<std::size_t>(i - 1)]; }
  int u(int i, int n) const { return t(i) - (n + 1); }
  bool loopless() const noexcept;
  int skew_sign() const;
  int modified_sign(int n) const;
};

struct SignedCount {
  std::int64_t raw = 0;
  std::int64_t loopless = 0;
  std::int64_t signed_skew = 0;
  std::int64_t signed_modified = 0;

  friend bool operator==(const SignedCount&, const SignedCount&) = default;
};

inline constexpr double kDefaultCircuitBudget = 5e9;

// n^{k+1} * fanout^k for a pair-matched word of length 2k.
double estimated_states(const Word& w, MatchRelation relation, LinkKind kind, int n);

// Exhaustive count over all circuits of w. Throws ResourceError if estimated_states
// exceeds `budget`. Parallel over pi(0); the result does not depend on the thread count.
SignedCount count_circuits(const Word& w, MatchRelation relation, LinkKind kind, int n,
                           double budget = kDefaultCircuitBudget);
SignedCount count_circuits_serial(const Word& w, MatchRelation relation, LinkKind kind, int n,
                                  double budget = kDefaultCircuitBudget);

// Calls `visit` for every circuit of w (serial; meant for small n).
void for_each_circuit(const Word& w, MatchRelation relation, LinkKind kind, int n,
                      const std::function<void(const Circuit&)>& visit,
                      double budget = kDefaultCircuitBudget);

// Unsigned: raw / n^{1+k}; Skew: (-1)^k signed_skew / n^{1+k}; Modified: signed_modified / n^{1+k}.
double p_from_count(const SignedCount& c, SignKind sign, int k, int n);
double p_estimate(const Word& w, MatchRelation relation, LinkKind kind, SignKind sign, int n,
                  double budget = kDefaultCircuitBudget);

struct Extrapolation {
  std::vector<int> ladder;
  std::vector<double> values;  // p_estimate at each rung
  double limit = 0.0;          // p in the least-squares fit p + c/n
  double slope = 0.0;          // c
  double residual = 0.0;       // max |fit - value| over the ladder
};

Extrapolation extrapolate_p(const Word& w, MatchRelation relation, LinkKind kind, SignKind sign,
                            std::span<const int> ladder, double budget = kDefaultCircuitBudget);
// Least-squares fit of p + c/n to given values.
Extrapolation fit_inverse_n(std::span<const int> ladder, std::span<const double> values);

struct SignAudit {
  Word word;
  LinkKind kind = LinkKind::Wigner;
  int n = 0;
  MatchRelation relation = MatchRelation::ExactL;
  std::string claim;
  bool asserted = true;  // false: the claim is reported, not checked (modified RC, even n)
  std::int64_t circuits_checked = 0;
  std::int64_t counterexample_count = 0;
  std::vector<std::vector<int>> counterexamples;  // first few, as pi(0..h)
  std::int64_t sign_plus = 0;   // circuits checked with sign +1
  std::int64_t sign_minus = 0;  // and -1
};

// Wigner (Catalan words, Pi*): s_pi = (-1)^k when loopless, 0 otherwise.
// Toeplitz (Pi**): s_pi = (-1)^k on loopless circuits.
// SymmetricCirculant (Pi'): e_pi even and s_pi = (-1)^{k - e_pi} on loopless circuits.
// ReverseCirculant with the modified mask (Pi*): m_pi = 1 on circuits with m_pi != 0 when
// n is odd; for even n only the split of m_pi is reported.
SignAudit circuit_sign_audit(const Word& w, LinkKind kind, int n, std::size_t max_examples = 10);

// (-1)^{k*skew} n^{-(1+k)} sum over all n^{2k} circuits of mask(pi) E a_pi for Rademacher
// inputs, with E a_pi = 1 iff every link value along pi occurs an even number of times.
// Equals E trace_moment(build_matrix(spec), 2k) exactly. Brute force: n^{2k} <= 1e8.
double exact_expected_moment(LinkKind kind, std::span<const SignModifier> modifiers, int n, int two_k);

// Word limits that follow from structure alone (Catalan words, symmetric words, ...).
// Returns nothing where the value needs a computation.
struct KnownLimit {
  double value = 0.0;
  std::string provenance;
};
std::optional<KnownLimit> known_word_limit(const Word& w, LinkKind kind, SignKind sign);

enum class LimitMethod { FiniteN, Integral };

struct WordContribution {
  Word word;
  bool available = false;
  double value = 0.0;
  double uncertainty = 0.0;  // 3 sigma for MC, fit residual for FiniteN, 0 when exact
  std::string provenance;
};

struct WordLimitOptions {
  std::vector<int> ladder{8, 16, 32};
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 2024;
  double budget = kDefaultCircuitBudget;
};

struct MomentFromWords {
  LinkKind kind = LinkKind::Wigner;
  SignKind sign = SignKind::Unsigned;
  int order = 0;
  double value = 0.0;
  double uncertainty = 0.0;
  bool complete = true;
  std::vector<WordContribution> words;
};

// Sum of p(w) over the pair-matched words of length 2k. Words whose limit is not available
// by the chosen method are listed with available = false and make the result incomplete.
MomentFromWords limiting_moment_via_words(LinkKind kind, SignKind sign, int two_k, LimitMethod method,
                                          const WordLimitOptions& options = {});

std::string to_string(MatchRelation relation);
std::string to_string(SignKind sign);
std::string to_string(LimitMethod method);
MatchRelation parse_match_relation(std::string_view name);
SignKind parse_sign_kind(std::string_view name);

}  // namespace spectra_lab
