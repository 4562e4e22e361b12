#include <doctest.h>

#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/spectra.hpp"
#include "spectra_lab/word_engine.hpp"

using namespace spectra_lab;

namespace {

bool related(MatchRelation rel, LinkKind kind, int n, const std::vector<int>& pi, int i, int j) {
  const auto step = [&](int s) { return pi[s] - pi[s - 1]; };
  switch (rel) {
    case MatchRelation::ExactL:
      return link_value(kind, n, pi[i - 1], pi[i]) == link_value(kind, n, pi[j - 1], pi[j]);
    case MatchRelation::ToeplitzSum:
      return step(i) + step(j) == 0;
    case MatchRelation::CirculantSum: {
      const int v = step(i) + step(j);
      return v == 0 || v == n || v == -n;
    }
  }
  return false;
}

// every sequence in {1..n}^h, closed up, filtered by the relation
SignedCount brute_count(const Word& w, MatchRelation rel, LinkKind kind, int n) {
  const std::string& s = w.letters();
  const int h = static_cast<int>(s.size());
  SignedCount c;
  std::vector<int> pi(static_cast<std::size_t>(h) + 1, 1);
  while (true) {
    pi[h] = pi[0];
    bool ok = true;
    for (int i = 1; i <= h && ok; ++i) {
      for (int j = i + 1; j <= h && ok; ++j) {
        if (s[i - 1] == s[j - 1]) ok = related(rel, kind, n, pi, i, j);
      }
    }
    if (ok) {
      ++c.raw;
      bool loopless = true;
      std::int64_t sk = 1, md = 1;
      for (int i = 1; i <= h; ++i) {
        loopless = loopless && pi[i] != pi[i - 1];
        sk *= skew_sign(pi[i - 1], pi[i]);
        md *= modified_sign(n, pi[i - 1], pi[i]);
      }
      c.loopless += loopless ? 1 : 0;
      c.signed_skew += sk;
      c.signed_modified += md;
    }
    int d = 0;
    while (d < h && pi[d] == n) pi[d++] = 1;
    if (d == h) break;
    ++pi[d];
  }
  return c;
}

// E over all 2^m sign patterns of the inputs, straight from matrix powers
double rademacher_average(LinkKind kind, const std::vector<SignModifier>& mods, int n, int two_k) {
  std::map<LinkKey, int> index;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) index.emplace(link_value(kind, n, i, j), 0);
  }
  int m = 0;
  for (auto& [key, id] : index) id = m++;
  REQUIRE(m <= 16);
  const bool skew = has_modifier(mods, SignModifier::Skew);
  double total = 0.0;
  for (std::uint32_t pattern = 0; pattern < (1u << m); ++pattern) {
    Eigen::MatrixXd a(n, n);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const int id = index.at(link_value(kind, n, i, j));
        const double x = (pattern >> id) & 1u ? -1.0 : 1.0;
        a(i - 1, j - 1) = modifier_mask(mods, n, i, j) * x / std::sqrt(double(n));
      }
    }
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    for (int r = 0; r < two_k; ++r) p = p * a;
    double tr = p.trace() / n;
    if (skew && (two_k / 2) % 2 == 1) tr = -tr;
    total += tr;
  }
  return total / static_cast<double>(1u << m);
}

}  // namespace

TEST_CASE("count examples") {
  CHECK(count_circuits(Word("abab"), MatchRelation::ExactL, LinkKind::Toeplitz, 2).raw == 8);
  const auto aa = count_circuits(Word("aa"), MatchRelation::ExactL, LinkKind::Wigner, 3);
  CHECK(aa.raw == 9);
  CHECK(aa.signed_skew == -6);
  for (int n = 2; n <= 10; ++n) {
    CHECK(count_circuits(Word("aa"), MatchRelation::ExactL, LinkKind::Wigner, n).signed_skew == -(n * n - n));
    CHECK(p_estimate(Word("aa"), MatchRelation::ExactL, LinkKind::Wigner, SignKind::Skew, n) == double(n - 1) / n);
  }
  CHECK(p_estimate(Word("aa"), MatchRelation::ExactL, LinkKind::Wigner, SignKind::Skew, 3) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("circuit counts agree with brute force") {
  const std::vector<std::string> words{"aa", "aabb", "abab", "abba", "abcabc", "abcbca", "aabbcc"};
  for (const auto rel : {MatchRelation::ExactL, MatchRelation::ToeplitzSum, MatchRelation::CirculantSum}) {
    for (const LinkKind kind : all_link_kinds()) {
      if (rel != MatchRelation::ExactL && kind != LinkKind::Toeplitz) continue;
      for (const auto& letters : words) {
        const Word w(letters);
        for (int n = 1; n <= (w.length() == 6 ? 5 : 7); ++n) {
          CAPTURE(to_string(kind));
          CAPTURE(to_string(rel));
          CAPTURE(letters);
          CAPTURE(n);
          REQUIRE(count_circuits(w, rel, kind, n) == brute_count(w, rel, kind, n));
        }
      }
    }
  }
}

TEST_CASE("parallel and serial counts are identical") {
  for (const LinkKind kind : all_link_kinds()) {
    const Word w("abcabc");
    CHECK(count_circuits(w, MatchRelation::ExactL, kind, 13) == count_circuits_serial(w, MatchRelation::ExactL, kind, 13));
  }
  CHECK(count_circuits(Word("abab"), MatchRelation::CirculantSum, LinkKind::SymmetricCirculant, 31) ==
        count_circuits_serial(Word("abab"), MatchRelation::CirculantSum, LinkKind::SymmetricCirculant, 31));
}

TEST_CASE("for_each_circuit visits what count_circuits counts") {
  const Word w("abba");
  std::int64_t visited = 0, loopless = 0, sk = 0;
  for_each_circuit(w, MatchRelation::ExactL, LinkKind::Hankel, 6, [&](const Circuit& c) {
    ++visited;
    REQUIRE(c.pi.front() == c.pi.back());
    loopless += c.loopless() ? 1 : 0;
    sk += c.skew_sign();
  });
  const auto c = count_circuits(w, MatchRelation::ExactL, LinkKind::Hankel, 6);
  CHECK(visited == c.raw);
  CHECK(loopless == c.loopless);
  CHECK(sk == c.signed_skew);
}

TEST_CASE("budget") {
  const Word w("abcdabcd");
  CHECK(estimated_states(w, MatchRelation::ExactL, LinkKind::Toeplitz, 100) == doctest::Approx(std::pow(100.0, 5) * 16));
  try {
    count_circuits(w, MatchRelation::ExactL, LinkKind::Toeplitz, 100, 1e6);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.attempted_states() > 1e6);
  }
  CHECK_THROWS_AS(p_estimate(w, MatchRelation::ExactL, LinkKind::Toeplitz, SignKind::Unsigned, 1000), ResourceError);
}

TEST_CASE("p estimates trend to their limits") {
  std::vector<double> gaps;
  for (const int n : {10, 20, 40}) {
    gaps.push_back(1.0 - p_estimate(Word("aa"), MatchRelation::ExactL, LinkKind::Wigner, SignKind::Skew, n));
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);

  const std::vector<int> ladder{16, 32, 64};
  const auto ex = extrapolate_p(Word("abab"), MatchRelation::ExactL, LinkKind::Toeplitz, SignKind::Unsigned, ladder);
  CHECK(ex.limit == doctest::Approx(2.0 / 3.0).epsilon(0.01));
  CHECK(ex.values.size() == 3);
}

TEST_CASE("inverse-n fit recovers an exact line") {
  const std::vector<int> ladder{8, 16, 32, 64};
  std::vector<double> values;
  for (const int n : ladder) values.push_back(0.25 - 3.0 / n);
  const auto f = fit_inverse_n(ladder, values);
  CHECK(f.limit == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f.slope == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("sign audits") {
  CHECK(circuit_sign_audit(Word("abab"), LinkKind::Toeplitz, 2).circuits_checked == 0);
  for (int n = 3; n <= 6; ++n) {
    const auto t = circuit_sign_audit(Word("abab"), LinkKind::Toeplitz, n);
    CHECK(t.counterexample_count == 0);
    CHECK(t.circuits_checked > 0);
  }
  const auto sc = circuit_sign_audit(Word("aabb"), LinkKind::SymmetricCirculant, 7);
  CHECK(sc.counterexample_count == 0);
  const auto rc = circuit_sign_audit(Word("abab"), LinkKind::ReverseCirculant, 7);
  CHECK(rc.asserted);
  CHECK(rc.counterexample_count == 0);
  CHECK(rc.sign_minus == 0);
  const auto w = circuit_sign_audit(Word("abba"), LinkKind::Wigner, 5);
  CHECK(w.counterexample_count == 0);
  CHECK_THROWS_AS(circuit_sign_audit(Word("abab"), LinkKind::Wigner, 4), DomainError);
  CHECK_THROWS_AS(circuit_sign_audit(Word("abab"), LinkKind::Hankel, 4), DomainError);
  CHECK_FALSE(circuit_sign_audit(Word("abab"), LinkKind::ReverseCirculant, 6).asserted);
}

TEST_CASE("exact expected moment matches enumeration of all input signs") {
  struct Case {
    LinkKind kind;
    std::vector<SignModifier> mods;
    int n;
    int two_k;
  };
  const std::vector<Case> cases{
      {LinkKind::Toeplitz, {SignModifier::Skew}, 5, 4},
      {LinkKind::Toeplitz, {SignModifier::Modified}, 5, 6},
      {LinkKind::Hankel, {}, 4, 6},
      {LinkKind::Hankel, {SignModifier::Skew}, 5, 4},
      {LinkKind::Wigner, {SignModifier::Skew}, 4, 4},
      {LinkKind::SymmetricCirculant, {SignModifier::Skew}, 6, 4},
      {LinkKind::ReverseCirculant, {SignModifier::Skew, SignModifier::Modified}, 5, 6},
      {LinkKind::PalindromicToeplitz, {SignModifier::TriangularUpper}, 5, 4},
  };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.kind));
    CAPTURE(c.n);
    CAPTURE(c.two_k);
    CHECK(exact_expected_moment(c.kind, c.mods, c.n, c.two_k) ==
          doctest::Approx(rademacher_average(c.kind, c.mods, c.n, c.two_k)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("exact expected moment agrees with sampled trace moments") {
  const std::vector<SignModifier> mods{SignModifier::Skew};
  const int n = 10;
  const double exact = exact_expected_moment(LinkKind::Toeplitz, mods, n, 6);
  const int draws = 3000;
  double sum = 0.0, sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    const double v = trace_moment(build_matrix({LinkKind::Toeplitz, mods, n, InputDistribution::Rademacher,
                                                static_cast<std::uint64_t>(d + 1)}), 6);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - exact) < 4.0 * se);
  CHECK_THROWS_AS(exact_expected_moment(LinkKind::Toeplitz, mods, 40, 6), ResourceError);
}

TEST_CASE("known word limits") {
  CHECK(known_word_limit(Word("abba"), LinkKind::Hankel, SignKind::Skew)->value == 1.0);
  CHECK(known_word_limit(Word("abab"), LinkKind::Wigner, SignKind::Unsigned)->value == 0.0);
  CHECK(known_word_limit(Word("abab"), LinkKind::Hankel, SignKind::Unsigned)->value == 0.0);
  CHECK(known_word_limit(Word("abab"), LinkKind::SymmetricCirculant, SignKind::Skew)->value == 1.0);
  CHECK(known_word_limit(Word("aabb"), LinkKind::ReverseCirculant, SignKind::Modified)->value == 1.0);
  CHECK_FALSE(known_word_limit(Word("abab"), LinkKind::Toeplitz, SignKind::Unsigned).has_value());
  CHECK_FALSE(known_word_limit(Word("abcabc"), LinkKind::Hankel, SignKind::Skew).has_value());
}

TEST_CASE("limiting moments from word sums") {
  const auto wig = limiting_moment_via_words(LinkKind::Wigner, SignKind::Skew, 4, LimitMethod::Integral);
  CHECK(wig.complete);
  CHECK(wig.value == 2.0);
  CHECK(wig.words.size() == 3);

  const auto wig_n = limiting_moment_via_words(LinkKind::Wigner, SignKind::Skew, 4, LimitMethod::FiniteN);
  CHECK(wig_n.complete);
  CHECK(wig_n.value == doctest::Approx(2.0).epsilon(0.02));

  const auto sc = limiting_moment_via_words(LinkKind::SymmetricCirculant, SignKind::Skew, 4, LimitMethod::Integral);
  CHECK(sc.value == 3.0);
  const auto sc_n = limiting_moment_via_words(LinkKind::SymmetricCirculant, SignKind::Skew, 4, LimitMethod::FiniteN);
  CHECK(sc_n.value == doctest::Approx(3.0).epsilon(0.03));

  const auto h = limiting_moment_via_words(LinkKind::Hankel, SignKind::Unsigned, 6, LimitMethod::Integral);
  CHECK(h.complete);
  CHECK(std::abs(h.value - 5.5) <= h.uncertainty);

  WordLimitOptions tight;
  tight.budget = 1e3;
  const auto cut = limiting_moment_via_words(LinkKind::Toeplitz, SignKind::Unsigned, 4, LimitMethod::FiniteN, tight);
  CHECK_FALSE(cut.complete);
  bool listed = false;
  for (const auto& c : cut.words) listed = listed || !c.available;
  CHECK(listed);
}

TEST_CASE("enum names round trip") {
  for (const auto r : {MatchRelation::ExactL, MatchRelation::ToeplitzSum, MatchRelation::CirculantSum}) {
    CHECK(parse_match_relation(to_string(r)) == r);
  }
  for (const auto s : {SignKind::Unsigned, SignKind::Skew, SignKind::Modified}) CHECK(parse_sign_kind(to_string(s)) == s);
  CHECK_THROWS_AS(parse_sign_kind("odd"), DomainError);
}
