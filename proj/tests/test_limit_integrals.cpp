#include <doctest.h>

#include <cmath>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/limit_integrals.hpp"

using namespace spectra_lab;

namespace {

AffineForm var(const VertexRelations& r, std::size_t g) { return AffineForm::variable(r.generating.size(), g); }

// vertex forms satisfy every matched step of the word, exactly
void check_symbolic(const Word& w, LinkKind kind) {
  const auto r = derive_relations(w, kind);
  const int h = w.length();
  for (int i = 1; i <= h; ++i) {
    const int p = w.partner(i);
    if (p <= i) continue;
    if (p == h && r.degenerate()) continue;
    const auto& v = r.vertex;
    if (kind == LinkKind::Hankel || kind == LinkKind::ReverseCirculant) {
      REQUIRE(v[i - 1] + v[i] == v[p - 1] + v[p]);
    } else {
      REQUIRE(v[i] - v[i - 1] == v[p - 1] - v[p]);
    }
  }
  for (std::size_t g = 0; g < r.generating.size(); ++g) REQUIRE(r.vertex[r.generating[g]] == var(r, g));
  REQUIRE(r.vertex.front() == r.vertex.back());
}

}  // namespace

TEST_CASE("relations examples") {
  const auto h = derive_relations(Word("abcabc"), LinkKind::Hankel);
  REQUIRE(h.generating == std::vector<int>{0, 1, 2, 3});
  CHECK(h.vertex[4] == var(h, 0) + var(h, 1) - var(h, 3));
  CHECK(h.vertex[5] == var(h, 2) + var(h, 3) - var(h, 0));
  CHECK_FALSE(h.degenerate());

  const auto t = derive_relations(Word("abab"), LinkKind::Toeplitz);
  REQUIRE(t.generating == std::vector<int>{0, 1, 2});
  CHECK(t.vertex[3] == var(t, 0) - var(t, 1) + var(t, 2));
  CHECK(t.constrained == std::vector<int>{3});

  const auto a = derive_relations(Word("aabb"), LinkKind::Hankel);
  CHECK(a.vertex[2] == a.vertex[0]);
  CHECK(a.vertex[4] == a.vertex[2]);
  CHECK_FALSE(a.degenerate());

  CHECK(derive_relations(Word("abab"), LinkKind::Hankel).degenerate());
  CHECK(derive_relations(Word("abab"), LinkKind::ReverseCirculant).zero_branch_only);
  CHECK_THROWS_AS(derive_relations(Word("abab"), LinkKind::Wigner), UnsupportedOperation);
  CHECK_THROWS_AS(derive_relations(Word("abab"), LinkKind::PalindromicToeplitz), UnsupportedOperation);
}

TEST_CASE("relations satisfy the match rule symbolically") {
  for (int k = 1; k <= 4; ++k) {
    for (const auto& w : enumerate_pair_matched(k)) {
      for (const LinkKind kind : {LinkKind::Hankel, LinkKind::Toeplitz, LinkKind::SymmetricCirculant,
                                  LinkKind::ReverseCirculant}) {
        CAPTURE(w.letters());
        CAPTURE(to_string(kind));
        check_symbolic(w, kind);
      }
    }
  }
}

TEST_CASE("sign weights") {
  const std::vector<double> up_down{0.1, 0.5, 0.2, 0.1};
  CHECK(sign_weight(SignWeight::Unit, up_down) == 1);
  CHECK(sign_weight(SignWeight::Skew, up_down) == -1);
  const std::vector<double> sums{0.6, 0.7, 0.2, 0.9};
  CHECK(sign_weight(SignWeight::Modified, sums) == 1);
  const std::vector<double> one{0.6, 0.7, 0.2};
  CHECK(sign_weight(SignWeight::Modified, one) == -1);
}

TEST_CASE("iterated integration") {
  const std::vector<IntegrationBound> tri{
      {1, AffineForm(2), AffineForm::variable(2, 0)},
      {0, AffineForm(2), AffineForm::constant_form(2, Rational{1})},
  };
  CHECK(iterated_integral(2, tri) == Rational(1, 2));

  // simplex 0 <= x2 <= x1 <= x0 <= 1
  const std::vector<IntegrationBound> simplex{
      {2, AffineForm(3), AffineForm::variable(3, 1)},
      {1, AffineForm(3), AffineForm::variable(3, 0)},
      {0, AffineForm(3), AffineForm::constant_form(3, Rational{1})},
  };
  CHECK(iterated_integral(3, simplex) == Rational(1, 6));

  CHECK(region_lower_bound_exact() == Rational(19, 62208));
}

TEST_CASE("region check by Monte Carlo") {
  const auto e = region_lower_bound_check(1'000'000, 2024);
  const double exact = 19.0 / 62208.0;
  CHECK(e.std_error > 0.0);
  CHECK(std::abs(e.value - exact) <= 3.0 * e.std_error);
  CHECK_THROWS_AS(region_lower_bound_check(1000, 1), DomainError);
}

TEST_CASE("word limits by Monte Carlo") {
  const std::uint64_t n = 1'000'000;
  const auto t = word_limit_integral(Word("abab"), LinkKind::Toeplitz, SignWeight::Unit, n, 2024);
  CHECK(std::abs(t.value - 2.0 / 3.0) <= 3.0 * t.std_error);
  const auto tm = word_limit_integral(Word("abab"), LinkKind::Toeplitz, SignWeight::Modified, n, 2024);
  CHECK(std::abs(tm.value - 2.0 / 9.0) <= 3.0 * tm.std_error);
  const double ratio_err = (tm.value / t.value) * std::hypot(tm.std_error / tm.value, t.std_error / t.value);
  CHECK(std::abs(tm.value / t.value - 1.0 / 3.0) <= 3.0 * ratio_err);

  const auto h = word_limit_integral(Word("abcabc"), LinkKind::Hankel, SignWeight::Unit, n, 2024);
  CHECK(std::abs(h.value - 0.5) <= 3.0 * h.std_error);
  const auto hs = skew_hankel_sixth_limit(n, 2024);
  CHECK(hs.value + 3.0 * hs.std_error < 0.5);
  CHECK(hs.value >= -1.0);
  CHECK(std::abs(hs.value) <= h.value + 3.0 * (h.std_error + hs.std_error));

  const auto st = word_limit_integral(Word("abab"), LinkKind::Toeplitz, SignWeight::Unit, n, 7, IntegrationMethod::Stratified);
  CHECK(st.method == IntegrationMethod::Stratified);
  CHECK(std::abs(st.value - 2.0 / 3.0) <= 3.0 * st.std_error);
}

TEST_CASE("Catalan words integrate to one") {
  for (const char* w : {"aabb", "abba", "aabbcc"}) {
    for (const LinkKind kind : {LinkKind::Hankel, LinkKind::Toeplitz}) {
      const auto e = word_limit_integral(Word(w), kind, SignWeight::Unit, 100'000, 3);
      CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("weighted integrals are bounded by the unsigned one") {
  for (int k = 2; k <= 3; ++k) {
    for (const auto& w : enumerate_pair_matched(k)) {
      for (const LinkKind kind : {LinkKind::Hankel, LinkKind::Toeplitz}) {
        const auto u = word_limit_integral(w, kind, SignWeight::Unit, 200'000, 11);
        for (const auto wt : {SignWeight::Skew, SignWeight::Modified}) {
          const auto s = word_limit_integral(w, kind, wt, 200'000, 11);
          CAPTURE(w.letters());
          CHECK(std::abs(s.value) <= u.value + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("degenerate systems are exactly zero") {
  const auto e = word_limit_integral(Word("abab"), LinkKind::Hankel, SignWeight::Unit, 100'000, 1);
  CHECK(e.value == 0.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.method == IntegrationMethod::Exact);
}

TEST_CASE("reproducible for any thread layout") {
  const Word w("abcabc");
  const auto a = word_limit_integral(w, LinkKind::Hankel, SignWeight::Skew, 300'000, 99);
  const auto b = word_limit_integral(w, LinkKind::Hankel, SignWeight::Skew, 300'000, 99);
  const auto s = word_limit_integral_serial(w, LinkKind::Hankel, SignWeight::Skew, 300'000, 99);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.value == s.value);
  CHECK(a.std_error == s.std_error);
  const auto c = word_limit_integral(w, LinkKind::Hankel, SignWeight::Skew, 300'000, 100);
  CHECK(a.value != c.value);

  const auto sa = word_limit_integral(w, LinkKind::Hankel, SignWeight::Unit, 300'000, 5, IntegrationMethod::Stratified);
  const auto ss = word_limit_integral_serial(w, LinkKind::Hankel, SignWeight::Unit, 300'000, 5, IntegrationMethod::Stratified);
  CHECK(sa.value == ss.value);

  CHECK_THROWS_AS(word_limit_integral(w, LinkKind::Hankel, SignWeight::Unit, 100, 1), DomainError);
}

TEST_CASE("weight names") {
  for (const auto wt : {SignWeight::Unit, SignWeight::Skew, SignWeight::Modified}) CHECK(parse_sign_weight(to_string(wt)) == wt);
  CHECK(to_string(IntegrationMethod::Stratified) == "stratified");
}
