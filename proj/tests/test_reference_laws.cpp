#include <doctest.h>

#include <cmath>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/reference_laws.hpp"

using namespace spectra_lab;

namespace {

// composite Simpson on [0, b]
double simpson(const std::function<double(double)>& f, double b, int m) {
  const double step = b / m;
  double s = f(0.0) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * step);
  return s * step / 3.0;
}

}  // namespace

TEST_CASE("exact moments") {
  CHECK(semicircle_moment(2) == 1);
  CHECK(semicircle_moment(4) == 2);
  CHECK(semicircle_moment(6) == 5);
  CHECK(gaussian_moment(2) == 1);
  CHECK(gaussian_moment(4) == 3);
  CHECK(gaussian_moment(6) == 15);
  CHECK(rc_moment(2) == 1);
  CHECK(rc_moment(4) == 2);
  CHECK(rc_moment(6) == 6);
  CHECK_THROWS_AS(semicircle_moment(3), DomainError);
  CHECK_THROWS_AS(gaussian_moment(0), DomainError);
  CHECK_THROWS_AS(rc_moment(100), DomainError);
}

TEST_CASE("moments equal the word counts") {
  for (int k = 1; k <= 6; ++k) {
    std::int64_t all = 0, cat = 0, sym = 0;
    for (const auto& w : enumerate_pair_matched(k)) {
      ++all;
      cat += is_catalan(w) ? 1 : 0;
      sym += is_symmetric_word(w) ? 1 : 0;
    }
    CHECK(gaussian_moment(2 * k) == all);
    CHECK(semicircle_moment(2 * k) == cat);
    CHECK(rc_moment(2 * k) == sym);
  }
}

TEST_CASE("reference CDFs") {
  CHECK(reference_cdf(ReferenceLaw::semicircle(), 0.0) == doctest::Approx(0.5));
  CHECK(reference_cdf(ReferenceLaw::semicircle(), 2.0) == 1.0);
  CHECK(reference_cdf(ReferenceLaw::semicircle(), -2.5) == 0.0);
  CHECK(reference_cdf(ReferenceLaw::gaussian(), 0.0) == doctest::Approx(0.5));
  CHECK(reference_cdf(ReferenceLaw::gaussian(), 1.0) == doctest::Approx(0.8413447460685429));
  CHECK(reference_cdf(ReferenceLaw::reverse_circulant(), 0.0) == doctest::Approx(0.5));

  // CDF increments against the densities
  for (const auto& law : {ReferenceLaw::semicircle(), ReferenceLaw::gaussian(), ReferenceLaw::reverse_circulant()}) {
    for (const double x : {-1.3, -0.2, 0.4, 1.1}) {
      const double d = (reference_cdf(law, x + 1e-5) - reference_cdf(law, x - 1e-5)) / 2e-5;
      CHECK(d == doctest::Approx(reference_density(law, x)).epsilon(1e-6));
    }
  }

  ReferenceLaw ws = ReferenceLaw::of(LawKind::WordSum);
  CHECK_THROWS_AS(reference_cdf(ws, 0.0), UnsupportedOperation);
  CHECK_THROWS_AS(reference_density(ws, 0.0), UnsupportedOperation);
}

TEST_CASE("reverse circulant moments by quadrature") {
  const auto law = ReferenceLaw::reverse_circulant();
  for (int k = 1; k <= 5; ++k) {
    const auto f = [&](double x) { return 2.0 * std::pow(x, 2 * k) * reference_density(law, x); };
    const double q = simpson(f, 12.0, 200000);
    CHECK(std::abs(q - static_cast<double>(rc_moment(2 * k))) < 1e-8 * rc_moment(2 * k));
    CHECK(law.moment(2 * k) == static_cast<double>(rc_moment(2 * k)));
  }
  CHECK(law.moment(3) == 0.0);
}

TEST_CASE("word sum moments") {
  const auto t = word_sum_moments(LinkKind::Toeplitz, SignKind::Unsigned, 2);
  REQUIRE(t.even_moments.size() == 2);
  CHECK(t.complete);
  CHECK(t.even_moments[0] == 1.0);
  CHECK(std::abs(t.even_moments[1] - 8.0 / 3.0) <= t.uncertainties[1]);

  const auto h = word_sum_moments(LinkKind::Hankel, SignKind::Skew, 3);
  CHECK(h.even_moments[2] + h.uncertainties[2] < 5.5);
  CHECK(h.even_moments[2] > 5.0 - h.uncertainties[2]);

  const auto w = word_sum_moments(LinkKind::Wigner, SignKind::Skew, 3);
  CHECK(w.even_moments == std::vector<double>{1.0, 2.0, 5.0});
  CHECK(w.moment(4) == 2.0);
  CHECK(w.name().find("word-sum") == 0);

  const auto rc = word_sum_moments(LinkKind::ReverseCirculant, SignKind::Skew, 3);
  CHECK_FALSE(rc.complete);
}

TEST_CASE("Carleman partial sums grow") {
  for (const auto& law : {ReferenceLaw::semicircle(), ReferenceLaw::gaussian(), ReferenceLaw::reverse_circulant()}) {
    const auto m = even_moments_of(law, 40);
    const auto s = carleman_partial_sums(m);
    REQUIRE(s.size() == 40);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
    CHECK(s.back() > 4.0);
  }
  const std::vector<double> sc{1.0, 2.0, 5.0};
  const auto s = carleman_partial_sums(sc);
  CHECK(s[2] == doctest::Approx(1.0 + std::pow(2.0, -0.25) + std::pow(5.0, -1.0 / 6.0)));
}

TEST_CASE("default references") {
  const std::vector<SignModifier> skew{SignModifier::Skew};
  const std::vector<SignModifier> tri{SignModifier::TriangularUpper};
  const std::vector<SignModifier> mod{SignModifier::Modified};
  CHECK(default_reference(LinkKind::Wigner, skew)->kind == LawKind::Semicircle);
  CHECK(default_reference(LinkKind::SymmetricCirculant, skew)->kind == LawKind::StandardGaussian);
  CHECK(default_reference(LinkKind::ReverseCirculant, mod)->kind == LawKind::ReverseCirculant);
  CHECK_FALSE(default_reference(LinkKind::ReverseCirculant, skew).has_value());
  CHECK_FALSE(default_reference(LinkKind::Wigner, tri).has_value());
  CHECK_FALSE(default_reference(LinkKind::Toeplitz, {}).has_value());
  CHECK(parse_reference_law("normal").kind == LawKind::StandardGaussian);
  CHECK_THROWS_AS(parse_reference_law("cauchy"), DomainError);
}
