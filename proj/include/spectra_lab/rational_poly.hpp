#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace spectra_lab {

using Rational = boost::rational<std::int64_t>;

// c_0 x_0 + ... + c_{m-1} x_{m-1} + constant, exact rational coefficients.
struct AffineForm {
  std::vector<Rational> coeffs;
  Rational constant{0};

  AffineForm() = default;
  explicit AffineForm(std::size_t vars) : coeffs(vars, Rational{0}) {}

  static AffineForm variable(std::size_t vars, std::size_t index);
  static AffineForm constant_form(std::size_t vars, Rational value);

  bool is_zero() const;
  double evaluate(std::span<const double> x) const;
  std::string to_string(std::span<const std::string> names) const;

  friend AffineForm operator+(AffineForm a, const AffineForm& b);
  friend AffineForm operator-(AffineForm a, const AffineForm& b);
  friend AffineForm operator*(Rational s, AffineForm a);
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

// Sparse multivariate polynomial with rational coefficients.
class Polynomial {
 public:
  explicit Polynomial(std::size_t vars) : vars_(vars) {}
  static Polynomial constant(std::size_t vars, Rational value);
  static Polynomial from_affine(const AffineForm& form);

  std::size_t vars() const noexcept { return vars_; }
  bool is_constant() const;
  Rational constant_term() const;

  Polynomial antiderivative(std::size_t var) const;
  // Replaces x_var by the affine form everywhere.
  Polynomial substitute(std::size_t var, const AffineForm& value) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void add_term(const std::vector<int>& exponents, Rational c);

  std::size_t vars_;
  std::map<std::vector<int>, Rational> terms_;
};

struct IntegrationBound {
  std::size_t var = 0;
  AffineForm lower;
  AffineForm upper;
};

// Integral of 1 over the region, with bounds listed innermost first; the bounds of a
// variable may only depend on variables integrated later.
Rational iterated_integral(std::size_t vars, std::span<const IntegrationBound> innermost_first);

}  // namespace spectra_lab
