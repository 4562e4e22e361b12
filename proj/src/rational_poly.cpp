#include "spectra_lab/rational_poly.hpp"

#include <sstream>

#include "spectra_lab/errors.hpp"

namespace spectra_lab {

AffineForm AffineForm::variable(std::size_t vars, std::size_t index) {
  AffineForm f(vars);
  f.coeffs.at(index) = 1;
  return f;
}

AffineForm AffineForm::constant_form(std::size_t vars, Rational value) {
  AffineForm f(vars);
  f.constant = value;
  return f;
}

bool AffineForm::is_zero() const {
  if (constant.numerator() != 0) return false;
  for (const auto& c : coeffs) {
    if (c.numerator() != 0) return false;
  }
  return true;
}

double AffineForm::evaluate(std::span<const double> x) const {
  double v = boost::rational_cast<double>(constant);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].numerator() != 0) v += boost::rational_cast<double>(coeffs[i]) * x[i];
  }
  return v;
}

std::string AffineForm::to_string(std::span<const std::string> names) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Rational c = coeffs[i];
    if (c.numerator() == 0) continue;
    const bool negative = c.numerator() < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? "-" : "+");
    }
    if (mag != Rational{1}) os << mag.numerator() << (mag.denominator() != 1 ? "/" + std::to_string(mag.denominator()) : "") << "*";
    os << names[i];
    first = false;
  }
  if (constant.numerator() != 0 || first) {
    const bool negative = constant.numerator() < 0;
    if (!first) os << (negative ? "-" : "+");
    else if (negative) os << "-";
    const Rational mag = negative ? -constant : constant;
    os << mag.numerator();
    if (mag.denominator() != 1) os << "/" << mag.denominator();
  }
  return os.str();
}

AffineForm operator+(AffineForm a, const AffineForm& b) {
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs.at(i);
  a.constant += b.constant;
  return a;
}

AffineForm operator-(AffineForm a, const AffineForm& b) {
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] -= b.coeffs.at(i);
  a.constant -= b.constant;
  return a;
}

AffineForm operator*(Rational s, AffineForm a) {
  for (auto& c : a.coeffs) c *= s;
  a.constant *= s;
  return a;
}

Polynomial Polynomial::constant(std::size_t vars, Rational value) {
  Polynomial p(vars);
  p.add_term(std::vector<int>(vars, 0), value);
  return p;
}

Polynomial Polynomial::from_affine(const AffineForm& form) {
  Polynomial p = constant(form.coeffs.size(), form.constant);
  for (std::size_t i = 0; i < form.coeffs.size(); ++i) {
    std::vector<int> e(form.coeffs.size(), 0);
    e[i] = 1;
    p.add_term(e, form.coeffs[i]);
  }
  return p;
}

void Polynomial::add_term(const std::vector<int>& exponents, Rational c) {
  if (c.numerator() == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, c);
  if (!inserted) {
    it->second += c;
    if (it->second.numerator() == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  for (const auto& [e, c] : terms_) {
    for (const int p : e) {
      if (p != 0) return false;
    }
  }
  return true;
}

Rational Polynomial::constant_term() const {
  const auto it = terms_.find(std::vector<int>(vars_, 0));
  return it == terms_.end() ? Rational{0} : it->second;
}

Polynomial Polynomial::antiderivative(std::size_t var) const {
  Polynomial out(vars_);
  for (const auto& [key, c] : terms_) {
    std::vector<int> e = key;
    e[var] += 1;
    out.add_term(e, c / Rational(e[var]));
  }
  return out;
}

Polynomial Polynomial::substitute(std::size_t var, const AffineForm& value) const {
  const Polynomial v = from_affine(value);
  Polynomial out(vars_);
  for (const auto& [key, c] : terms_) {
    std::vector<int> e = key;
    const int power = e[var];
    e[var] = 0;
    Polynomial term(vars_);
    term.add_term(e, c);
    for (int p = 0; p < power; ++p) term = term * v;
    out = out + term;
  }
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      std::vector<int> e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Rational iterated_integral(std::size_t vars, std::span<const IntegrationBound> innermost_first) {
  Polynomial integrand = Polynomial::constant(vars, Rational{1});
  for (const auto& bound : innermost_first) {
    const Polynomial anti = integrand.antiderivative(bound.var);
    integrand = anti.substitute(bound.var, bound.upper) - anti.substitute(bound.var, bound.lower);
  }
  if (!integrand.is_constant()) {
    throw DomainError("iterated integral left free variables; bounds are not nested");
  }
  return integrand.constant_term();
}

}  // namespace spectra_lab
