#pragma once

#include "srkit/polynomial.hpp"

#include <optional>

namespace srkit {

/// Quotient of two polynomials over Q.
///
/// Normalization is partial: the denominator is made monic-leading, common monomial factors
/// are cancelled and exact polynomial quotients are detected. Equality is decided by
/// cross-multiplication, so it never depends on reaching a reduced form.
class RationalFunction {
 public:
  explicit RationalFunction(std::size_t n = 0);
  RationalFunction(Polynomial num);  // NOLINT(google-explicit-constructor): polynomials embed.
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction constant(std::size_t n, const Rational& c) { return {Polynomial::constant(n, c)}; }

  std::size_t dim() const noexcept { return num_.dim(); }
  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// The polynomial this equals, when the denominator is constant.
  std::optional<Polynomial> as_polynomial() const;

  RationalFunction operator-() const { return {-num_, den_}; }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  bool operator==(const RationalFunction& o) const;

  RationalFunction derivative(std::size_t i) const;

  /// Throws when the denominator vanishes at x.
  Rational evaluate(std::span<const Rational> x) const;
  bool has_pole_at(std::span<const Rational> x) const;

 private:
  void normalize();

  Polynomial num_;
  Polynomial den_;
};

}  // namespace srkit
