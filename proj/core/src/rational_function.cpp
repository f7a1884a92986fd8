#include "srkit/rational_function.hpp"

#include "srkit/error.hpp"

#include <algorithm>

namespace srkit {

RationalFunction::RationalFunction(std::size_t n) : num_(n), den_(Polynomial::constant(n, 1)) {}

RationalFunction::RationalFunction(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(num_.dim(), 1)) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.dim() != den_.dim()) throw DimensionMismatch("numerator and denominator dimensions differ");
  if (den_.is_zero()) throw Error("rational function with zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  const std::size_t n = dim();
  if (num_.is_zero()) {
    den_ = Polynomial::constant(n, 1);
    return;
  }
  // Cancel the largest common monomial factor.
  MultiIndex common(n, 1 << 30);
  for (const auto* p : {&num_, &den_})
    for (const auto& [mu, c] : p->terms())
      for (std::size_t i = 0; i < n; ++i) common[i] = std::min(common[i], mu[i]);
  if (std::any_of(common.begin(), common.end(), [](int e) { return e > 0; })) {
    auto strip = [&](const Polynomial& p) {
      Polynomial r(n);
      for (const auto& [mu, c] : p.terms()) {
        MultiIndex m = mu;
        for (std::size_t i = 0; i < n; ++i) m[i] -= common[i];
        r.add_term(m, c);
      }
      return r;
    };
    num_ = strip(num_);
    den_ = strip(den_);
  }
  if (!den_.is_constant()) {
    if (auto q = num_.divide_exact(den_)) {
      num_ = std::move(*q);
      den_ = Polynomial::constant(n, 1);
    } else if (auto r = den_.divide_exact(num_)) {
      den_ = std::move(*r);
      num_ = Polynomial::constant(n, 1);
    }
  }
  Rational lead = den_.leading_term().second;
  if (lead != 1) {
    Rational inv = Rational(1) / lead;
    num_ *= inv;
    den_ *= inv;
  }
}

std::optional<Polynomial> RationalFunction::as_polynomial() const {
  if (!den_.is_constant()) return std::nullopt;
  return num_ * (Rational(1) / den_.constant_term());
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error("division by the zero rational function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  if (dim() != o.dim()) return false;
  return num_ * o.den_ == o.num_ * den_;
}

RationalFunction RationalFunction::derivative(std::size_t i) const {
  if (den_.is_constant()) return {num_.derivative(i), den_};
  return {num_.derivative(i) * den_ - num_ * den_.derivative(i), den_ * den_};
}

bool RationalFunction::has_pole_at(std::span<const Rational> x) const { return den_.evaluate(x) == 0; }

Rational RationalFunction::evaluate(std::span<const Rational> x) const {
  Rational d = den_.evaluate(x);
  if (d == 0) throw Error("rational function has a pole at the evaluation point");
  return num_.evaluate(x) / d;
}

}  // namespace srkit
