#pragma once

#include "srkit/multi_index.hpp"
#include "srkit/rational.hpp"
#include "srkit/weights.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srkit {

/// Sparse multivariate polynomial over Q in n variables z_1..z_n.
///
/// Terms are kept in graded-lexicographic order and zero coefficients are never stored,
/// so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational, GradedLex>;

  explicit Polynomial(std::size_t n = 0) : dim_(n) {}

  static Polynomial constant(std::size_t n, const Rational& c);
  static Polynomial variable(std::size_t n, std::size_t i);
  static Polynomial monomial(MultiIndex mu, const Rational& c);

  std::size_t dim() const noexcept { return dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  /// Coefficient of z^mu (zero when absent).
  Rational coefficient(const MultiIndex& mu) const;
  /// Largest total degree; -1 for the zero polynomial.
  int total_degree() const;

  /// Adds c·z^mu in place, dropping the term if it cancels.
  void add_term(const MultiIndex& mu, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

  Polynomial pow(unsigned k) const;
  Polynomial derivative(std::size_t i) const;
  /// ∂^nu.
  Polynomial derivative(const MultiIndex& nu) const;

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

  /// p(q_1, ..., q_n); every q_i must share one dimension, which becomes the result's.
  Polynomial substitute(const std::vector<Polynomial>& q) const;
  /// z -> z + shift.
  Polynomial translate(std::span<const Rational> shift) const;
  /// Embeds into more variables (new variables appended, unused).
  Polynomial extend(std::size_t n) const;

  /// p / q when q divides p exactly; nullopt otherwise.
  std::optional<Polynomial> divide_exact(const Polynomial& q) const;

  /// Leading term under the graded-lex order (largest term).
  std::pair<MultiIndex, Rational> leading_term() const;

 private:
  void require_same_dim(const Polynomial& o) const;

  std::size_t dim_;
  TermMap terms_;
};

/// Weighted degree d when every monomial has Σ μ_i w_i = d; nullopt when inhomogeneous.
/// Throws for the zero polynomial, which has no degree.
std::optional<int> weighted_degree(const Polynomial& p, const WeightVector& w);

/// Splits p into weighted-homogeneous parts keyed by degree.
std::map<int, Polynomial> homogeneous_parts(const Polynomial& p, const WeightVector& w);

/// All monomials z^mu (coefficient 1) of weighted degree exactly d, in graded-lex order.
std::vector<MultiIndex> monomials_of_weighted_degree(const WeightVector& w, int d);

}  // namespace srkit
