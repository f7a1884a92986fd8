#pragma once

#include "srkit/polynomial.hpp"
#include "srkit/rational_function.hpp"
#include "srkit/weights.hpp"

#include <map>
#include <optional>
#include <vector>

namespace srkit {

/// Linear differential operator Σ_ν a_ν(z) ∂^ν with polynomial coefficients.
///
/// Canonical form: at most one term per derivative multi-index ν and no zero coefficients.
/// Coefficients act by multiplication after differentiation (normal ordering).
class DifferentialOperator {
 public:
  using TermMap = std::map<MultiIndex, Polynomial, GradedLex>;

  explicit DifferentialOperator(std::size_t n = 0) : dim_(n) {}

  static DifferentialOperator identity(std::size_t n);
  static DifferentialOperator partial(std::size_t n, std::size_t i);
  static DifferentialOperator multiplication(const Polynomial& a);
  /// a·∂^ν.
  static DifferentialOperator term(const Polynomial& a, const MultiIndex& nu);

  std::size_t dim() const noexcept { return dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Highest |ν|; -1 for the zero operator.
  int order() const;
  bool is_vector_field() const;
  Polynomial coefficient(const MultiIndex& nu) const;

  void add_term(const MultiIndex& nu, const Polynomial& a);

  DifferentialOperator operator-() const;
  DifferentialOperator& operator+=(const DifferentialOperator& o);
  DifferentialOperator& operator-=(const DifferentialOperator& o);
  friend DifferentialOperator operator+(DifferentialOperator a, const DifferentialOperator& b) { return a += b; }
  friend DifferentialOperator operator-(DifferentialOperator a, const DifferentialOperator& b) { return a -= b; }
  /// Left multiplication by a polynomial or scalar.
  friend DifferentialOperator operator*(const Polynomial& a, const DifferentialOperator& p);
  friend DifferentialOperator operator*(const Rational& c, const DifferentialOperator& p);
  bool operator==(const DifferentialOperator& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

  DifferentialOperator translate(std::span<const Rational> shift) const;

 private:
  void require_same_dim(const DifferentialOperator& o) const;

  std::size_t dim_;
  TermMap terms_;
};

/// (P∘Q) via the general Leibniz rule.
DifferentialOperator compose(const DifferentialOperator& p, const DifferentialOperator& q);
/// PQ − QP.
DifferentialOperator commutator(const DifferentialOperator& p, const DifferentialOperator& q);
Polynomial apply(const DifferentialOperator& p, const Polynomial& f);
RationalFunction apply(const DifferentialOperator& p, const RationalFunction& f);

/// Components keyed by weighted degree Σ(μ_i − ν_i)w_i of each addend z^μ ∂^ν.
std::map<int, DifferentialOperator> homogeneous_components(const DifferentialOperator& p, const WeightVector& w);
/// Weighted degree when homogeneous, nullopt otherwise; throws for the zero operator.
std::optional<int> operator_degree(const DifferentialOperator& p, const WeightVector& w);

/// First-order operator Σ a_i ∂_i with no zeroth-order part.
class VectorField {
 public:
  explicit VectorField(std::size_t n = 0) : components_(n, Polynomial(n)) {}
  explicit VectorField(std::vector<Polynomial> components);
  /// Throws if p is not a vector field.
  static VectorField from_operator(const DifferentialOperator& p);
  static VectorField coordinate(std::size_t n, std::size_t i);

  std::size_t dim() const noexcept { return components_.size(); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }
  bool is_zero() const;

  DifferentialOperator to_operator() const;
  /// Value at x as a coordinate vector.
  std::vector<Rational> at(std::span<const Rational> x) const;
  Polynomial apply(const Polynomial& f) const;
  RationalFunction apply(const RationalFunction& f) const;

  VectorField operator-() const;
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const Polynomial& a, const VectorField& x);
  friend VectorField operator*(const Rational& c, const VectorField& x);
  bool operator==(const VectorField& o) const { return components_ == o.components_; }

  VectorField translate(std::span<const Rational> shift) const;

 private:
  std::vector<Polynomial> components_;
};

/// Lie bracket computed from components: [X,Y]_k = X(Y_k) − Y(X_k).
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Density m = ρ·Lebesgue described by ∂_i log ρ for each coordinate.
struct Density {
  std::vector<RationalFunction> log_gradient;

  static Density lebesgue(std::size_t n);
  bool is_lebesgue() const;
};

/// div_m X = Σ ∂_i a_i + Σ a_i ∂_i log ρ.
RationalFunction divergence(const VectorField& x, const Density& m);

}  // namespace srkit
