#pragma once

#include "srkit/checks.hpp"
#include "srkit/frame.hpp"
#include "srkit/weights.hpp"

#include <string>
#include <vector>

namespace srkit {

/// δ_λ(z) = (λ^{w_1} z_1, ..., λ^{w_n} z_n).
struct Dilation {
  WeightVector weights;
  Rational factor;

  Dilation(WeightVector w, Rational lambda);
  Point apply(std::span<const Rational> z) const;
};

Point dilate_point(const Dilation& d, std::span<const Rational> z);

/// X^ε = ε (δ_{1/ε})_* X, computed by substituting z_j -> ε^{w_j} z_j in each component and
/// scaling the i-th component by ε^{1 − w_i}.
VectorField pushforward_rescaled(const VectorField& x, const WeightVector& w, const Rational& eps);

/// Symbolic form of pushforward_rescaled with ε as an extra (last) variable. Throws when some
/// component would carry a negative power of ε (coordinates not adapted to w).
VectorField pushforward_rescaled_symbolic(const VectorField& x, const WeightVector& w);

/// True iff X^ε − X̂ is divisible by ε as a polynomial identity in (z, ε).
bool exact_convergence_witness(const VectorField& x, const WeightVector& w);

/// X̂_i = degree −1 component of X_i. Throws if some X_i has no such component or has a
/// component of degree below −1 (the ε-limit would not exist).
SRFrame nilpotent_approximation(const SRFrame& f, const WeightVector& w);

struct PrivilegedCheck {
  bool privileged = false;
  std::string reason;
};

/// Privileged-coordinate test used throughout: the truncated frame must be bracket-generating
/// at the origin. Frames whose truncation does not exist are reported as not privileged.
PrivilegedCheck verify_privileged(const SRFrame& f, const WeightVector& w);

/// Q = Σ w_i.
int homogeneous_dimension(const WeightVector& w);

struct AlgebraElement {
  VectorField field;
  std::string label;
};

using Stratum = std::vector<AlgebraElement>;

struct StratifiedAlgebra {
  WeightVector weights;
  std::size_t step = 0;
  /// g_strata[i] is a basis of 𝔤^{i+1}.
  std::vector<Stratum> g_strata;
  /// h_strata[i] is a basis of 𝔥^{i+1} = {X ∈ 𝔤^{i+1} : X|_0 = 0}.
  std::vector<Stratum> h_strata;
  int homogeneous_dimension = 0;
  /// k_1 = dim 𝔤¹|_0.
  std::size_t k1 = 0;

  std::vector<std::size_t> g_dims() const;
  std::vector<std::size_t> h_dims() const;
};

std::vector<VectorField> fields_of(const Stratum& s);

/// Label of Σ c_k basis_k written with the basis labels, e.g. "X1 - (1/2)*[X1,X2]".
std::string combination_label(const Stratum& basis, const std::vector<Rational>& c);

/// 𝔤 = Lie(F̂) graded by homogeneity, with 𝔤^{i+1} spanned by [𝔤¹, 𝔤^i]. Requires F̂ to be
/// homogeneous of degree −1 and bracket-generating at 0.
StratifiedAlgebra stratified_algebra(const SRFrame& nilpotent_frame, const WeightVector& w, std::size_t max_step = 16);

/// Degree, vanishing, codimension, grading-closure and 𝔥-generation checks on a computed algebra.
CheckList check_strata_invariants(const StratifiedAlgebra& alg);

}  // namespace srkit
