#pragma once

#include "srkit/diffop.hpp"
#include "srkit/rational_function.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace srkit {

/// Ordered family F = {X_1, ..., X_N} of polynomial vector fields on R^n.
class SRFrame {
 public:
  SRFrame(std::string name, std::vector<VectorField> fields);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return fields_.size(); }
  const std::vector<VectorField>& fields() const noexcept { return fields_; }
  const VectorField& operator[](std::size_t i) const { return fields_[i]; }

  /// The same structure in coordinates centred at x (z -> z + x).
  SRFrame centred_at(std::span<const Rational> x) const;
  /// Columns X_i|_x as an n×N matrix.
  std::vector<std::vector<Rational>> matrix_at(std::span<const Rational> x) const;

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<VectorField> fields_;
};

/// Right-nested bracket word I = (i_1, ..., i_k) ↦ X_I = [X_{i_1}, [X_{i_2}, ..., X_{i_k}]].
using BracketWord = std::vector<int>;

std::string to_string(const BracketWord& w);

/// Evaluates bracket words of a frame, caching every intermediate bracket.
class BracketCache {
 public:
  explicit BracketCache(const SRFrame& frame) : frame_(frame) {}
  const VectorField& field(const BracketWord& word);

 private:
  const SRFrame& frame_;
  std::map<BracketWord, VectorField> cache_;
};

/// Bracket words of length exactly k over N letters, lexicographic order.
std::vector<BracketWord> words_of_length(std::size_t letters, std::size_t k);

struct Filtration {
  Point base;
  /// k_1(x), ..., k_s(x).
  std::vector<std::size_t> dims;
  std::size_t step = 0;
  /// bases[i] spans D_x^{i+1}; words are kept cumulatively, shorter and lex-smaller first.
  std::vector<std::vector<BracketWord>> bases;
  bool bracket_generating = false;
  /// True when the search stopped at max_depth without reaching dimension n.
  bool depth_limited = false;
};

/// D_x^i = span{X_I|_x : |I| ≤ i}, computed until it reaches R^n or max_depth.
/// With require_generating the depth-limited outcome is an error.
Filtration filtration_at(const SRFrame& f, std::span<const Rational> x, std::size_t max_depth,
                         bool require_generating = false);

bool is_bracket_generating(const SRFrame& f, std::span<const Rational> x, std::size_t max_depth);

enum class PointClass { regular, singular, inconclusive };
std::string to_string(PointClass c);

struct Classification {
  PointClass verdict = PointClass::inconclusive;
  Filtration at_point;
  std::vector<Point> probes;
  /// Index into probes of the first probe whose filtration differs, when singular.
  std::optional<std::size_t> differing_probe;
  std::optional<Filtration> differing_filtration;
};

/// Compares the filtration at x with those at seeded rational probes within probe_radius
/// (sup-norm). "singular" is certified by an exact difference; "regular" is sampling evidence.
Classification classify_point(const SRFrame& f, std::span<const Rational> x, const Rational& probe_radius,
                              std::size_t probe_count, std::uint64_t seed, std::size_t max_depth = 0);

/// ∇u = Σ (X_i u) X_i.
VectorField gradient(const SRFrame& f, const Polynomial& u);
/// ‖∇u‖² = Σ (X_i u)².
Polynomial grad_norm_sq(const SRFrame& f, const Polynomial& u);
/// g(∇u, ∇v) = Σ X_i u · X_i v, for functions given as rational functions.
RationalFunction grad_inner(const SRFrame& f, const RationalFunction& u, const RationalFunction& v);
/// Δu = Σ (X_i² u + X_i u · div_m X_i).
RationalFunction sub_laplacian(const SRFrame& f, const RationalFunction& u, const Density& m);

struct MinimalControl {
  std::vector<Rational> control;
  /// |u*|², which is ‖v‖_x².
  Rational norm_sq;
};

/// Least-norm u* with Σ u_i X_i|_x = v; throws "not horizontal" if v ∉ D_x.
MinimalControl minimal_control(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& v);

/// Frame inner product g_x(v, w) = ⟨u*_v, u*_w⟩ of two horizontal vectors.
Rational frame_inner(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& v,
                     const std::vector<Rational>& w);

/// H(λ) = ½ Σ ⟨λ, X_i|_x⟩².
Rational hamiltonian(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& covector);
/// λ^♯ = Σ ⟨λ, X_i|_x⟩ X_i|_x.
std::vector<Rational> sharp(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& covector);

}  // namespace srkit
