#pragma once

#include "srkit/checks.hpp"
#include "srkit/nilpotent.hpp"
#include "srkit/serialize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace srkit {

struct BEDeficitReport {
  std::string frame;
  Polynomial u;
  /// A(u) = ½Δ‖∇u‖² − g(∇u, ∇Δu).
  RationalFunction a;
  /// B(u) = ‖∇u‖².
  Polynomial b;
  /// Σ_{i,j} X_iu (X_ijj u − X_jji u) − (X_ij u)², present when Δ = Σ X_i² (Lebesgue density and
  /// divergence-free fields). It equals −A(u).
  std::optional<Polynomial> expansion;
  bool expansion_matches = false;
  std::optional<Point> at;
  std::optional<Rational> a_value;
  std::optional<Rational> b_value;

  /// B = 0 and A < 0 at the evaluation point: no K satisfies A ≥ K·B there.
  bool refutes_every_k() const;
};

BEDeficitReport be_deficit(const SRFrame& f, const Density& m, const Polynomial& u,
                           const std::optional<Point>& at = std::nullopt);

/// Σ_{i,j} X̂_iu (X̂_ijj u − X̂_jji u) − (X̂_ij u)².
Polynomial blowup_deficit(const SRFrame& fhat, const Polynomial& u);

/// Whether Σ_{i,j} X^ε_iu (X^ε_ijj u − X^ε_jji u) − (X^ε_ij u)², computed with ε symbolic,
/// reduces to blowup_deficit(F̂, u) at ε = 0.
bool deficit_rescaling_witness(const SRFrame& f, const WeightVector& w, const Polynomial& u);

/// Δ̂ = Σ X̂_i².
DifferentialOperator sum_of_squares(const SRFrame& fhat);

/// φ[α] = Σ (X̂_iα) X̂_i for α of weighted degree 1.
VectorField killing_candidate(const SRFrame& fhat, const Polynomial& alpha, const WeightVector& w);

struct CommutationTest {
  bool commutes = false;
  /// [X, Δ̂], zero iff commutes.
  DifferentialOperator witness;
};

CommutationTest commutes_with_sublaplacian(const VectorField& x, const SRFrame& fhat);

struct SymmetrySpace {
  Stratum basis;
  bool complements_h1 = false;
};

/// {X ∈ 𝔤¹ : [X, Δ̂] = 0} by an exact linear solve on the coefficients over the 𝔤¹ basis.
SymmetrySpace horizontal_symmetry_space(const SRFrame& fhat, const StratifiedAlgebra& alg);

struct InclusionStep {
  std::string claim;
  bool holds = false;
  std::string detail;
};

struct CommutativityTrace {
  bool commutative = false;
  std::vector<InclusionStep> steps;
  /// First bracket found outside its target subspace.
  std::optional<std::string> counterexample;
};

/// Replays the inclusion chain [𝔦,𝔤¹] ⊆ 𝔥², [𝔦,𝔥^j] ⊆ 𝔥^{j+1}, 𝔤^{j+1} = [𝔦,𝔥^j] + 𝔥^{j+1}.
/// Throws when i_basis violates a hypothesis (unless waived). A failed inclusion under valid
/// hypotheses throws std::logic_error; with waived hypotheses it is returned as a counterexample.
CommutativityTrace verify_commutativity_theorem(const SRFrame& fhat, const StratifiedAlgebra& alg,
                                                const Stratum& i_basis, bool waive_preconditions = false);

/// Σ X̂_iα · [X̂_i, Δ̂]γ.
Polynomial witness_pairing(const SRFrame& fhat, const Polynomial& alpha, const Polynomial& gamma);

enum class Outcome { riemannian_tangent, be_fails_all_k, inconclusive };
std::string to_string(Outcome o);

struct Witness {
  Polynomial alpha;
  Polynomial gamma;
  Polynomial pairing;
  /// A point where the pairing is nonzero, and its value there.
  Point point;
  Rational value;
};

struct VerdictOptions {
  /// Largest weighted degree of γ searched; the search starts at 3.
  int budget_degree = 4;
};

struct Verdict {
  std::string structure;
  Point at;
  WeightVector weights;
  Outcome outcome = Outcome::inconclusive;
  std::optional<SRFrame> nilpotent_frame;
  StratifiedAlgebra algebra;
  SymmetrySpace symmetries;
  std::optional<CommutativityTrace> trace;
  std::optional<Witness> witness;
  std::size_t searched = 0;
  std::string note;
  CheckList checks;
};

/// Tangent-level decision at x: RIEMANNIAN_TANGENT or BE_FAILS_ALL_K with a certificate.
Verdict no_be_verdict(const SRFrame& f, const Density& m, std::span<const Rational> x, const WeightVector& w,
                      const VerdictOptions& opts = {});

/// Recomputes the witness pairing from scratch and compares it with the recorded value.
bool replay_witness(const SRFrame& fhat, const Witness& w);

Json to_json(const Verdict& v);
/// Rebuilds the nilpotent frame and witness stored by to_json(Verdict).
std::pair<SRFrame, std::optional<Witness>> certificate_from_json(const Json& j);

}  // namespace srkit
