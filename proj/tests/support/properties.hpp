#pragma once

#include "support/gen.hpp"
#include "support/oracle.hpp"

#include "srkit/nilpotent.hpp"
#include "srkit/obstruction.hpp"

#include <sstream>

namespace srkit::test {

struct PropertyResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

struct Example {
  SRFrame frame;
  WeightVector weights;
};

inline std::vector<Example> nilpotent_examples() {
  return {{grushin(), WeightVector({1, 2})},
          {heisenberg(), WeightVector({1, 1, 2})},
          {martinet(), WeightVector({1, 1, 3})},
          {engel(), WeightVector({1, 1, 2, 3})},
          {euclidean(3), WeightVector::uniform(3)}};
}

/// [X,Y] = −[Y,X] and the Jacobi identity on random polynomial fields in n ≤ 4, degree ≤ 3.
/// Also checks the component formula against the operator commutator.
inline PropertyResult bracket_identities(std::uint64_t seed, int triples) {
  Gen g(seed);
  PropertyResult r;
  for (int t = 0; t < triples; ++t) {
    auto n = static_cast<std::size_t>(g.integer(1, 4));
    auto x = g.field(n, 3, 2), y = g.field(n, 3, 2), z = g.field(n, 3, 2);
    auto xy = lie_bracket(x, y);
    std::ostringstream tag;
    tag << "triple " << t << ": X = " << to_string(x) << ", Y = " << to_string(y);
    r.record(xy == -lie_bracket(y, x), "antisymmetry, " + tag.str());
    r.record(xy.to_operator() == commutator(x.to_operator(), y.to_operator()), "operator route, " + tag.str());
    auto jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, xy);
    r.record(jac.is_zero(), "Jacobi, " + tag.str());
  }
  return r;
}

/// Operator commutators: antisymmetry, and apply(compose(P,Q), f) = apply(P, apply(Q, f)).
inline PropertyResult operator_identities(std::uint64_t seed, int cases) {
  Gen g(seed);
  PropertyResult r;
  for (int t = 0; t < cases; ++t) {
    auto n = static_cast<std::size_t>(g.integer(1, 3));
    auto p = g.operator_(n, 2, 2), q = g.operator_(n, 2, 2);
    auto f = g.polynomial(n, 4, 5);
    r.record(commutator(p, q) == -commutator(q, p), "operator antisymmetry, case " + std::to_string(t));
    r.record(apply(compose(p, q), f) == apply(p, apply(q, f)), "apply/compose, case " + std::to_string(t));
  }
  return r;
}

/// deg [X,Y] = deg X + deg Y for random homogeneous fields with nonzero bracket.
inline PropertyResult grading_additivity(std::uint64_t seed, int cases) {
  Gen g(seed);
  PropertyResult r;
  const std::vector<WeightVector> ws{WeightVector({1, 2}), WeightVector({1, 1, 2}), WeightVector({1, 1, 2, 3}), WeightVector({1, 2, 2})};
  int done = 0;
  while (done < cases) {
    const auto& w = ws[static_cast<std::size_t>(g.integer(0, static_cast<long>(ws.size()) - 1))];
    int d1 = static_cast<int>(g.integer(-w.max(), 2)), d2 = static_cast<int>(g.integer(-w.max(), 2));
    auto x = g.homogeneous_field(w, d1), y = g.homogeneous_field(w, d2);
    if (x.is_zero() || y.is_zero()) continue;
    auto xy = lie_bracket(x, y);
    ++done;
    if (xy.is_zero()) continue;
    r.record(operator_degree(xy.to_operator(), w) == d1 + d2,
             "grading: [" + to_string(x) + ", " + to_string(y) + "]");
  }
  return r;
}

/// Summing homogeneous_components returns the operator, and every component has its key degree.
inline PropertyResult component_partition(std::uint64_t seed, int cases) {
  Gen g(seed);
  PropertyResult r;
  for (int t = 0; t < cases; ++t) {
    auto n = static_cast<std::size_t>(g.integer(2, 4));
    std::vector<int> wv(n);
    for (std::size_t i = 0; i < n; ++i) wv[i] = static_cast<int>(i == 0 ? 1 : wv[i - 1] + g.integer(0, 1));
    WeightVector w(wv);
    auto p = g.operator_(n, 3, 2, 4);
    DifferentialOperator sum(n);
    bool degrees = true;
    for (const auto& [d, part] : homogeneous_components(p, w)) {
      sum += part;
      degrees = degrees && operator_degree(part, w) == d;
    }
    r.record(sum == p && degrees, "partition of " + to_string(p));
  }
  return r;
}

/// φ is injective on degree-1 forms: the images of the weight-1 coordinates are independent.
inline PropertyResult phi_injectivity() {
  PropertyResult r;
  for (const auto& ex : nilpotent_examples()) {
    const std::size_t n = ex.frame.dim();
    std::vector<oracle::Field> images;
    bool nonzero = true;
    for (std::size_t i = 0; i < n && ex.weights[i] == 1; ++i) {
      auto phi = killing_candidate(ex.frame, Polynomial::variable(n, i), ex.weights);
      nonzero = nonzero && !phi.is_zero();
      images.push_back(oracle::from(phi));
    }
    r.record(nonzero && oracle::rank(oracle::coordinates(images)) == images.size(), "phi injectivity on " + ex.frame.name());
  }
  return r;
}

/// [X, Δ̂] is homogeneous of degree −3 for every degree −1 field X.
inline PropertyResult commutator_degree(std::uint64_t seed, int per_example) {
  Gen g(seed);
  PropertyResult r;
  for (const auto& ex : nilpotent_examples()) {
    auto lap = sum_of_squares(ex.frame);
    for (int t = 0; t < per_example; ++t) {
      VectorField x = t < static_cast<int>(ex.frame.size()) ? ex.frame[static_cast<std::size_t>(t)]
                                                             : g.homogeneous_field(ex.weights, -1, 4);
      if (x.is_zero()) continue;
      auto c = commutator(x.to_operator(), lap);
      if (c.is_zero()) continue;
      r.record(operator_degree(c, ex.weights) == -3, "degree of [" + to_string(x) + ", sum of squares] on " + ex.frame.name());
    }
  }
  return r;
}

/// ‖λ^♯‖² = 2H(λ) through minimal controls, and ⟨du, λ^♯⟩ = g(∇u, λ^♯).
inline PropertyResult hamiltonian_coherence(std::uint64_t seed, int covectors) {
  Gen g(seed);
  PropertyResult r;
  const std::vector<SRFrame> frames{grushin(), heisenberg(), martinet(), engel()};
  for (const auto& f : frames) {
    const std::size_t n = f.dim();
    auto u = g.polynomial(n, 3, 4);
    auto grad = gradient(f, u);
    for (int t = 0; t < covectors; ++t) {
      Point x = g.point(n);
      std::vector<Rational> lambda(n);
      for (auto& c : lambda) c = g.rational(6, 5);
      auto v = sharp(f, x, lambda);
      r.record(minimal_control(f, x, v).norm_sq == 2 * hamiltonian(f, x, lambda), "norm coherence on " + f.name());
      Rational du = 0;
      for (std::size_t i = 0; i < n; ++i) du += u.derivative(i).evaluate(x) * v[i];
      r.record(du == frame_inner(f, x, grad.at(x), v), "gradient duality on " + f.name());
    }
  }
  return r;
}

/// Exact ∫ over [−1,1]^n.
inline Rational integrate_cube(const Polynomial& p) {
  Rational s = 0;
  for (const auto& [mu, c] : p.terms()) {
    Rational t = c;
    for (int k : mu) t *= k % 2 ? Rational(0) : ratio(2, k + 1);
    s += t;
  }
  return s;
}

/// ∫ g(∇u,∇v) + ∫ v Δu = 0 for Lebesgue measure and v = Π(1 − z_i²)², exactly.
inline PropertyResult integration_by_parts(std::uint64_t seed, int cases) {
  Gen g(seed);
  PropertyResult r;
  for (int t = 0; t < cases; ++t) {
    auto n = static_cast<std::size_t>(g.integer(1, 3));
    std::vector<VectorField> fields;
    for (long k = g.integer(1, 3); k > 0; --k) fields.push_back(g.field(n, 2, 2));
    SRFrame f("random", fields);
    auto u = g.polynomial(n, 3, 4);
    Polynomial v = Polynomial::constant(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      auto zi = Polynomial::variable(n, i);
      auto b = Polynomial::constant(n, 1) - zi * zi;
      v *= b * b;
    }
    auto lap = sub_laplacian(f, u, Density::lebesgue(n)).as_polynomial();
    if (!lap) {
      r.record(false, "Laplacian of a polynomial frame is not polynomial");
      continue;
    }
    Polynomial energy(n);
    for (const auto& x : f.fields()) energy += x.apply(u) * x.apply(v);
    r.record(integrate_cube(energy) + integrate_cube(v * *lap) == 0, "integration by parts, case " + std::to_string(t));
  }
  return r;
}

/// blowup_deficit(u∘δ_λ) = λ⁴ · blowup_deficit(u)∘δ_λ on homogeneous frames.
inline PropertyResult deficit_scaling(std::uint64_t seed, int per_example) {
  Gen g(seed);
  PropertyResult r;
  for (const auto& ex : nilpotent_examples()) {
    const std::size_t n = ex.frame.dim();
    for (int t = 0; t < per_example; ++t) {
      Rational lambda = ratio(g.integer(1, 5), g.integer(1, 3));
      std::vector<Polynomial> dil;
      for (std::size_t i = 0; i < n; ++i) dil.push_back(pow(lambda, ex.weights[i]) * Polynomial::variable(n, i));
      auto u = g.polynomial(n, 4, 4);
      auto lhs = blowup_deficit(ex.frame, u.substitute(dil));
      auto rhs = pow(lambda, 4) * blowup_deficit(ex.frame, u).substitute(dil);
      r.record(lhs == rhs, "deficit scaling on " + ex.frame.name());
    }
  }
  return r;
}

}  // namespace srkit::test
