#include "srkit/obstruction.hpp"

#include "srkit/error.hpp"
#include "srkit/expr.hpp"
#include "srkit/field_span.hpp"
#include "srkit/parallel.hpp"

#include <stdexcept>

namespace srkit {

namespace {

Polynomial deficit_expansion(const std::vector<VectorField>& fields, const Polynomial& u) {
  Polynomial e(u.dim());
  std::vector<Polynomial> xu;
  for (const auto& x : fields) xu.push_back(x.apply(u));
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = 0; j < fields.size(); ++j) {
      Polynomial xij = fields[i].apply(xu[j]);
      Polynomial xijj = fields[i].apply(fields[j].apply(xu[j]));
      Polynomial xjji = fields[j].apply(fields[j].apply(xu[i]));
      e += xu[i] * (xijj - xjji) - xij * xij;
    }
  return e;
}

bool divergence_free(const SRFrame& f) {
  auto m = Density::lebesgue(f.dim());
  for (const auto& x : f.fields())
    if (!divergence(x, m).is_zero()) return false;
  return true;
}

}  // namespace

bool BEDeficitReport::refutes_every_k() const { return a_value && b_value && *b_value == 0 && *a_value < 0; }

BEDeficitReport be_deficit(const SRFrame& f, const Density& m, const Polynomial& u, const std::optional<Point>& at) {
  if (u.dim() != f.dim()) throw DimensionMismatch("test function and frame differ in dimension");
  BEDeficitReport r;
  r.frame = f.name();
  r.u = u;
  RationalFunction uf(u);
  RationalFunction lap_u = sub_laplacian(f, uf, m);
  r.b = grad_norm_sq(f, u);
  r.a = sub_laplacian(f, RationalFunction(r.b), m) * RationalFunction::constant(f.dim(), Rational(1, 2)) -
        grad_inner(f, uf, lap_u);
  if (m.is_lebesgue() && divergence_free(f)) {
    r.expansion = deficit_expansion(f.fields(), u);
    r.expansion_matches = RationalFunction(*r.expansion) == -r.a;
  }
  if (at) {
    if (at->size() != f.dim()) throw DimensionMismatch("evaluation point has wrong dimension");
    r.at = at;
    r.a_value = r.a.evaluate(*at);
    r.b_value = r.b.evaluate(*at);
  }
  return r;
}

Polynomial blowup_deficit(const SRFrame& fhat, const Polynomial& u) {
  if (u.dim() != fhat.dim()) throw DimensionMismatch("test function and frame differ in dimension");
  return deficit_expansion(fhat.fields(), u);
}

bool deficit_rescaling_witness(const SRFrame& f, const WeightVector& w, const Polynomial& u) {
  const std::size_t n = f.dim();
  std::vector<VectorField> scaled;
  try {
    for (const auto& x : f.fields()) scaled.push_back(pushforward_rescaled_symbolic(x, w));
  } catch (const Error&) {
    return false;
  }
  Polynomial eps_form = deficit_expansion(scaled, u.extend(n + 1));
  Polynomial limit = blowup_deficit(nilpotent_approximation(f, w), u).extend(n + 1);
  Polynomial diff = eps_form - limit;
  for (const auto& [mu, c] : diff.terms())
    if (mu[n] == 0) return false;
  return true;
}

DifferentialOperator sum_of_squares(const SRFrame& fhat) {
  DifferentialOperator lap(fhat.dim());
  for (const auto& x : fhat.fields()) {
    auto op = x.to_operator();
    lap += compose(op, op);
  }
  return lap;
}

VectorField killing_candidate(const SRFrame& fhat, const Polynomial& alpha, const WeightVector& w) {
  if (alpha.dim() != fhat.dim()) throw DimensionMismatch("form and frame differ in dimension");
  VectorField out(fhat.dim());
  if (alpha.is_zero()) return out;
  if (weighted_degree(alpha, w) != 1) throw Error("alpha is not homogeneous of weighted degree 1");
  for (const auto& x : fhat.fields()) {
    Polynomial c = x.apply(alpha);
    if (!c.is_constant()) throw Error("frame is not homogeneous: X alpha is not constant");
    out += c.constant_term() * x;
  }
  if (out.is_zero()) throw std::logic_error("phi[alpha] = 0 for nonzero alpha " + to_string(alpha));
  return out;
}

CommutationTest commutes_with_sublaplacian(const VectorField& x, const SRFrame& fhat) {
  CommutationTest t;
  t.witness = commutator(x.to_operator(), sum_of_squares(fhat));
  t.commutes = t.witness.is_zero();
  return t;
}

SymmetrySpace horizontal_symmetry_space(const SRFrame& fhat, const StratifiedAlgebra& alg) {
  const Stratum& g1 = alg.g_strata.front();
  const DifferentialOperator lap = sum_of_squares(fhat);
  std::vector<DifferentialOperator> comms;
  for (const auto& e : g1) comms.push_back(commutator(e.field.to_operator(), lap));
  auto coords = operator_coordinates(comms);
  const std::size_t rows = coords.empty() ? 0 : coords.front().size();
  RationalMatrix a(rows, RationalVector(g1.size()));
  for (std::size_t k = 0; k < g1.size(); ++k)
    for (std::size_t l = 0; l < rows; ++l) a[l][k] = coords[k][l];

  SymmetrySpace s;
  auto fields = fields_of(g1);
  for (const auto& c : nullspace(a, g1.size())) s.basis.push_back({combine(fields, c), combination_label(g1, c)});

  const Stratum& h1 = alg.h_strata.front();
  std::vector<VectorField> joint = fields_of(s.basis);
  for (const auto& e : h1) joint.push_back(e.field);
  s.complements_h1 = s.basis.size() + h1.size() == g1.size() && span_dimension(as_operators(joint)) == g1.size();
  return s;
}

namespace {

std::string subspace_name(const char* letter, std::size_t j) { return std::string(letter) + "^" + std::to_string(j); }

/// Checks [a, b] ∈ target for all a ∈ left, b ∈ right; the first escapee goes to detail.
InclusionStep bracket_inclusion(const std::string& claim, const Stratum& left, const Stratum& right,
                                const Stratum* target, const std::string& target_name) {
  InclusionStep step{claim, true, ""};
  std::vector<DifferentialOperator> basis = target ? as_operators(fields_of(*target)) : std::vector<DifferentialOperator>{};
  for (const auto& a : left)
    for (const auto& b : right) {
      VectorField br = lie_bracket(a.field, b.field);
      bool inside = basis.empty() ? br.is_zero() : in_span(basis, br.to_operator());
      if (!inside) {
        std::string zero = basis.empty() ? " = {0}" : "";
        step.holds = false;
        step.detail = "[" + a.label + "," + b.label + "] = " + to_string(br) + " not in " + target_name + zero;
        return step;
      }
    }
  return step;
}

}  // namespace

CommutativityTrace verify_commutativity_theorem(const SRFrame& fhat, const StratifiedAlgebra& alg,
                                                const Stratum& i_basis, bool waive_preconditions) {
  const Stratum& g1 = alg.g_strata.front();
  const Stratum& h1 = alg.h_strata.front();
  const std::size_t s = alg.step;
  if (!waive_preconditions) {
    auto g1_ops = as_operators(fields_of(g1));
    for (const auto& e : i_basis)
      if (!in_span(g1_ops, e.field.to_operator())) throw Error("hypothesis failed: " + e.label + " is not in g^1");
    std::vector<VectorField> joint = fields_of(i_basis);
    for (const auto& e : h1) joint.push_back(e.field);
    if (i_basis.size() + h1.size() != g1.size() || span_dimension(as_operators(joint)) != g1.size())
      throw Error("hypothesis failed: g^1 is not the direct sum of i and h^1");
    for (const auto& e : i_basis)
      if (!commutes_with_sublaplacian(e.field, fhat).commutes)
        throw Error("hypothesis failed: " + e.label + " does not commute with the sub-Laplacian");
  }

  CommutativityTrace trace;
  auto h = [&](std::size_t j) -> const Stratum* { return j <= s ? &alg.h_strata[j - 1] : nullptr; };
  auto record = [&](InclusionStep step) {
    if (!step.holds && !trace.counterexample) trace.counterexample = step.detail;
    trace.steps.push_back(std::move(step));
  };

  record(bracket_inclusion("[i,g^1] in h^2", i_basis, g1, h(2), subspace_name("h", 2)));
  for (std::size_t j = 1; j <= s; ++j)
    record(bracket_inclusion("[i,h^" + std::to_string(j) + "] in h^" + std::to_string(j + 1), i_basis,
                             alg.h_strata[j - 1], h(j + 1), subspace_name("h", j + 1)));
  for (std::size_t j = 2; j <= s; ++j) {
    // 𝔥^j ⊆ 𝔤^j always, so equality is a dimension count.
    std::size_t gd = alg.g_strata[j - 1].size(), hd = alg.h_strata[j - 1].size();
    record({"g^" + std::to_string(j) + " = h^" + std::to_string(j), gd == hd,
            "dim g^" + std::to_string(j) + " = " + std::to_string(gd) + ", dim h^" + std::to_string(j) + " = " +
                std::to_string(hd)});
  }
  {
    EchelonBasis at0(fhat.dim());
    Point origin(fhat.dim(), Rational(0));
    for (const auto& g : alg.g_strata)
      for (const auto& e : g) at0.add(e.field.at(origin));
    record({"g|0 = g^1|0", at0.rank() == alg.k1,
            "dim g|0 = " + std::to_string(at0.rank()) + ", k1 = " + std::to_string(alg.k1)});
  }
  record(bracket_inclusion("g commutative", g1, g1, nullptr, "{0}"));

  trace.commutative = std::all_of(trace.steps.begin(), trace.steps.end(), [](const auto& st) { return st.holds; });
  if (!trace.commutative && !waive_preconditions)
    throw std::logic_error("inclusion failed under verified hypotheses: " + *trace.counterexample);
  return trace;
}

Polynomial witness_pairing(const SRFrame& fhat, const Polynomial& alpha, const Polynomial& gamma) {
  const DifferentialOperator lap = sum_of_squares(fhat);
  Polynomial out(fhat.dim());
  for (const auto& x : fhat.fields()) {
    Polynomial xa = x.apply(alpha);
    if (xa.is_zero()) continue;
    out += xa * apply(commutator(x.to_operator(), lap), gamma);
  }
  return out;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::riemannian_tangent: return "RIEMANNIAN_TANGENT";
    case Outcome::be_fails_all_k: return "BE_FAILS_ALL_K";
    case Outcome::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

/// First point of {0, ..., D}^n (lexicographic counting) where a nonzero p of total degree D
/// does not vanish; such a point always exists.
Point nonvanishing_point(const Polynomial& p) {
  const std::size_t n = p.dim();
  const int base = std::max(p.total_degree(), 0) + 1;
  std::vector<int> digits(n, 0);
  while (true) {
    Point x;
    for (int d : digits) x.emplace_back(d);
    if (p.evaluate(x) != 0) return x;
    std::size_t k = n;
    while (k > 0 && ++digits[k - 1] == base) digits[--k] = 0;
    if (k == 0) throw std::logic_error("nonzero polynomial vanishes on its degree grid");
  }
}

struct Candidate {
  Polynomial alpha;
  Polynomial gamma;
};

}  // namespace

Verdict no_be_verdict(const SRFrame& f, const Density& m, std::span<const Rational> x, const WeightVector& w,
                      const VerdictOptions& opts) {
  const std::size_t n = f.dim();
  if (x.size() != n) throw DimensionMismatch("base point has wrong dimension");
  if (w.size() != n) throw DimensionMismatch("weights and frame differ in dimension");
  if (m.log_gradient.size() != n) throw DimensionMismatch("density log-gradient has wrong length");
  for (const auto& g : m.log_gradient)
    if (g.has_pole_at(x)) throw Error("density log-gradient has a pole at the base point");

  Verdict v;
  v.structure = f.name();
  v.at.assign(x.begin(), x.end());
  v.weights = w;

  SRFrame centred = f.centred_at(x);
  auto priv = verify_privileged(centred, w);
  if (!priv.privileged) throw Error("coordinates are not privileged at the base point: " + priv.reason);
  SRFrame fhat = nilpotent_approximation(centred, w);
  v.nilpotent_frame = fhat;
  v.algebra = stratified_algebra(fhat, w);
  v.checks = check_strata_invariants(v.algebra);

  {
    bool ok = true;
    std::string detail;
    for (std::size_t j = 0; j < n && w[j] == 1; ++j) {
      if (killing_candidate(fhat, Polynomial::variable(n, j), w).is_zero()) ok = false;
    }
    v.checks.push_back({"phi injective on coordinate forms", ok, detail});
  }
  {
    bool ok = true;
    std::string detail;
    for (const auto& e : v.algebra.g_strata.front()) {
      auto c = commutes_with_sublaplacian(e.field, fhat).witness;
      if (!c.is_zero() && operator_degree(c, w) != -3) {
        ok = false;
        detail = "[" + e.label + ", Delta] is not homogeneous of degree -3";
      }
    }
    v.checks.push_back({"[X, Delta] has degree -3", ok, detail});
  }

  v.symmetries = horizontal_symmetry_space(fhat, v.algebra);
  if (v.symmetries.complements_h1) {
    v.trace = verify_commutativity_theorem(fhat, v.algebra, v.symmetries.basis);
    if (v.trace->commutative && v.algebra.k1 == n) {
      v.outcome = Outcome::riemannian_tangent;
      v.note = "tangent cone is Euclidean; statement concerns the tangent-level algebra at the queried point";
      return v;
    }
  }

  std::vector<Candidate> candidates;
  for (int d = 3; d <= opts.budget_degree; ++d)
    for (std::size_t j = 0; j < n && w[j] == 1; ++j)
      for (const auto& mu : monomials_of_weighted_degree(w, d))
        candidates.push_back({Polynomial::variable(n, j), Polynomial::monomial(mu, Rational(1))});
  std::vector<Polynomial> pairings(candidates.size(), Polynomial(n));
  parallel_for(candidates.size(),
               [&](std::size_t k) { pairings[k] = witness_pairing(fhat, candidates[k].alpha, candidates[k].gamma); });
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (pairings[k].is_zero()) continue;
    Witness wit{candidates[k].alpha, candidates[k].gamma, pairings[k], nonvanishing_point(pairings[k]), 0};
    wit.value = wit.pairing.evaluate(wit.point);
    v.searched = k + 1;
    v.witness = std::move(wit);
    v.outcome = Outcome::be_fails_all_k;
    v.checks.push_back({"witness replay", replay_witness(fhat, *v.witness), ""});
    v.note = "pairing must vanish identically under BE(K,N) for any K; statement concerns the tangent-level algebra";
    return v;
  }
  v.searched = candidates.size();
  v.outcome = Outcome::inconclusive;
  v.note = "obstruction exists algebraically; explicit (alpha, gamma) witness not found within budget";
  return v;
}

bool replay_witness(const SRFrame& fhat, const Witness& w) {
  Polynomial p = witness_pairing(fhat, w.alpha, w.gamma);
  return p == w.pairing && w.value != 0 && p.evaluate(w.point) == w.value;
}

namespace {

Json stratum_json(const Stratum& s) {
  Json arr = Json::array();
  for (const auto& e : s) arr.push_back({{"label", e.label}, {"field", to_string(e.field)}});
  return arr;
}

}  // namespace

Json to_json(const Verdict& v) {
  Json j;
  j["structure"] = v.structure;
  j["at"] = to_json(v.at);
  j["weights"] = v.weights.values();
  j["outcome"] = to_string(v.outcome);
  Json frame = Json::array();
  if (v.nilpotent_frame)
    for (std::size_t i = 0; i < v.nilpotent_frame->size(); ++i) {
      const auto& x = (*v.nilpotent_frame)[i];
      frame.push_back({{"label", "X" + std::to_string(i + 1)}, {"field", to_string(x)}, {"operator", to_json(x.to_operator())}});
    }
  j["nilpotent_frame"] = frame;
  Json g = Json::array(), h = Json::array();
  for (const auto& s : v.algebra.g_strata) g.push_back(stratum_json(s));
  for (const auto& s : v.algebra.h_strata) h.push_back(stratum_json(s));
  j["strata"] = {{"g", g},
                 {"h", h},
                 {"g_dims", v.algebra.g_dims()},
                 {"h_dims", v.algebra.h_dims()},
                 {"step", v.algebra.step},
                 {"k1", v.algebra.k1},
                 {"homogeneous_dimension", v.algebra.homogeneous_dimension}};
  j["symmetry_space"] = {{"basis", stratum_json(v.symmetries.basis)}, {"complements_h1", v.symmetries.complements_h1}};
  if (v.trace) {
    Json steps = Json::array();
    for (const auto& st : v.trace->steps) steps.push_back({{"claim", st.claim}, {"holds", st.holds}, {"detail", st.detail}});
    j["trace"] = {{"commutative", v.trace->commutative}, {"steps", steps}};
    j["trace"]["counterexample"] = v.trace->counterexample ? Json(*v.trace->counterexample) : Json(nullptr);
  } else {
    j["trace"] = nullptr;
  }
  if (v.witness) {
    const auto& w = *v.witness;
    j["witness"] = {{"alpha", to_string(w.alpha)},   {"alpha_terms", to_json(w.alpha)},
                    {"gamma", to_string(w.gamma)},   {"gamma_terms", to_json(w.gamma)},
                    {"pairing", to_string(w.pairing)}, {"pairing_terms", to_json(w.pairing)},
                    {"point", to_json(w.point)},     {"value", rational_to_json(w.value)}};
  } else {
    j["witness"] = nullptr;
  }
  j["searched"] = v.searched;
  j["note"] = v.note;
  j["checks"] = to_json(v.checks);
  return j;
}

std::pair<SRFrame, std::optional<Witness>> certificate_from_json(const Json& j) {
  const std::size_t n = j.at("at").size();
  std::vector<VectorField> fields;
  for (const auto& x : j.at("nilpotent_frame")) fields.push_back(VectorField::from_operator(operator_from_json(x.at("operator"), n)));
  SRFrame fhat(j.value("structure", std::string()) + "^", std::move(fields));
  std::optional<Witness> wit;
  if (!j.at("witness").is_null()) {
    const auto& wj = j.at("witness");
    Point pt;
    for (const auto& q : wj.at("point")) pt.push_back(rational_from_json(q));
    wit = Witness{polynomial_from_json(wj.at("alpha_terms"), n), polynomial_from_json(wj.at("gamma_terms"), n),
                  polynomial_from_json(wj.at("pairing_terms"), n), pt, rational_from_json(wj.at("value"))};
  }
  return {std::move(fhat), std::move(wit)};
}

}  // namespace srkit
