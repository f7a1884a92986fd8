#include "srkit/nilpotent.hpp"

#include "srkit/error.hpp"
#include "srkit/expr.hpp"
#include "srkit/field_span.hpp"

namespace srkit {

Dilation::Dilation(WeightVector w, Rational lambda) : weights(std::move(w)), factor(std::move(lambda)) {
  if (factor <= 0) throw Error("dilation factor must be positive");
}

Point Dilation::apply(std::span<const Rational> z) const {
  if (z.size() != weights.size()) throw DimensionMismatch("point and weights differ in dimension");
  Point out;
  for (std::size_t i = 0; i < z.size(); ++i) out.push_back(pow(factor, weights[i]) * z[i]);
  return out;
}

Point dilate_point(const Dilation& d, std::span<const Rational> z) { return d.apply(z); }

VectorField pushforward_rescaled(const VectorField& x, const WeightVector& w, const Rational& eps) {
  if (eps <= 0) throw Error("epsilon must be positive");
  const std::size_t n = x.dim();
  if (w.size() != n) throw DimensionMismatch("weights and field differ in dimension");
  std::vector<Polynomial> scaled_coords;
  for (std::size_t j = 0; j < n; ++j) scaled_coords.push_back(Polynomial::variable(n, j) * pow(eps, w[j]));
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < n; ++i) comps.push_back(x[i].substitute(scaled_coords) * pow(eps, 1 - w[i]));
  return VectorField(std::move(comps));
}

VectorField pushforward_rescaled_symbolic(const VectorField& x, const WeightVector& w) {
  const std::size_t n = x.dim();
  if (w.size() != n) throw DimensionMismatch("weights and field differ in dimension");
  const Polynomial eps = Polynomial::variable(n + 1, n);
  std::vector<Polynomial> scaled_coords;
  for (std::size_t j = 0; j < n; ++j) scaled_coords.push_back(Polynomial::variable(n + 1, j) * eps.pow(w[j]));
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial c = x[i].substitute(scaled_coords);
    // Multiply by ε^{1−w_i}: an exact division by ε^{w_i−1}.
    auto q = c.divide_exact(eps.pow(static_cast<unsigned>(w[i] - 1)));
    if (!q) throw Error("coordinates not adapted: component " + std::to_string(i + 1) + " carries a negative power of epsilon");
    comps.push_back(std::move(*q));
  }
  comps.push_back(Polynomial(n + 1));  // no ∂_ε component
  return VectorField(std::move(comps));
}

bool exact_convergence_witness(const VectorField& x, const WeightVector& w) {
  const std::size_t n = x.dim();
  VectorField scaled(n + 1);
  try {
    scaled = pushforward_rescaled_symbolic(x, w);
  } catch (const Error&) {
    return false;
  }
  auto parts = homogeneous_components(x.to_operator(), w);
  auto it = parts.find(-1);
  std::vector<Polynomial> hat(n + 1, Polynomial(n + 1));
  if (it != parts.end()) {
    auto xhat = VectorField::from_operator(it->second);
    for (std::size_t i = 0; i < n; ++i) hat[i] = xhat[i].extend(n + 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial rest = scaled[i] - hat[i];
    for (const auto& [mu, c] : rest.terms())
      if (mu[n] < 1) return false;
  }
  return true;
}

SRFrame nilpotent_approximation(const SRFrame& f, const WeightVector& w) {
  if (w.size() != f.dim()) throw DimensionMismatch("weights and frame differ in dimension");
  std::vector<VectorField> hat;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto parts = homogeneous_components(f[i].to_operator(), w);
    if (!parts.empty() && parts.begin()->first < -1)
      throw Error("coordinates not adapted: X" + std::to_string(i + 1) + " has a component of degree " +
                  std::to_string(parts.begin()->first));
    auto it = parts.find(-1);
    if (it == parts.end()) throw Error("no degree-(-1) component in X" + std::to_string(i + 1));
    hat.push_back(VectorField::from_operator(it->second));
  }
  return SRFrame(f.name() + "^", std::move(hat));
}

PrivilegedCheck verify_privileged(const SRFrame& f, const WeightVector& w) {
  if (w.size() != f.dim()) throw DimensionMismatch("weights and frame differ in dimension");
  std::optional<SRFrame> hat;
  try {
    hat = nilpotent_approximation(f, w);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  Point origin(f.dim(), Rational(0));
  // Step of a homogeneous frame at 0 is bounded by the largest weight.
  auto filt = filtration_at(*hat, origin, static_cast<std::size_t>(w.max()));
  if (!filt.bracket_generating) return {false, "truncated frame is not bracket-generating at 0"};
  return {true, "truncated frame is bracket-generating at 0"};
}

int homogeneous_dimension(const WeightVector& w) {
  int q = 0;
  for (int wi : w.values()) q += wi;
  return q;
}

std::vector<std::size_t> StratifiedAlgebra::g_dims() const {
  std::vector<std::size_t> d;
  for (const auto& s : g_strata) d.push_back(s.size());
  return d;
}

std::vector<std::size_t> StratifiedAlgebra::h_dims() const {
  std::vector<std::size_t> d;
  for (const auto& s : h_strata) d.push_back(s.size());
  return d;
}

std::vector<VectorField> fields_of(const Stratum& s) {
  std::vector<VectorField> out;
  for (const auto& e : s) out.push_back(e.field);
  return out;
}

std::string combination_label(const Stratum& basis, const RationalVector& c) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    Rational a = abs(c[k]);
    if (!out.empty())
      out += c[k] < 0 ? " - " : " + ";
    else if (c[k] < 0)
      out += "-";
    if (a != 1) out += "(" + a.get_str() + ")*";
    out += basis[k].label;
  }
  return out;
}

namespace {

Stratum vanishing_subspace(const Stratum& g, std::size_t n) {
  if (g.empty()) return {};
  Point origin(n, Rational(0));
  RationalMatrix eval(n, RationalVector(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto v = g[k].field.at(origin);
    for (std::size_t i = 0; i < n; ++i) eval[i][k] = v[i];
  }
  Stratum h;
  auto fields = fields_of(g);
  for (const auto& c : nullspace(eval, g.size())) h.push_back({combine(fields, c), combination_label(g, c)});
  return h;
}

}  // namespace

StratifiedAlgebra stratified_algebra(const SRFrame& fhat, const WeightVector& w, std::size_t max_step) {
  const std::size_t n = fhat.dim();
  if (w.size() != n) throw DimensionMismatch("weights and frame differ in dimension");
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    if (fhat[i].is_zero()) throw Error("frame field X" + std::to_string(i + 1) + " is zero");
    if (operator_degree(fhat[i].to_operator(), w) != -1)
      throw Error("frame field X" + std::to_string(i + 1) + " is not homogeneous of degree -1");
  }
  Point origin(n, Rational(0));
  auto filt = filtration_at(fhat, origin, static_cast<std::size_t>(w.max()));
  if (!filt.bracket_generating) throw Error("nilpotent frame is not bracket-generating at 0");

  StratifiedAlgebra alg;
  alg.weights = w;
  alg.homogeneous_dimension = homogeneous_dimension(w);
  alg.k1 = filt.dims.front();

  Stratum g1;
  {
    std::vector<DifferentialOperator> ops = as_operators(fhat.fields());
    for (std::size_t i : independent_subset(ops)) g1.push_back({fhat[i], "X" + std::to_string(i + 1)});
  }
  alg.g_strata.push_back(g1);

  while (true) {
    const Stratum& last = alg.g_strata.back();
    Stratum candidates;
    for (const auto& a : g1)
      for (const auto& b : last) {
        VectorField br = lie_bracket(a.field, b.field);
        if (!br.is_zero()) candidates.push_back({std::move(br), "[" + a.label + "," + b.label + "]"});
      }
    Stratum next;
    if (!candidates.empty()) {
      auto ops = as_operators(fields_of(candidates));
      for (std::size_t i : independent_subset(ops)) next.push_back(candidates[i]);
    }
    if (next.empty()) break;
    if (alg.g_strata.size() >= max_step)
      throw Error("stratification did not terminate within " + std::to_string(max_step) + " steps");
    alg.g_strata.push_back(std::move(next));
  }
  alg.step = alg.g_strata.size();
  for (const auto& g : alg.g_strata) alg.h_strata.push_back(vanishing_subspace(g, n));
  return alg;
}

CheckList check_strata_invariants(const StratifiedAlgebra& alg) {
  CheckList checks;
  const std::size_t s = alg.step;
  const std::size_t n = alg.weights.size();
  Point origin(n, Rational(0));

  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < s; ++i)
      for (const auto& e : alg.g_strata[i])
        if (operator_degree(e.field.to_operator(), alg.weights) != -static_cast<int>(i + 1)) {
          ok = false;
          detail = e.label + " is not homogeneous of degree -" + std::to_string(i + 1);
        }
    checks.push_back({"stratum degrees", ok, ok ? "every basis element of g^i has degree -i" : detail});
  }
  {
    bool ok = true;
    for (const auto& h : alg.h_strata)
      for (const auto& e : h)
        for (const auto& c : e.field.at(origin)) ok = ok && c == 0;
    checks.push_back({"h vanishes at origin", ok, ""});
  }
  {
    std::size_t g1 = alg.g_strata.front().size(), h1 = alg.h_strata.front().size();
    bool ok = h1 + alg.k1 == g1;
    checks.push_back({"codimension k1", ok,
                      "dim h1 = " + std::to_string(h1) + ", dim g1 - k1 = " + std::to_string(g1) + " - " +
                          std::to_string(alg.k1)});
  }
  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        auto target = i + j + 1 < s ? as_operators(fields_of(alg.g_strata[i + j + 1])) : std::vector<DifferentialOperator>{};
        for (const auto& a : alg.g_strata[i])
          for (const auto& b : alg.g_strata[j]) {
            auto br = lie_bracket(a.field, b.field);
            bool inside = target.empty() ? br.is_zero() : in_span(target, br.to_operator());
            if (!inside) {
              ok = false;
              detail = "[" + a.label + "," + b.label + "] escapes g^" + std::to_string(i + j + 2);
            }
          }
      }
    checks.push_back({"grading closure", ok, detail});
  }
  {
    bool ok = true;
    std::string detail;
    const auto& h1 = alg.h_strata.front();
    for (std::size_t j = 0; j < s; ++j) {
      auto target = j + 1 < s ? as_operators(fields_of(alg.h_strata[j + 1])) : std::vector<DifferentialOperator>{};
      for (const auto& a : h1)
        for (const auto& b : alg.h_strata[j]) {
          auto br = lie_bracket(a.field, b.field);
          bool inside = target.empty() ? br.is_zero() : in_span(target, br.to_operator());
          if (!inside) {
            ok = false;
            detail = "[" + a.label + "," + b.label + "] escapes h^" + std::to_string(j + 2);
          }
        }
    }
    checks.push_back({"h bracket inclusion", ok, detail});
  }
  {
    EchelonBasis span0(n);
    for (const auto& g : alg.g_strata)
      for (const auto& e : g) span0.add(e.field.at(origin));
    bool ok = span0.rank() == n;
    checks.push_back({"bracket-generating at origin", ok, "dim g|0 = " + std::to_string(span0.rank())});
  }
  return checks;
}

}  // namespace srkit
