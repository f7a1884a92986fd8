#include "srkit/cli/app.hpp"

#include "srkit/cli/plot.hpp"
#include "srkit/cli/structure.hpp"
#include "srkit/error.hpp"
#include "srkit/field_span.hpp"
#include "srkit/grushin.hpp"
#include "srkit/obstruction.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

namespace srkit::cli {

namespace {

namespace gr = srkit::grushin;
using srkit::to_json;
using srkit::to_string;
using cli::to_json;

struct Options {
  bool json = false;
  std::string report_path;
  std::string svg_path;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  std::size_t depth = 8;
  int budget_degree = 4;

  std::string file;
  std::vector<std::string> files;
  std::string at;
  std::string weights;
  std::string u;
  std::string radius = "1/8";
  std::size_t probes = 16;

  std::string p = "1";
  std::string n = "inf";
  std::string x;
  std::string from, to, cov;
  double duration = 1;
  double h = 0;
  std::string csv_path;
  bool half = false;
  std::string ell = "50";
  std::size_t grid = 32;
  double tol_mid = 1e-4;
  std::string gallery = SRKIT_GALLERY_DIR;
};

Json exact_tolerances() { return {{"arithmetic", "exact"}}; }

Point point_or(const std::string& text, const Point& fallback) { return text.empty() ? fallback : parse_point(text); }

WeightVector weights_of(const Options& o, const Structure& s) {
  if (!o.weights.empty()) return parse_weights(o.weights);
  if (s.weights) return *s.weights;
  throw Error("weights required: pass --weights or set 'weights' in the structure file");
}

Json fields_json(const SRFrame& f) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i)
    arr.push_back({{"label", "X" + std::to_string(i + 1)}, {"field", to_string(f[i])}, {"operator", to_json(f[i].to_operator())}});
  return arr;
}

Json structure_inputs(const Structure& s) {
  Json j{{"file", s.source}, {"name", s.name}, {"dimension", s.dimension}, {"fields", s.field_text}};
  j["complete"] = s.complete ? Json(*s.complete) : Json(nullptr);
  if (!s.density_text.empty()) j["density_log_grad"] = s.density_text;
  if (!s.params.empty()) {
    Json p = Json::object();
    for (const auto& [k, v] : s.params) p[k] = rational_to_json(v);
    j["params"] = p;
  }
  return j;
}

Json filtration_json(const Filtration& f) {
  Json bases = Json::array();
  for (const auto& level : f.bases) {
    Json words = Json::array();
    for (const auto& w : level) words.push_back(to_string(w));
    bases.push_back(words);
  }
  return {{"at", to_json(f.base)},
          {"dims", f.dims},
          {"step", f.step},
          {"bases", bases},
          {"bracket_generating", f.bracket_generating},
          {"depth_limited", f.depth_limited}};
}

std::string join_dims(const std::vector<std::size_t>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

Json measure_json(const gr::Measure& m) {
  return {{"exact", m.exact ? Json(to_string(*m.exact)) : Json(nullptr)}, {"value", m.value}};
}

Json vec_json(const gr::Vec2& v) { return Json::array({v[0], v[1]}); }

Json path_json(const gr::GeodesicArc& arc, std::size_t max_points) {
  Json arr = Json::array();
  const std::size_t n = arc.samples.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
  for (std::size_t k = 0; k < n; k += stride) arr.push_back(vec_json(arc.point(k)));
  if ((n - 1) % stride != 0) arr.push_back(vec_json(arc.point(n - 1)));
  return arr;
}

gr::Vec2 parse_vec2(const std::string& text) {
  Point p = parse_point(text);
  if (p.size() != 2) throw Error("expected two coordinates, got '" + text + "'");
  return {to_double(p[0]), to_double(p[1])};
}

// ---------------------------------------------------------------------------------------------

Report cmd_filtration(const Options& o) {
  Structure s = parse_structure(o.file);
  Point x = point_or(o.at, s.base_point);
  Filtration f = filtration_at(s.frame, x, o.depth);
  Report r;
  r.command = "filtration";
  r.inputs = structure_inputs(s);
  r.inputs["at"] = to_json(x);
  r.inputs["depth"] = o.depth;
  r.outputs = filtration_json(f);
  bool increasing = std::adjacent_find(f.dims.begin(), f.dims.end(), std::greater_equal<>()) == f.dims.end();
  r.checks.push_back({"dims strictly increasing", increasing, join_dims(f.dims)});
  r.checks.push_back({"k_s = n iff bracket-generating", (f.dims.back() == s.dimension) == f.bracket_generating, ""});
  r.tolerances = exact_tolerances();
  r.exit_code = f.bracket_generating && all_passed(r.checks) ? ok : negative;
  r.summary = "dims " + join_dims(f.dims) + ", step " + std::to_string(f.step) +
              (f.bracket_generating ? ", bracket-generating" : ", not bracket-generating within depth");
  return r;
}

Report cmd_classify(const Options& o) {
  Structure s = parse_structure(o.file);
  Point x = point_or(o.at, s.base_point);
  Rational radius = parse_rational(o.radius);
  auto c = classify_point(s.frame, x, radius, o.probes, o.seed, o.depth);
  Report r;
  r.command = "classify";
  r.seed = o.seed;
  r.inputs = structure_inputs(s);
  r.inputs["at"] = to_json(x);
  r.inputs["radius"] = rational_to_json(radius);
  r.inputs["probes"] = o.probes;
  r.inputs["depth"] = o.depth;
  Json probes = Json::array();
  for (const auto& p : c.probes) probes.push_back(to_json(p));
  r.outputs = {{"verdict", to_string(c.verdict)}, {"at_point", filtration_json(c.at_point)}, {"probes", probes}};
  r.outputs["differing_probe"] = c.differing_probe ? Json(*c.differing_probe) : Json(nullptr);
  r.outputs["differing_filtration"] = c.differing_filtration ? filtration_json(*c.differing_filtration) : Json(nullptr);
  r.outputs["evidence"] = c.verdict == PointClass::singular  ? "certificate: two exact filtrations differ"
                          : c.verdict == PointClass::regular ? "sampling evidence: all probes share the filtration"
                                                             : "filtration search hit the depth limit";
  r.tolerances = exact_tolerances();
  r.exit_code = c.verdict == PointClass::inconclusive ? negative : ok;
  r.summary = to_string(c.verdict);
  return r;
}

Report cmd_nilpotentize(const Options& o) {
  Structure s = parse_structure(o.file);
  Point x = point_or(o.at, s.base_point);
  WeightVector w = weights_of(o, s);
  SRFrame centred = s.frame.centred_at(x);
  auto priv = verify_privileged(centred, w);
  Report r;
  r.command = "nilpotentize";
  r.inputs = structure_inputs(s);
  r.inputs["at"] = to_json(x);
  r.inputs["weights"] = w.values();
  r.outputs = {{"privileged", priv.privileged}, {"reason", priv.reason}, {"homogeneous_dimension", homogeneous_dimension(w)}};
  r.checks.push_back({"privileged coordinates", priv.privileged, priv.reason});
  r.outputs["nilpotent_frame"] = nullptr;
  if (priv.privileged) {
    SRFrame fhat = nilpotent_approximation(centred, w);
    r.outputs["nilpotent_frame"] = fields_json(fhat);
    for (std::size_t i = 0; i < centred.size(); ++i)
      r.checks.push_back({"exact convergence witness X" + std::to_string(i + 1), exact_convergence_witness(centred[i], w),
                          "X^eps - X^ is divisible by eps"});
    r.checks.push_back({"idempotent", nilpotent_approximation(fhat, w).fields() == fhat.fields(), ""});
  }
  r.tolerances = exact_tolerances();
  r.exit_code = all_passed(r.checks) ? ok : negative;
  r.summary = priv.privileged ? "privileged; nilpotent frame computed" : "not privileged: " + priv.reason;
  return r;
}

Json stratum_json(const Stratum& st) {
  Json arr = Json::array();
  for (const auto& e : st) arr.push_back({{"label", e.label}, {"field", to_string(e.field)}});
  return arr;
}

Report cmd_strata(const Options& o) {
  Structure s = parse_structure(o.file);
  Point x = point_or(o.at, s.base_point);
  WeightVector w = weights_of(o, s);
  SRFrame fhat = nilpotent_approximation(s.frame.centred_at(x), w);
  StratifiedAlgebra alg = stratified_algebra(fhat, w);
  Report r;
  r.command = "strata";
  r.inputs = structure_inputs(s);
  r.inputs["at"] = to_json(x);
  r.inputs["weights"] = w.values();
  Json g = Json::array(), h = Json::array();
  for (const auto& st : alg.g_strata) g.push_back(stratum_json(st));
  for (const auto& st : alg.h_strata) h.push_back(stratum_json(st));
  r.outputs = {{"nilpotent_frame", fields_json(fhat)},
               {"step", alg.step},
               {"g_dims", alg.g_dims()},
               {"h_dims", alg.h_dims()},
               {"g", g},
               {"h", h},
               {"k1", alg.k1},
               {"homogeneous_dimension", alg.homogeneous_dimension}};
  r.checks = check_strata_invariants(alg);
  r.tolerances = exact_tolerances();
  r.exit_code = all_passed(r.checks) ? ok : negative;
  r.summary = "g dims " + join_dims(alg.g_dims()) + ", h dims " + join_dims(alg.h_dims()) + ", s = " + std::to_string(alg.step) +
              ", Q = " + std::to_string(alg.homogeneous_dimension);
  return r;
}

Report cmd_be_deficit(const Options& o) {
  Structure s = parse_structure(o.file);
  if (o.u.empty()) throw Error("--u is required");
  Polynomial u = parse_polynomial(o.u, s.dimension, s.params);
  std::optional<Point> at;
  if (!o.at.empty()) at = parse_point(o.at);
  auto d = be_deficit(s.frame, s.density, u, at);
  Report r;
  r.command = "be-deficit";
  r.inputs = structure_inputs(s);
  r.inputs["u"] = to_string(u);
  r.inputs["at"] = at ? to_json(*at) : Json(nullptr);
  r.outputs = {{"A", to_string(d.a)}, {"B", to_string(d.b)}};
  r.outputs["expansion"] = d.expansion ? Json(to_string(*d.expansion)) : Json(nullptr);
  r.outputs["A_value"] = d.a_value ? Json(to_string(*d.a_value)) : Json(nullptr);
  r.outputs["B_value"] = d.b_value ? Json(to_string(*d.b_value)) : Json(nullptr);
  r.outputs["refutes_every_k"] = d.refutes_every_k();
  if (d.expansion) r.checks.push_back({"expansion equals -A", d.expansion_matches, ""});
  r.tolerances = exact_tolerances();
  r.exit_code = all_passed(r.checks) ? ok : negative;
  r.summary = "A = " + to_string(d.a) + ", B = " + to_string(d.b);
  if (d.a_value) r.summary += "; at point A = " + to_string(*d.a_value) + ", B = " + to_string(*d.b_value);
  return r;
}

Report cmd_verdict(const Options& o) {
  Structure s = parse_structure(o.file);
  Point x = point_or(o.at, s.base_point);
  WeightVector w = weights_of(o, s);
  VerdictOptions vo;
  vo.budget_degree = o.budget_degree;
  Verdict v = no_be_verdict(s.frame, s.density, x, w, vo);
  Report r;
  r.command = "verdict";
  r.inputs = structure_inputs(s);
  r.inputs["at"] = to_json(x);
  r.inputs["weights"] = w.values();
  r.inputs["budget_degree"] = o.budget_degree;
  r.outputs = to_json(v);
  r.outputs["scope"] = "tangent-level algebra at the queried point";
  r.checks = v.checks;
  r.tolerances = exact_tolerances();
  r.exit_code = v.outcome != Outcome::inconclusive && all_passed(r.checks) ? ok : negative;
  r.summary = to_string(v.outcome);
  if (v.witness)
    r.summary += " (alpha = " + to_string(v.witness->alpha) + ", gamma = " + to_string(v.witness->gamma) + ", pairing = " +
                 to_string(v.witness->pairing) + ")";
  return r;
}

Json tensor_json(const gr::RicciTensor2D& t) {
  return {{"dxdx", to_string(t.dxdx)}, {"dxdy", to_string(t.dxdy)}, {"dydy", to_string(t.dydy)}};
}

Report cmd_ricci(const Options& o) {
  Rational p = parse_rational(o.p);
  gr::Dimension n = gr::parse_dimension(o.n);
  auto closed = gr::ricci_nv(p, n);
  auto metric = gr::ricci_from_metric(p, n);
  Report r;
  r.command = "grushin ricci";
  r.inputs = {{"p", to_string(p)}, {"N", gr::to_string(n)}};
  r.outputs = {{"ricci_nv", tensor_json(closed)},
               {"from_metric", {{"ricci_g", tensor_json(metric.ricci_g)},
                                {"hess_v", tensor_json(metric.hess_v)},
                                {"dv", {to_string(metric.dv[0]), to_string(metric.dv[1])}},
                                {"ricci_nv", tensor_json(metric.ricci_nv)}}}};
  r.checks.push_back({"closed form equals metric computation", closed == metric.ricci_nv, ""});
  if (!o.x.empty()) {
    Rational x = parse_rational(o.x);
    r.inputs["x"] = to_string(x);
    auto [a, b, c] = gr::ricci_orthonormal(p, n, x);
    r.outputs["orthonormal"] = {to_string(a), to_string(b), to_string(c)};
    r.outputs["psd"] = gr::ricci_psd(p, n, x);
  }
  r.tolerances = exact_tolerances();
  r.exit_code = all_passed(r.checks) ? ok : negative;
  r.summary = "Ric_{N,V} = (" + to_string(closed.dxdx) + ") dx*dx + (" + to_string(closed.dydy) + ") dy*dy";
  return r;
}

Report cmd_np(const Options& o) {
  Rational p = parse_rational(o.p);
  auto np = gr::n_threshold(p);
  Report r;
  r.command = "grushin np";
  r.inputs = {{"p", to_string(p)}};
  r.outputs = {{"N_p", gr::to_string(np)}};
  r.tolerances = exact_tolerances();
  r.summary = "N_p = " + gr::to_string(np);
  return r;
}

Report cmd_psd(const Options& o) {
  Rational p = parse_rational(o.p);
  gr::Dimension n = gr::parse_dimension(o.n);
  Rational x = parse_rational(o.x.empty() ? "1" : o.x);
  auto [a, b, c] = gr::ricci_orthonormal(p, n, x);
  bool psd = gr::ricci_psd(p, n, x);
  Report r;
  r.command = "grushin psd";
  r.inputs = {{"p", to_string(p)}, {"N", gr::to_string(n)}, {"x", to_string(x)}};
  r.outputs = {{"psd", psd}, {"orthonormal", {to_string(a), to_string(b), to_string(c)}}};
  r.outputs["N_p"] = p >= 1 ? Json(gr::to_string(gr::n_threshold(p))) : Json(nullptr);
  r.tolerances = exact_tolerances();
  r.exit_code = psd ? ok : negative;
  r.summary = psd ? "positive semidefinite" : "not positive semidefinite";
  return r;
}

Report cmd_geodesic(const Options& o) {
  gr::Vec2 q0 = parse_vec2(o.from.empty() ? "0,0" : o.from);
  gr::Vec2 cov = parse_vec2(o.cov.empty() ? "1,0" : o.cov);
  double h = o.h > 0 ? o.h : o.duration / static_cast<double>(gr::default_steps);
  if (o.half && q0[0] < 0) throw Error("half-plane mode needs x >= 0");
  auto arc = gr::geodesic_shoot(q0, cov, o.duration, h);
  Report r;
  r.command = "grushin geodesic";
  r.inputs = {{"from", vec_json(q0)}, {"covector", vec_json(cov)}, {"T", o.duration}, {"h", h}, {"half", o.half}};
  r.outputs = {{"samples", path_json(arc, 512)},
               {"end", vec_json(arc.end())},
               {"H0", arc.h0},
               {"length", arc.length()},
               {"max_drift", arc.max_drift},
               {"accepted", arc.accepted},
               {"crosses_axis", arc.crosses_axis},
               {"steps", arc.samples.size() - 1}};
  r.checks.push_back({"H conserved", arc.accepted, "relative drift " + std::to_string(arc.max_drift)});
  if (o.half) r.checks.push_back({"stays in half-plane (observed)", !arc.crosses_axis, "reported, not proved"});
  r.tolerances = {{"drift", gr::default_drift_tolerance}};
  if (!o.csv_path.empty()) {
    std::string csv = "t,x,y,px,py,H\n";
    char buf[160];
    for (std::size_t k = 0; k < arc.samples.size(); ++k) {
      const auto& st = arc.samples[k];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", static_cast<double>(k) * arc.step, st[0], st[1],
                    st[2], st[3], gr::hamiltonian(st));
      csv += buf;
    }
    write_atomically(o.csv_path, csv);
  }
  r.exit_code = arc.accepted ? ok : negative;
  char buf[160];
  std::snprintf(buf, sizeof buf, "end (%.9g, %.9g), length %.9g, drift %.3g", arc.end()[0], arc.end()[1], arc.length(), arc.max_drift);
  r.summary = buf;
  return r;
}

Json distance_json(const gr::DistanceResult& d) {
  Json j{{"distance", d.distance},
         {"lower", d.bounds.lower},
         {"covector", vec_json(d.covector)},
         {"residual", d.residual},
         {"discretization_error", d.discretization_error},
         {"seeds", d.seeds_tried},
         {"converged", d.converged},
         {"distinct", d.distinct},
         {"max_drift", d.arc.max_drift},
         {"crosses_axis", d.arc.crosses_axis}};
  j["upper"] = d.bounds.upper ? Json(*d.bounds.upper) : Json(nullptr);
  return j;
}

Report cmd_distance(const Options& o) {
  gr::Vec2 q0 = parse_vec2(o.from), q1 = parse_vec2(o.to);
  gr::DistanceOptions dopt;
  dopt.tol = o.tol;
  dopt.half = o.half;
  auto d = gr::distance_numeric(q0, q1, dopt);
  Report r;
  r.command = "grushin distance";
  r.inputs = {{"from", vec_json(q0)}, {"to", vec_json(q1)}, {"half", o.half}};
  r.outputs = distance_json(d);
  r.outputs["path"] = path_json(d.arc, 256);
  r.checks.push_back({"H conserved", d.arc.accepted, "relative drift " + std::to_string(d.arc.max_drift)});
  r.checks.push_back({"inside distance window", true, "enforced by distance_numeric"});
  r.checks.push_back({"discretization within tol", d.discretization_error <= o.tol, std::to_string(d.discretization_error)});
  if (o.half) r.checks.push_back({"stays in half-plane (observed)", !d.arc.crosses_axis, "reported, not proved"});
  r.tolerances = {{"distance", o.tol}, {"drift", dopt.drift_tol}, {"steps", dopt.steps}, {"seeds", dopt.seeds}};
  r.exit_code = all_passed(r.checks) ? ok : negative;
  char buf[128];
  std::snprintf(buf, sizeof buf, "d = %.12g", d.distance);
  r.summary = buf;
  return r;
}

Json bm_json(const gr::BMReport& b) {
  const auto& m = b.midpoints;
  Json samples = Json::array();
  for (const auto& s : m.samples)
    samples.push_back({{"q0", vec_json(s.q0)},
                       {"q1", vec_json(s.q1)},
                       {"midpoint", vec_json(s.midpoint)},
                       {"d01", s.d01},
                       {"d0m", s.d0m},
                       {"dm1", s.dm1},
                       {"accepted", s.accepted}});
  double reach = 1 + to_double(m.eps_certified);
  return {{"ell", to_string(b.ell)},
          {"p", to_string(b.p)},
          {"m_A0", measure_json(b.m_a0)},
          {"m_A1", measure_json(b.m_a1)},
          {"bound", measure_json(b.bound)},
          {"lhs", b.lhs},
          {"margin", b.margin},
          {"violated", b.violated},
          {"inconclusive", b.inconclusive},
          {"flag", b.flag},
          {"eps_certified", to_string(m.eps_certified)},
          {"eps_empirical", m.eps_empirical},
          {"certified_box", {{"x_min", -reach}, {"x_max", reach}, {"y_min", 0}, {"y_max", 1}}},
          {"empirical_box", {{"x_min", m.x_min}, {"x_max", m.x_max}, {"y_min", m.y_min}, {"y_max", m.y_max}}},
          {"pairs", m.samples.size()},
          {"accepted", m.accepted},
          {"max_balance_defect", m.max_balance_defect},
          {"max_sum_defect", m.max_sum_defect},
          {"contained", m.contained},
          {"strip", m.strip},
          {"samples", samples}};
}

Report cmd_bm(const Options& o) {
  if (o.half) throw Error("half-plane mode refuses midpoint queries across the boundary chart");
  Rational p = parse_rational(o.p);
  Point ells = parse_point(o.ell);
  gr::MidpointOptions mo;
  mo.tol_mid = o.tol_mid;
  mo.distance.tol = o.tol;
  Report r;
  r.command = "grushin bm";
  r.inputs = {{"p", to_string(p)}, {"ell", to_json(ells)}, {"grid", o.grid}};
  Json runs = Json::array(), curve = Json::array();
  bool all_violated = true;
  for (const auto& ell : ells) {
    auto b = gr::bm_violation_check(p, ell, o.grid, mo);
    runs.push_back(bm_json(b));
    curve.push_back({to_double(ell), b.margin});
    all_violated = all_violated && b.violated;
    const auto& m = b.midpoints;
    std::string tag = "ell=" + to_string(ell) + ": ";
    r.checks.push_back({tag + "midpoint defect", m.accepted == m.samples.size(),
                        std::to_string(m.accepted) + "/" + std::to_string(m.samples.size()) + " pairs within tol_mid"});
    r.checks.push_back({tag + "strip invariant", m.strip, ""});
    r.checks.push_back({tag + "empirical box inside certified box", m.contained,
                        "eps_empirical " + std::to_string(m.eps_empirical) + " <= eps_certified " + to_string(m.eps_certified)});
    r.checks.push_back({tag + "m(A0) = m(A1)", b.m_a0.exact && b.m_a1.exact ? *b.m_a0.exact == *b.m_a1.exact : b.m_a0.value == b.m_a1.value, ""});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%sm(A0) = %s, bound %.6g, margin %.6g%s; ", tag.c_str(),
                  b.m_a0.exact ? to_string(*b.m_a0.exact).c_str() : std::to_string(b.m_a0.value).c_str(), b.bound.value, b.margin,
                  b.violated ? ", violated" : (", " + b.flag).c_str());
    r.summary += buf;
  }
  r.outputs = {{"runs", runs}, {"margin_curve", curve}};
  r.tolerances = {{"midpoint", o.tol_mid}, {"distance", o.tol}, {"drift", gr::default_drift_tolerance}, {"steps", gr::default_steps}};
  r.exit_code = all_violated && all_passed(r.checks) ? ok : negative;
  return r;
}

// ---------------------------------------------------------------------------------------------

Rational random_rational(std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 4);
  return ratio(num(rng), den(rng));
}

void selfcheck_structure(const Structure& s, std::uint64_t seed, int budget, CheckList& out) {
  const std::string tag = s.name + ": ";
  auto add = [&](const std::string& name, bool passed, const std::string& detail = "") {
    out.push_back({tag + name, passed, detail});
  };
  const std::size_t n = s.dimension;
  const SRFrame& f = s.frame;
  std::mt19937_64 rng(seed);

  Filtration filt = filtration_at(f, s.base_point, 8);
  add("bracket-generating at base point", filt.bracket_generating, join_dims(filt.dims));

  // Brackets: antisymmetry, component route vs operator route, Jacobi.
  std::vector<VectorField> pool = f.fields();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) pool.push_back(lie_bracket(f[i], f[j]));
  bool anti = true, routes = true, jacobi = true;
  for (std::size_t a = 0; a < pool.size(); ++a)
    for (std::size_t b = 0; b < pool.size(); ++b) {
      auto ab = lie_bracket(pool[a], pool[b]);
      anti = anti && ab == -lie_bracket(pool[b], pool[a]);
      routes = routes && ab.to_operator() == commutator(pool[a].to_operator(), pool[b].to_operator());
      for (std::size_t c = 0; c < pool.size(); ++c) {
        auto sum = lie_bracket(pool[a], lie_bracket(pool[b], pool[c])) + lie_bracket(pool[b], lie_bracket(pool[c], pool[a])) +
                   lie_bracket(pool[c], ab);
        jacobi = jacobi && sum.is_zero();
      }
    }
  add("bracket antisymmetry", anti);
  add("bracket routes agree", routes);
  add("Jacobi identity", jacobi);

  // Minimal control and Hamiltonian coherence at random points.
  bool coherent = true, duality = true;
  Polynomial u(n);
  for (std::size_t i = 0; i < n; ++i) u += Polynomial::variable(n, i).pow(static_cast<unsigned>(i + 2)) * random_rational(rng, 3);
  VectorField grad = gradient(f, u);
  for (int trial = 0; trial < 8; ++trial) {
    Point x(n);
    for (auto& c : x) c = random_rational(rng, 3);
    std::vector<Rational> lambda(n);
    for (auto& c : lambda) c = random_rational(rng, 5);
    auto v = sharp(f, x, lambda);
    auto mc = minimal_control(f, x, v);
    coherent = coherent && mc.norm_sq == 2 * hamiltonian(f, x, lambda);
    Rational du = 0;
    for (std::size_t i = 0; i < n; ++i) du += u.derivative(i).evaluate(x) * v[i];
    duality = duality && du == frame_inner(f, x, grad.at(x), v);
  }
  add("|sharp|^2 = 2H", coherent);
  add("gradient duality", duality);

  Polynomial sq(n);
  for (const auto& x : f.fields()) sq += x.apply(u) * x.apply(u);
  add("grad_norm_sq is the sum of squares", grad_norm_sq(f, u) == sq);

  if (s.density.is_lebesgue()) {
    auto d = be_deficit(f, s.density, u);
    if (d.expansion) add("deficit expansion equals -A", d.expansion_matches);
  }

  if (!s.weights) return;
  const WeightVector& w = *s.weights;
  bool partition = true;
  for (const auto& x : f.fields()) {
    DifferentialOperator sum(n);
    for (const auto& [deg, part] : homogeneous_components(x.to_operator(), w)) sum += part;
    partition = partition && sum == x.to_operator();
  }
  add("homogeneous components partition", partition);

  SRFrame centred = f.centred_at(s.base_point);
  auto priv = verify_privileged(centred, w);
  add("privileged at base point", priv.privileged, priv.reason);
  if (!priv.privileged) return;
  SRFrame fhat = nilpotent_approximation(centred, w);
  bool witness = true;
  for (const auto& x : centred.fields()) witness = witness && exact_convergence_witness(x, w);
  add("exact convergence witness", witness);
  add("nilpotent approximation idempotent", nilpotent_approximation(fhat, w).fields() == fhat.fields());
  add("deficit rescaling limit", deficit_rescaling_witness(centred, w, u));

  StratifiedAlgebra alg = stratified_algebra(fhat, w);
  for (const auto& c : check_strata_invariants(alg)) add("strata: " + c.name, c.passed, c.detail);

  bool pole = false;
  for (const auto& g : s.density.log_gradient) pole = pole || g.has_pole_at(s.base_point);
  if (pole) {
    bool refused = false;
    try {
      no_be_verdict(f, s.density, s.base_point, w);
    } catch (const Error&) {
      refused = true;
    }
    add("verdict refuses density pole at base point", refused);
    return;
  }
  VerdictOptions vo;
  vo.budget_degree = budget;
  Verdict v = no_be_verdict(f, s.density, s.base_point, w, vo);
  for (const auto& c : v.checks) add("verdict: " + c.name, c.passed, c.detail);
  add("verdict decided", v.outcome != Outcome::inconclusive, to_string(v.outcome));
  Json j = Json::parse(to_json(v).dump());
  auto [frame, wit] = certificate_from_json(j);
  add("certificate round-trip", frame.fields() == fhat.fields() && (!wit || replay_witness(frame, *wit)));
}

Report cmd_selfcheck(const Options& o) {
  std::vector<std::filesystem::path> files;
  for (const auto& f : o.files) files.emplace_back(f);
  if (files.empty()) {
    for (const auto& e : std::filesystem::directory_iterator(o.gallery))
      if (e.path().extension() == ".toml") files.push_back(e.path());
    std::sort(files.begin(), files.end());
  }
  if (files.empty()) throw Error("no structure files to check");
  Report r;
  r.command = "selfcheck";
  r.seed = o.seed;
  Json names = Json::array();
  for (const auto& path : files) {
    names.push_back(path.filename().string());
    Structure s = parse_structure(path);
    selfcheck_structure(s, o.seed, o.budget_degree, r.checks);
  }
  r.inputs = {{"files", names}, {"budget_degree", o.budget_degree}};
  std::size_t passed = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
  r.outputs = {{"structures", files.size()}, {"checks", r.checks.size()}, {"passed", passed}};
  r.tolerances = exact_tolerances();
  r.exit_code = all_passed(r.checks) ? ok : negative;
  r.summary = std::to_string(passed) + "/" + std::to_string(r.checks.size()) + " checks passed on " + std::to_string(files.size()) +
              " structures";
  return r;
}

void print_summary(const Report& r, std::ostream& out) {
  out << r.command << ": " << r.summary << "\n";
  for (const auto& c : r.checks)
    if (!c.passed) out << "  FAILED " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sub-Riemannian structure toolkit: exact bracket algebra, tangent cones and Grushin numerics", "srkit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  auto outputs = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Print the JSON report on stdout");
    sub->add_option("--report", o.report_path, "Also write the JSON report to this file");
    sub->add_option("--svg", o.svg_path, "Write an SVG plot of the report");
  };
  auto structure = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "Structure file")->required()->check(CLI::ExistingFile);
    outputs(sub);
  };

  auto* filtration = app.add_subcommand("filtration", "Filtration D^1 ⊂ D^2 ⊂ ... at a point");
  structure(filtration);
  filtration->add_option("--at", o.at, "Point (default: base_point of the file)");
  filtration->add_option("--depth", o.depth, "Maximal bracket length")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Regular/singular classification by seeded probes");
  structure(classify);
  classify->add_option("--at", o.at, "Point");
  classify->add_option("--seed", o.seed, "Probe seed")->capture_default_str();
  classify->add_option("--probes", o.probes, "Number of probes")->capture_default_str();
  classify->add_option("--radius", o.radius, "Probe radius (sup norm)")->capture_default_str();
  classify->add_option("--depth", o.depth, "Maximal bracket length")->capture_default_str();

  auto* nilpotentize = app.add_subcommand("nilpotentize", "Nilpotent approximation in the given weights");
  structure(nilpotentize);
  nilpotentize->add_option("--at", o.at, "Base point");
  nilpotentize->add_option("--weights", o.weights, "Weights, e.g. 1,2");

  auto* strata = app.add_subcommand("strata", "Stratified algebra g and subalgebra h of the tangent cone");
  structure(strata);
  strata->add_option("--at", o.at, "Base point");
  strata->add_option("--weights", o.weights, "Weights");

  auto* deficit = app.add_subcommand("be-deficit", "Bakry-Emery deficit A(u) and carre du champ B(u)");
  structure(deficit);
  deficit->add_option("--u", o.u, "Test function")->required();
  deficit->add_option("--at", o.at, "Evaluation point");

  auto* verdict = app.add_subcommand("verdict", "Tangent-level BE verdict with certificate");
  structure(verdict);
  verdict->add_option("--at", o.at, "Base point");
  verdict->add_option("--weights", o.weights, "Weights");
  verdict->add_option("--budget-degree", o.budget_degree, "Largest weighted degree of gamma searched")->capture_default_str();

  auto* grushin = app.add_subcommand("grushin", "Grushin plane with m_p = |x|^p dx dy");
  grushin->require_subcommand(1);
  auto* ricci = grushin->add_subcommand("ricci", "N-Bakry-Emery Ricci tensor, closed form and from the metric");
  ricci->add_option("--p", o.p, "Measure exponent")->capture_default_str();
  ricci->add_option("--N", o.n, "Dimension parameter (inf allowed)")->capture_default_str();
  ricci->add_option("--x", o.x, "Evaluate in the orthonormal frame at this x");
  outputs(ricci);
  auto* np = grushin->add_subcommand("np", "Threshold N_p");
  np->add_option("--p", o.p, "Measure exponent")->capture_default_str();
  outputs(np);
  auto* psd = grushin->add_subcommand("psd", "Positive semidefiniteness of Ric_{N,V} at x");
  psd->add_option("--p", o.p, "Measure exponent")->capture_default_str();
  psd->add_option("--N", o.n, "Dimension parameter")->capture_default_str();
  psd->add_option("--x", o.x, "Point (default 1)");
  outputs(psd);
  auto* geodesic = grushin->add_subcommand("geodesic", "Hamiltonian geodesic by RK4");
  geodesic->add_option("--from", o.from, "Initial point")->capture_default_str();
  geodesic->add_option("--cov", o.cov, "Initial covector (p_x, p_y)");
  geodesic->add_option("--T", o.duration, "Duration")->capture_default_str();
  geodesic->add_option("--h", o.h, "Step (default T/2048)");
  geodesic->add_option("--csv", o.csv_path, "Write every sample as CSV");
  geodesic->add_flag("--half", o.half, "Half-plane mode");
  outputs(geodesic);
  auto* distance = grushin->add_subcommand("distance", "Distance by multistart shooting");
  distance->add_option("--from", o.from, "First point")->required();
  distance->add_option("--to", o.to, "Second point")->required();
  distance->add_option("--tol", o.tol, "Distance tolerance")->capture_default_str();
  distance->add_flag("--half", o.half, "Half-plane mode");
  outputs(distance);
  auto* bm = grushin->add_subcommand("bm", "Brunn-Minkowski violation between [-l-1,-l]x[0,1] and [l,l+1]x[0,1]");
  bm->add_option("--p", o.p, "Measure exponent")->capture_default_str();
  bm->add_option("--ell", o.ell, "Distance parameter l (comma list for a margin curve)")->capture_default_str();
  bm->add_option("--grid", o.grid, "Lattice points per box")->capture_default_str();
  bm->add_option("--tol", o.tol, "Distance tolerance")->capture_default_str();
  bm->add_option("--tol-mid", o.tol_mid, "Midpoint defect tolerance")->capture_default_str();
  bm->add_flag("--half", o.half, "Half-plane mode (refused)");
  outputs(bm);

  auto* selfcheck = app.add_subcommand("selfcheck", "Invariant suite on structure files (default: the gallery)");
  selfcheck->add_option("files", o.files, "Structure files");
  selfcheck->add_option("--gallery", o.gallery, "Gallery directory")->capture_default_str();
  selfcheck->add_option("--seed", o.seed, "Seed for random probes")->capture_default_str();
  selfcheck->add_option("--budget-degree", o.budget_degree, "Witness search budget")->capture_default_str();
  outputs(selfcheck);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o1, o2;
    app.exit(e, o1, o2);
    err << o2.str() << o1.str();
    return error;
  }

  auto start = std::chrono::steady_clock::now();
  try {
    Report r;
    if (filtration->parsed()) r = cmd_filtration(o);
    else if (classify->parsed()) r = cmd_classify(o);
    else if (nilpotentize->parsed()) r = cmd_nilpotentize(o);
    else if (strata->parsed()) r = cmd_strata(o);
    else if (deficit->parsed()) r = cmd_be_deficit(o);
    else if (verdict->parsed()) r = cmd_verdict(o);
    else if (ricci->parsed()) r = cmd_ricci(o);
    else if (np->parsed()) r = cmd_np(o);
    else if (psd->parsed()) r = cmd_psd(o);
    else if (geodesic->parsed()) r = cmd_geodesic(o);
    else if (distance->parsed()) r = cmd_distance(o);
    else if (bm->parsed()) r = cmd_bm(o);
    else if (selfcheck->parsed()) r = cmd_selfcheck(o);
    else throw Error("unknown command");
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Json j = to_json(r);
    if (!o.svg_path.empty()) emit_plot(j, o.svg_path);
    std::string text = serialize(r);
    if (!o.report_path.empty()) write_atomically(o.report_path, text);
    if (o.json) out << text;
    else print_summary(r, out);
    return r.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return error;
  }
}

}  // namespace srkit::cli
