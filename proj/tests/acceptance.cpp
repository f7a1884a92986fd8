// One line per acceptance criterion; exit status 1 if any line fails.

#include "support/grushin_oracle.hpp"
#include "support/properties.hpp"

#include "srkit/cli/structure.hpp"
#include "srkit/grushin.hpp"
#include "srkit/nilpotent.hpp"
#include "srkit/obstruction.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace srkit;
using namespace srkit::test;
namespace gr = srkit::grushin;

namespace {

const std::filesystem::path gallery = SRKIT_GALLERY_DIR;
const std::string srkit_exe = SRKIT_EXE;

struct Result {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok || !passed) {
      passed = passed && ok;
      return;
    }
    passed = false;
    detail = what;
  }
};

Rational q(const std::string& s) { return parse_rational(s); }

// ---------------------------------------------------------------------------------------------

Result ricci_identity() {
  Result o;
  const std::vector<std::string> ps{"0", "1/2", "1", "2", "3", "7/2"}, ns{"3", "5", "10", "100", "inf"};
  for (const auto& p : ps)
    for (const auto& n : ns) {
      auto dim = gr::parse_dimension(n);
      auto closed = gr::ricci_nv(q(p), dim);
      auto metric = gr::ricci_from_metric(q(p), dim);
      o.require(metric.ricci_nv == closed, "metric route differs from closed form at p=" + p + ", N=" + n);
      // Closed form by hand: ((p−1) − (p+1)²/(N−2))/x² dx² + (p−1)/x⁴ dy².
      Rational pp = q(p), c = pp - 1;
      if (!dim.is_infinite()) c -= (pp + 1) * (pp + 1) / (*dim.value - 2);
      for (Rational x : {ratio(1, 3), Rational(2), Rational(-5)}) {
        Point at{x, 7};
        o.require(closed.dxdx.evaluate(at) == c / (x * x) && closed.dydy.evaluate(at) == (pp - 1) / (x * x * x * x) &&
                      closed.dxdy.evaluate(at) == 0,
                  "closed form disagrees with the hand formula at p=" + p + ", N=" + n);
      }
    }
  o.detail = o.passed ? "30 (p,N) pairs, exact identity" : o.detail;
  return o;
}

Result psd_threshold() {
  Result o;
  std::ostringstream thresholds;
  for (const auto& p : {"3/2", "2", "3", "5"}) {
    Rational pp = q(p);
    auto np = gr::n_threshold(pp);
    Rational expected = (pp + 1) * (pp + 1) / (pp - 1) + 2;
    o.require(np.value && *np.value == expected, std::string("N_p wrong at p=") + p);
    if (!np.value) continue;
    Rational n = *np.value;
    thresholds << "N_" << p << "=" << to_string(n) << " ";
    o.require(gr::ricci_psd(pp, gr::Dimension::finite(n), 1), std::string("not PSD at N_p, p=") + p);
    for (auto delta : {ratio(1, 1000000), ratio(1, 10), Rational(1)})
      if (n - delta > 2) o.require(!gr::ricci_psd(pp, gr::Dimension::finite(n - delta), 1), std::string("PSD below N_p, p=") + p);
    for (auto delta : {ratio(1, 1000000), Rational(3), Rational(1000)})
      o.require(gr::ricci_psd(pp, gr::Dimension::finite(n + delta), 1), std::string("not PSD above N_p, p=") + p);
    o.require(gr::ricci_psd(pp, gr::Dimension::infinite(), 1), std::string("not PSD at N=inf, p=") + p);
  }
  o.require(gr::n_threshold(3) == gr::Dimension::finite(10), "N_3 != 10");
  if (o.passed) o.detail = thresholds.str() + "(flip exactly at N_p)";
  return o;
}

int run_srkit(const std::string& args) {
  int status = std::system((srkit_exe + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Shared shape of criteria 3 and 4: decided verdict, degree-1 α, verified nonzero pairing.
void check_witness(Result& o, const Verdict& v, const std::string& label) {
  o.require(v.outcome == srkit::Outcome::be_fails_all_k, label + ": outcome " + to_string(v.outcome));
  o.require(v.witness.has_value(), label + ": no witness");
  if (!v.witness) return;
  const auto& w = *v.witness;
  o.require(weighted_degree(w.alpha, v.weights) == 1, label + ": alpha not of degree 1");
  o.require(w.value != 0, label + ": zero pairing value");
  auto ref = oracle::pairing(oracle::from(v.nilpotent_frame->fields()), oracle::from(w.alpha), oracle::from(w.gamma));
  o.require(oracle::from(w.pairing) == ref, label + ": pairing differs from the reference computation");
  o.require(oracle::eval(ref, w.point) == w.value, label + ": pairing value differs from the reference");
  o.require(all_passed(v.checks), label + ": verdict checks failed");
}

Result heisenberg_verdict() {
  Result o;
  auto dir = std::filesystem::temp_directory_path() / "srkit_acceptance";
  std::filesystem::create_directories(dir);
  auto first = dir / "heis1.json", second = dir / "heis2.json";
  std::string args = "verdict " + (gallery / "heisenberg.toml").string() + " --at 0,0,0 --weights 1,1,2 --report ";
  o.require(run_srkit(args + first.string()) == 0, "srkit verdict exited nonzero");
  o.require(run_srkit(args + second.string()) == 0, "second srkit verdict exited nonzero");
  if (!o.passed) return o;
  Json a = Json::parse(slurp(first)), b = Json::parse(slurp(second));
  a.erase("wall_time");
  b.erase("wall_time");
  o.require(a == b, "two runs differ");
  o.require(a["outputs"]["outcome"] == "BE_FAILS_ALL_K", "report outcome is not BE_FAILS_ALL_K");
  auto [frame, wit] = certificate_from_json(a["outputs"]);
  o.require(wit.has_value() && replay_witness(frame, *wit), "certificate does not replay");
  auto v = no_be_verdict(heisenberg(), Density::lebesgue(3), parse_point("0,0,0"), WeightVector({1, 1, 2}));
  check_witness(o, v, "heisenberg");
  o.require(v.searched <= 20, "search exceeded 10 cubic monomials x 2 forms");
  if (o.passed && wit)
    o.detail = "alpha = " + to_string(wit->alpha) + ", gamma = " + to_string(wit->gamma) + ", pairing = " +
               to_string(wit->pairing) + "; replayed from a separate process";
  return o;
}

Result grushin_verdict() {
  Result o;
  auto g = no_be_verdict(test::grushin(), Density::lebesgue(2), parse_point("0,0"), WeightVector({1, 2}));
  check_witness(o, g, "grushin");
  if (g.witness) {
    auto [frame, wit] = certificate_from_json(Json::parse(to_json(g).dump()));
    o.require(wit && replay_witness(frame, *wit), "grushin certificate does not replay");
  }
  auto e = no_be_verdict(euclidean(), Density::lebesgue(2), parse_point("0,0"), WeightVector({1, 1}));
  o.require(e.outcome == srkit::Outcome::riemannian_tangent, "euclidean outcome " + to_string(e.outcome));
  if (o.passed)
    o.detail = "grushin: alpha = " + to_string(g.witness->alpha) + ", gamma = " + to_string(g.witness->gamma) +
               ", pairing = " + to_string(g.witness->pairing) + " (= " + to_string(g.witness->value) + " at (" +
               to_string(g.witness->point) + ")); euclidean: RIEMANNIAN_TANGENT";
  return o;
}

Result commutativity() {
  Result o;
  auto halg = stratified_algebra(heisenberg(), WeightVector({1, 1, 2}));
  auto h = verify_commutativity_theorem(heisenberg(), halg, halg.g_strata[0], true);
  o.require(!h.commutative && h.counterexample.has_value(), "no heisenberg counterexample");
  if (h.counterexample) o.require(h.counterexample->find("= dz not in h^2") != std::string::npos, "wrong counterexample " + *h.counterexample);
  auto ealg = stratified_algebra(euclidean(), WeightVector({1, 1}));
  auto e = verify_commutativity_theorem(euclidean(), ealg, ealg.g_strata[0]);
  o.require(e.commutative && !e.steps.empty(), "euclidean trace not commutative");
  for (const auto& s : e.steps) o.require(s.holds, "euclidean step failed: " + s.claim);
  if (o.passed) o.detail = "heisenberg: " + *h.counterexample + "; euclidean: " + std::to_string(e.steps.size()) + " steps hold";
  return o;
}

Result stratification() {
  Result o;
  auto h = stratified_algebra(heisenberg(), WeightVector({1, 1, 2}));
  o.require(h.g_dims() == std::vector<std::size_t>{2, 1} && h.h_dims() == std::vector<std::size_t>{0, 0}, "heisenberg dims");
  auto g = stratified_algebra(test::grushin(), WeightVector({1, 2}));
  o.require(g.g_dims() == std::vector<std::size_t>{2, 1} && g.h_dims()[0] == 1, "grushin dims");
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(gallery)) {
    if (entry.path().extension() != ".toml") continue;
    auto s = cli::parse_structure(entry.path());
    if (!s.weights) continue;
    auto fhat = nilpotent_approximation(s.frame.centred_at(s.base_point), *s.weights);
    auto alg = stratified_algebra(fhat, *s.weights);
    std::vector<std::vector<Rational>> at_origin;
    for (const auto& e : alg.g_strata[0]) at_origin.push_back(e.field.at(Point(s.dimension, Rational(0))));
    std::size_t k1 = oracle::rank(at_origin);
    o.require(k1 == alg.k1, s.name + ": k1 differs from the reference rank");
    o.require(alg.h_dims()[0] == alg.g_dims()[0] - k1, s.name + ": dim h1 != dim g1 - k1");
    ++files;
  }
  o.require(files >= 6, "gallery incomplete");
  if (o.passed) o.detail = "codimension identity on " + std::to_string(files) + " bundled structures";
  return o;
}

Result brunn_minkowski() {
  Result o;
  auto r = gr::bm_violation_check(1, 50, 32);
  Rational exact = (Rational(51 * 51) - Rational(50 * 50)) / 2;
  o.require(r.m_a0.exact && *r.m_a0.exact == exact && r.m_a1.exact && *r.m_a1.exact == exact, "m(A0), m(A1) != 101/2");
  const auto& m = r.midpoints;
  o.require(m.samples.size() == 1024 && m.accepted == m.samples.size(), "not every midpoint accepted");
  o.require(m.max_balance_defect <= 1e-4 && m.max_sum_defect <= 1e-4, "midpoint defect above 1e-4");
  Rational reach = 1 + m.eps_certified;
  o.require(reach <= ratio(11, 10), "certified box wider than |x| <= 1.1");
  o.require(m.contained && m.x_min >= -to_double(reach) && m.x_max <= to_double(reach), "midpoints outside the certified box");
  o.require(m.strip, "strip invariant failed");
  o.require(r.bound.exact && *r.bound.exact == reach * reach && *r.bound.exact <= ratio(121, 100), "bound is not (1+eps)^2 <= 1.21");
  o.require(r.lhs == 50.5 && r.lhs > r.bound.value && r.violated, "no violation");
  if (o.passed) {
    std::ostringstream s;
    s << "m(A0) = m(A1) = " << to_string(exact) << ", |x_mid| <= " << to_string(reach) << " (empirical " << std::setprecision(6)
      << std::max(-m.x_min, m.x_max) << "), bound " << to_string(*r.bound.exact) << ", 50.5 > bound, 1024/1024 midpoints";
    o.detail = s.str();
  }
  return o;
}

Result geodesics() {
  Result o;
  auto a = gr::distance_numeric({1, 0}, {2, 0});
  o.require(std::abs(a.distance - 1) <= 1e-6, "d((1,0),(2,0)) != 1");
  auto b = gr::distance_numeric({2, 0}, {2, 1});
  o.require(b.distance > 0 && b.distance <= 0.5, "d((2,0),(2,1)) outside (0, 0.5]");
  double ref = oracle::vertical_distance(2, 1);
  o.require(std::abs(b.distance - ref) <= 1e-6, "d((2,0),(2,1)) differs from the closed-form shooting");
  for (const auto* r : {&a, &b}) o.require(r->arc.accepted && r->arc.max_drift <= 1e-9, "arc drift above 1e-9");
  if (o.passed) {
    std::ostringstream s;
    s << std::setprecision(10) << "d1 = " << a.distance << ", d2 = " << b.distance << " (reference " << ref << "), drift "
      << std::setprecision(2) << std::max(a.arc.max_drift, b.arc.max_drift);
    o.detail = s.str();
  }
  return o;
}

Result properties() {
  Result o;
  std::vector<std::pair<std::string, PropertyResult>> suites{
      {"antisymmetry/Jacobi", bracket_identities(20240101, 200)},
      {"grading", grading_additivity(5, 200)},
      {"partition", component_partition(6, 200)},
      {"phi injectivity", phi_injectivity()},
      {"degree -3", commutator_degree(9, 12)},
      {"norm coherence", hamiltonian_coherence(13, 200)}};
  std::size_t cases = 0;
  for (const auto& [name, r] : suites) {
    o.require(r.passed(), name + ": " + r.first_failure);
    cases += r.cases;
  }
  if (o.passed) o.detail = std::to_string(cases) + " exact cases across 6 suites";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Result()> body;
  };
  std::vector<bool> results(11, false);
  std::vector<Criterion> criteria{
      {1, "weighted Ricci: metric route equals closed form", 1, ricci_identity},
      {2, "N_p threshold flips PSD exactly", 1, psd_threshold},
      {3, "Heisenberg verdict BE_FAILS_ALL_K with replayed certificate", 5, heisenberg_verdict},
      {4, "Grushin verdict at the origin; Euclidean Riemannian", 5, grushin_verdict},
      {5, "commutativity verifier trace and counterexample", 1, commutativity},
      {6, "stratification and codimension identity", 1, stratification},
      {7, "Brunn-Minkowski violation, p = 1, ell = 50, grid 32", 300, brunn_minkowski},
      {8, "Grushin distances and Hamiltonian conservation", 30, geodesics},
      {9, "property suites", 30, properties},
  };
  bool all = true;
  auto report = [&](int id, const std::string& title, bool ok, const std::string& detail, double secs) {
    std::cout << "criterion " << std::setw(2) << id << ": " << (ok ? "PASS" : "FAIL") << "  " << title << " [" << detail << "; "
              << std::fixed << std::setprecision(2) << secs << " s]" << std::defaultfloat << std::endl;
    all = all && ok;
  };
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.budget_seconds;
    if (o.passed && !in_time) o.detail += "; over the time budget";
    results[static_cast<std::size_t>(c.id)] = o.passed && in_time;
    report(c.id, c.title, o.passed && in_time, o.detail, secs);
  }

  // Criterion 10: the certificate pipeline of 3-6 on every bundled structure.
  auto start = std::chrono::steady_clock::now();
  Result ten;
  ten.require(results[3] && results[4] && results[5] && results[6], "criteria 3-6 not all passing");
  std::size_t decided = 0;
  for (const auto& entry : std::filesystem::directory_iterator(gallery)) {
    if (entry.path().extension() != ".toml") continue;
    try {
      auto s = cli::parse_structure(entry.path());
      if (!s.weights) continue;
      auto v = no_be_verdict(s.frame, s.density, s.base_point, *s.weights);
      ten.require(v.outcome != srkit::Outcome::inconclusive, s.name + ": inconclusive");
      auto [frame, wit] = certificate_from_json(Json::parse(to_json(v).dump()));
      ten.require(frame.fields() == v.nilpotent_frame->fields(), s.name + ": frame does not round-trip");
      ten.require(!wit || replay_witness(frame, *wit), s.name + ": witness does not replay");
      ten.require(all_passed(v.checks), s.name + ": checks failed");
      ++decided;
    } catch (const std::exception& e) {
      ten.require(false, entry.path().filename().string() + ": " + e.what());
    }
  }
  if (ten.passed) ten.detail = std::to_string(decided) + " bundled structures decided with replayable certificates";
  report(10, "certificate pipeline on the bundled examples", ten.passed, ten.detail,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return all ? 0 : 1;
}
