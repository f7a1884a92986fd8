#include "srkit/grushin.hpp"

#include "srkit/error.hpp"
#include "srkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace srkit::grushin {

std::string to_string(const Dimension& n) { return n.value ? srkit::to_string(*n.value) : "inf"; }

Dimension parse_dimension(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "∞") return Dimension::infinite();
  return Dimension::finite(parse_rational(text));
}

namespace {

RationalFunction rf_const(const Rational& c) { return RationalFunction::constant(2, c); }
RationalFunction rf_x() { return RationalFunction(Polynomial::variable(2, 0)); }

RationalFunction x_power(int k) {
  Polynomial xk = Polynomial::variable(2, 0).pow(static_cast<unsigned>(std::abs(k)));
  if (k >= 0) return RationalFunction(xk);
  return RationalFunction(Polynomial::constant(2, Rational(1)), xk);
}

/// 1/(N−2), zero at N = ∞.
Rational inverse_excess(const Dimension& n) {
  if (n.is_infinite()) return 0;
  if (*n.value <= 2) throw Error("N must exceed 2 (got " + srkit::to_string(*n.value) + ")");
  return 1 / (*n.value - 2);
}

}  // namespace

RicciTensor2D ricci_nv(const Rational& p, const Dimension& n) {
  Rational k = inverse_excess(n);
  RicciTensor2D r;
  Rational coef = (p - 1) - (p + 1) * (p + 1) * k;
  r.dxdx = rf_const(coef) * x_power(-2);
  r.dydy = rf_const(p - 1) * x_power(-4);
  return r;
}

MetricCurvature curvature_of(const std::array<std::array<RationalFunction, 2>, 2>& g,
                             const std::array<RationalFunction, 2>& log_density_gradient, const Dimension& n) {
  Rational k = inverse_excess(n);
  using RF = RationalFunction;
  RF det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (det.is_zero()) throw Error("degenerate metric");
  std::array<std::array<RF, 2>, 2> inv{{{g[1][1] / det, -g[0][1] / det}, {-g[1][0] / det, g[0][0] / det}}};

  // gamma[k][i][j] = Γ^k_ij.
  RF zero(2);
  std::array<std::array<std::array<RF, 2>, 2>, 2> gamma{};
  for (auto& a : gamma)
    for (auto& b : a) b.fill(zero);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        RF s(2);
        for (int l = 0; l < 2; ++l)
          s += inv[c][l] * (g[j][l].derivative(i) + g[i][l].derivative(j) - g[i][j].derivative(l));
        gamma[c][i][j] = s * rf_const(Rational(1, 2));
      }

  MetricCurvature out;
  std::array<std::array<RF, 2>, 2> ric{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      RF s(2);
      for (int c = 0; c < 2; ++c) {
        s += gamma[c][i][j].derivative(c) - gamma[c][i][c].derivative(j);
        for (int l = 0; l < 2; ++l) s += gamma[c][c][l] * gamma[l][i][j] - gamma[c][j][l] * gamma[l][i][c];
      }
      ric[i][j] = s;
    }

  // m = ρ dx dy = e^{−V} √det g dx dy, so dV = d log √det g − d log ρ.
  for (int i = 0; i < 2; ++i)
    out.dv[i] = det.derivative(i) / det * rf_const(Rational(1, 2)) - log_density_gradient[i];
  std::array<std::array<RF, 2>, 2> hess{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      RF s = out.dv[j].derivative(i);
      for (int c = 0; c < 2; ++c) s -= gamma[c][i][j] * out.dv[c];
      hess[i][j] = s;
    }

  auto pack = [](const std::array<std::array<RF, 2>, 2>& t) { return RicciTensor2D{t[0][0], t[0][1], t[1][1]}; };
  out.ricci_g = pack(ric);
  out.hess_v = pack(hess);
  std::array<std::array<RF, 2>, 2> total{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) total[i][j] = ric[i][j] + hess[i][j] - out.dv[i] * out.dv[j] * rf_const(k);
  out.ricci_nv = pack(total);
  return out;
}

MetricCurvature ricci_from_metric(const Rational& p, const Dimension& n) {
  std::array<std::array<RationalFunction, 2>, 2> g{{{rf_const(1), rf_const(0)}, {rf_const(0), x_power(-2)}}};
  std::array<RationalFunction, 2> log_rho{rf_const(p) * x_power(-1), rf_const(0)};
  return curvature_of(g, log_rho, n);
}

Dimension n_threshold(const Rational& p) {
  if (p < 1) throw Error("N_p is defined for p >= 1");
  if (p == 1) return Dimension::infinite();
  return Dimension::finite((p + 1) * (p + 1) / (p - 1) + 2);
}

std::array<Rational, 3> ricci_orthonormal(const Rational& p, const Dimension& n, const Rational& x) {
  if (x == 0) throw Error("the Ricci tensor is undefined on the singular set x = 0");
  RicciTensor2D r = ricci_nv(p, n);
  Point at{x, Rational(0)};
  return {r.dxdx.evaluate(at), x * r.dxdy.evaluate(at), x * x * r.dydy.evaluate(at)};
}

bool ricci_psd(const Rational& p, const Dimension& n, const Rational& x) {
  auto [a, b, c] = ricci_orthonormal(p, n, x);
  return a >= 0 && c >= 0 && a * c - b * b >= 0;
}

DistanceBounds distance_bounds(const Vec2& a, const Vec2& b) {
  DistanceBounds out;
  out.lower = std::abs(a[0] - b[0]);
  double m = std::max(std::abs(a[0]), std::abs(b[0]));
  if (m > 0) out.upper = out.lower + std::abs(a[1] - b[1]) / m;
  else if (a[1] == b[1]) out.upper = out.lower;
  return out;
}

double hamiltonian(const State& s) { return 0.5 * (s[2] * s[2] + s[0] * s[0] * s[3] * s[3]); }

double GeodesicArc::length() const { return duration * std::sqrt(2 * h0); }

namespace {

State field(const State& s) {
  const double x = s[0], px = s[2], py = s[3];
  return {px, x * x * py, -x * py * py, 0.0};
}

/// State followed by the two columns ∂s/∂p_x(0), ∂s/∂p_y(0).
using Augmented = std::array<double, 12>;

Augmented augmented_field(const Augmented& s) {
  const double x = s[0], px = s[2], py = s[3];
  Augmented d{};
  d[0] = px;
  d[1] = x * x * py;
  d[2] = -x * py * py;
  d[3] = 0;
  for (int c = 0; c < 2; ++c) {
    const double* v = &s[4 + 4 * c];
    double* dv = &d[4 + 4 * c];
    dv[0] = v[2];
    dv[1] = 2 * x * py * v[0] + x * x * v[3];
    dv[2] = -py * py * v[0] - 2 * x * py * v[3];
    dv[3] = 0;
  }
  return d;
}

template <class S, class F>
S rk4_step(const S& s, double h, F&& f) {
  S k1 = f(s), tmp{};
  for (std::size_t i = 0; i < s.size(); ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
  S k2 = f(tmp);
  for (std::size_t i = 0; i < s.size(); ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
  S k3 = f(tmp);
  for (std::size_t i = 0; i < s.size(); ++i) tmp[i] = s[i] + h * k3[i];
  S k4 = f(tmp);
  S out{};
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

struct Flow {
  Vec2 end{};
  std::array<std::array<double, 2>, 2> jacobian{};
  bool finite = true;
};

/// Endpoint at t = 1 and its derivative with respect to the initial covector.
Flow unit_flow(const Vec2& q0, const Vec2& cov, std::size_t steps) {
  Augmented s{q0[0], q0[1], cov[0], cov[1], 0, 0, 1, 0, 0, 0, 0, 1};
  const double h = 1.0 / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) s = rk4_step(s, h, augmented_field);
  Flow f;
  f.end = {s[0], s[1]};
  f.jacobian = {{{s[4], s[8]}, {s[5], s[9]}}};
  for (double v : s) f.finite = f.finite && std::isfinite(v);
  return f;
}

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

struct Shot {
  Vec2 covector{};
  double residual = 0;
  bool converged = false;
};

/// Damped Newton on the endpoint map covector ↦ γ(1).
Shot newton(const Vec2& q0, const Vec2& q1, Vec2 cov, std::size_t steps, std::size_t max_iter, double target) {
  auto residual_of = [&](const Flow& f) { return Vec2{f.end[0] - q1[0], f.end[1] - q1[1]}; };
  Flow f = unit_flow(q0, cov, steps);
  if (!f.finite) return {cov, INFINITY, false};
  Vec2 r = residual_of(f);
  double rn = norm(r);
  for (std::size_t it = 0; it < max_iter && rn > target; ++it) {
    const auto& j = f.jacobian;
    double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    double scale = std::abs(j[0][0] * j[1][1]) + std::abs(j[0][1] * j[1][0]);
    if (!(std::abs(det) > 1e-14 * scale) || scale == 0) break;
    Vec2 delta{-(j[1][1] * r[0] - j[0][1] * r[1]) / det, -(-j[1][0] * r[0] + j[0][0] * r[1]) / det};
    bool improved = false;
    for (double lambda = 1; lambda >= 1.0 / 1024; lambda /= 2) {
      Vec2 trial{cov[0] + lambda * delta[0], cov[1] + lambda * delta[1]};
      Flow ft = unit_flow(q0, trial, steps);
      if (!ft.finite) continue;
      Vec2 rt = residual_of(ft);
      double rtn = norm(rt);
      if (rtn < rn) {
        cov = trial;
        f = ft;
        r = rt;
        rn = rtn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {cov, rn, rn <= target};
}

double unit_length(const Vec2& q0, const Vec2& cov) { return std::hypot(cov[0], q0[0] * cov[1]); }

}  // namespace

GeodesicArc geodesic_shoot(const Vec2& q0, const Vec2& covector, double duration, double step, double drift_tol) {
  if (duration < 0) throw Error("duration must be non-negative");
  if (!(step > 0)) throw Error("step must be positive");
  GeodesicArc arc;
  arc.start = q0;
  arc.covector = covector;
  arc.duration = duration;
  State s{q0[0], q0[1], covector[0], covector[1]};
  arc.h0 = hamiltonian(s);
  arc.samples.push_back(s);
  std::size_t n = duration == 0 ? 0 : static_cast<std::size_t>(std::ceil(duration / step - 1e-9));
  arc.step = n == 0 ? 0 : duration / static_cast<double>(n);
  double drift = 0;
  for (std::size_t k = 0; k < n; ++k) {
    s = rk4_step(s, arc.step, field);
    arc.samples.push_back(s);
    drift = std::max(drift, std::abs(hamiltonian(s) - arc.h0));
    if ((s[0] > 0) != (q0[0] > 0) && s[0] != 0 && q0[0] != 0) arc.crosses_axis = true;
  }
  arc.max_drift = arc.h0 > 0 ? drift / arc.h0 : drift;
  arc.accepted = std::isfinite(arc.max_drift) && arc.max_drift <= drift_tol;
  return arc;
}

DistanceResult distance_numeric(const Vec2& q0, const Vec2& q1, const DistanceOptions& opts) {
  if (!(opts.tol > 0)) throw Error("tolerance must be positive");
  if (opts.half && (q0[0] < 0 || q1[0] < 0)) throw Error("half-plane mode needs x >= 0 at both endpoints");
  DistanceResult res;
  res.bounds = distance_bounds(q0, q1);
  if (q0 == q1) {
    res.arc = geodesic_shoot(q0, {0, 0}, 1, 1.0 / static_cast<double>(opts.steps), opts.drift_tol);
    return res;
  }
  const Vec2 dq{q1[0] - q0[0], q1[1] - q0[1]};
  const double scale = std::max({1.0, std::abs(q0[0]), std::abs(q1[0]), std::abs(q0[1]), std::abs(q1[1])});
  const double xref = std::max({std::abs(q0[0]), std::abs(q1[0]), std::sqrt(std::abs(dq[1]))});
  const double guess = res.bounds.upper ? 0.5 * (res.bounds.lower + *res.bounds.upper) : res.bounds.lower + std::sqrt(std::abs(dq[1]));

  std::vector<Vec2> seeds;
  // Curve with constant p_y through both endpoints when x is interpolated linearly.
  double mean_sq = q0[0] * q0[0] + q0[0] * dq[0] + dq[0] * dq[0] / 3;
  if (mean_sq > 0) seeds.push_back({dq[0], dq[1] / mean_sq});
  for (std::size_t k = 0; k < opts.seeds; ++k) {
    double theta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(opts.seeds);
    seeds.push_back({guess * std::cos(theta), guess * std::sin(theta) / xref});
  }
  res.seeds_tried = seeds.size();

  const std::size_t coarse = std::max<std::size_t>(opts.steps / 16, 64);
  const double coarse_target = 1e-9 * scale;
  const double fine_target = std::min(1e-11, opts.tol * 1e-4) * scale;

  std::vector<Shot> shots(seeds.size());
  for (std::size_t k = 0; k < seeds.size(); ++k) shots[k] = newton(q0, q1, seeds[k], coarse, 40, coarse_target);

  std::vector<Vec2> distinct;
  for (const auto& s : shots) {
    if (!s.converged) continue;
    ++res.converged;
    bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Vec2& c) {
      return norm({c[0] - s.covector[0], c[1] - s.covector[1]}) <= 1e-6 * (1 + norm(c));
    });
    if (!seen) distinct.push_back(s.covector);
  }
  res.distinct = distinct.size();
  if (distinct.empty()) throw Error("shooting did not converge from any seed");
  std::sort(distinct.begin(), distinct.end(),
            [&](const Vec2& a, const Vec2& b) { return unit_length(q0, a) < unit_length(q0, b); });

  std::optional<Shot> best;
  double best_len = INFINITY;
  for (const auto& c : distinct) {
    if (best && unit_length(q0, c) > best_len + 1e-3 * (1 + best_len)) break;
    Shot s = newton(q0, q1, c, opts.steps, 20, fine_target);
    if (!s.converged) continue;
    double len = unit_length(q0, s.covector);
    if (len < best_len) {
      best = s;
      best_len = len;
    }
  }
  if (!best) throw Error("shooting did not converge at full resolution");

  res.covector = best->covector;
  res.residual = best->residual;
  res.distance = best_len;
  Shot half = newton(q0, q1, best->covector, opts.steps / 2, 20, fine_target);
  res.discretization_error = half.converged ? std::abs(unit_length(q0, half.covector) - best_len) / 15 : INFINITY;
  res.arc = geodesic_shoot(q0, best->covector, 1, 1.0 / static_cast<double>(opts.steps), opts.drift_tol);
  if (!res.arc.accepted)
    throw Error("minimizing arc rejected: relative H drift " + std::to_string(res.arc.max_drift));
  const double slack = opts.tol;
  bool inside = res.distance >= res.bounds.lower - slack && (!res.bounds.upper || res.distance <= *res.bounds.upper + slack);
  if (!inside)
    throw Error("distance " + std::to_string(res.distance) + " outside the window [" + std::to_string(res.bounds.lower) +
                ", " + (res.bounds.upper ? std::to_string(*res.bounds.upper) : std::string("inf")) + "]");
  return res;
}

namespace {

/// t^q for t ≥ 0, exactly when the result is rational.
std::optional<Rational> exact_power(const Rational& t, const Rational& q) {
  if (t == 0) return Rational(0);
  const Integer& den = q.get_den();
  if (!den.fits_ulong_p() || !q.get_num().fits_slong_p()) return std::nullopt;
  Rational root;
  if (!exact_root(t, den.get_ui(), root)) return std::nullopt;
  return pow(root, q.get_num().get_si());
}

/// ∫_a^b t^p dt over 0 ≤ a ≤ b.
Measure positive_integral(const Rational& p, const Rational& a, const Rational& b) {
  Measure m;
  if (a == b) {
    m.exact = 0;
    return m;
  }
  if (p == -1) {
    m.value = std::log(to_double(b) / to_double(a));
    return m;
  }
  Rational q = p + 1;
  double dq = to_double(q);
  m.value = (std::pow(to_double(b), dq) - std::pow(to_double(a), dq)) / dq;
  auto pb = exact_power(b, q), pa = exact_power(a, q);
  if (pb && pa) {
    m.exact = (*pb - *pa) / q;
    m.value = to_double(*m.exact);
  }
  return m;
}

}  // namespace

Measure measure_of_box(const Rational& p, const Box& box) {
  if (box.x0 > box.x1 || box.y0 > box.y1) throw Error("box corners out of order");
  const bool touches_axis = box.x0 <= 0 && box.x1 >= 0 && box.x0 != box.x1;
  if (touches_axis && p <= -1) throw Error("integral of |x|^p diverges near x = 0 for p <= -1");
  Measure mx;
  if (box.x0 >= 0) {
    mx = positive_integral(p, box.x0, box.x1);
  } else if (box.x1 <= 0) {
    mx = positive_integral(p, -box.x1, -box.x0);
  } else {
    Measure left = positive_integral(p, 0, -box.x0), right = positive_integral(p, 0, box.x1);
    mx.value = left.value + right.value;
    if (left.exact && right.exact) mx.exact = *left.exact + *right.exact;
  }
  Rational height = box.y1 - box.y0;
  Measure m;
  m.value = mx.value * to_double(height);
  if (mx.exact) {
    m.exact = *mx.exact * height;
    m.value = to_double(*m.exact);
  }
  return m;
}

std::vector<Vec2> box_lattice(double x0, double x1, double y0, double y1, std::size_t grid) {
  if (grid == 0) throw Error("grid must be positive");
  std::size_t nx = 1;
  for (std::size_t d = 1; d * d <= grid; ++d)
    if (grid % d == 0) nx = d;
  std::size_t ny = grid / nx;
  auto at = [](double lo, double hi, std::size_t i, std::size_t n) {
    return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) pts.push_back({at(x0, x1, i, nx), at(y0, y1, j, ny)});
  return pts;
}

MidpointReport midpoint_box(const Rational& ell, std::size_t grid, const MidpointOptions& opts) {
  if (ell <= 0) throw Error("ell must be positive");
  const double l = to_double(ell);
  MidpointReport rep;
  rep.ell = ell;
  rep.grid = grid;
  rep.tol_mid = opts.tol_mid;
  rep.eps_certified = 1 / (2 * ell);
  auto a0 = box_lattice(-l - 1, -l, 0, 1, grid);
  auto a1 = box_lattice(l, l + 1, 0, 1, grid);
  rep.samples.resize(a0.size() * a1.size());
  parallel_for(rep.samples.size(), [&](std::size_t k) {
    MidpointSample& s = rep.samples[k];
    s.q0 = a0[k / a1.size()];
    s.q1 = a1[k % a1.size()];
    try {
      auto d = distance_numeric(s.q0, s.q1, opts.distance);
      s.d01 = d.distance;
      s.midpoint = d.arc.point(d.arc.samples.size() / 2);
      s.d0m = distance_numeric(s.q0, s.midpoint, opts.distance).distance;
      s.dm1 = distance_numeric(s.midpoint, s.q1, opts.distance).distance;
      s.accepted = std::abs(s.d0m - s.dm1) <= opts.tol_mid && std::abs(s.d0m + s.dm1 - s.d01) <= opts.tol_mid;
    } catch (const Error&) {
      s.accepted = false;
    }
  });

  rep.x_min = rep.y_min = INFINITY;
  rep.x_max = rep.y_max = -INFINITY;
  rep.strip = true;
  for (const auto& s : rep.samples) {
    if (!s.accepted) continue;
    ++rep.accepted;
    rep.x_min = std::min(rep.x_min, s.midpoint[0]);
    rep.x_max = std::max(rep.x_max, s.midpoint[0]);
    rep.y_min = std::min(rep.y_min, s.midpoint[1]);
    rep.y_max = std::max(rep.y_max, s.midpoint[1]);
    rep.max_balance_defect = std::max(rep.max_balance_defect, std::abs(s.d0m - s.dm1));
    rep.max_sum_defect = std::max(rep.max_sum_defect, std::abs(s.d0m + s.dm1 - s.d01));
    double lo = std::min(s.q0[1], s.q1[1]), hi = std::max(s.q0[1], s.q1[1]);
    if (s.midpoint[1] < lo - opts.tol_mid || s.midpoint[1] > hi + opts.tol_mid) rep.strip = false;
  }
  rep.eps_empirical = rep.accepted ? std::max(0.0, std::max(-rep.x_min, rep.x_max) - 1) : 0;
  rep.contained = rep.accepted == rep.samples.size() && rep.eps_empirical <= to_double(rep.eps_certified);
  return rep;
}

BMReport bm_from_midpoints(const Rational& p, MidpointReport mid) {
  if (p < 0) throw Error("p must be non-negative");
  BMReport r;
  r.p = p;
  r.ell = mid.ell;
  r.m_a0 = measure_of_box(p, {-mid.ell - 1, -mid.ell, 0, 1});
  r.m_a1 = measure_of_box(p, {mid.ell, mid.ell + 1, 0, 1});
  Rational reach = 1 + mid.eps_certified;
  r.bound = measure_of_box(p, {-reach, reach, 0, 1});
  r.lhs = std::sqrt(r.m_a0.value * r.m_a1.value);
  if (r.m_a0.exact && r.m_a1.exact && *r.m_a0.exact == *r.m_a1.exact) r.lhs = to_double(*r.m_a0.exact);
  r.margin = r.lhs - r.bound.value;
  r.midpoints = std::move(mid);
  if (!r.midpoints.contained || !r.midpoints.strip) {
    r.inconclusive = true;
    r.flag = "midpoint containment certificate failed";
    return r;
  }
  r.violated = r.margin > 0;
  if (!r.violated) r.flag = "crude box bound insufficient at this scale";
  return r;
}

BMReport bm_violation_check(const Rational& p, const Rational& ell, std::size_t grid, const MidpointOptions& opts) {
  if (p < 0) throw Error("p must be non-negative");
  return bm_from_midpoints(p, midpoint_box(ell, grid, opts));
}

}  // namespace srkit::grushin
