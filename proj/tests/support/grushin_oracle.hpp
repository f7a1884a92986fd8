#pragma once

// Floating-point references for the Grushin plane: closed-form geodesics and finite-difference
// curvature of dx² + dy²/x² with weight |x|^p.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace srkit::oracle {

struct Flow {
  double x, y, px, py;
};

/// Solution of ẋ = p_x, ẏ = x²p_y, ṗ_x = −x p_y², ṗ_y = 0 at time t.
inline Flow grushin_flow(double x0, double y0, double px0, double c, double t) {
  if (c == 0) return {x0 + px0 * t, y0, px0, 0};
  double a = x0, b = px0 / c;
  double x = a * std::cos(c * t) + b * std::sin(c * t);
  double px = c * (-a * std::sin(c * t) + b * std::cos(c * t));
  double integral = (a * a + b * b) / 2 * t + (a * a - b * b) / (4 * c) * std::sin(2 * c * t) +
                    a * b / (2 * c) * (1 - std::cos(2 * c * t));
  return {x, y0 + c * integral, px, c};
}

/// Length of the shortest first-return geodesic from (a, 0) to (a, h), a > 0, h > 0: unit speed,
/// p_y = c, p_x = ±√(1 − a²c²), and x returns to a at cT = 2·atan(p_x/(ac)).
inline double vertical_distance(double a, double h) {
  double best = std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    auto length = [&](double c) {
      double px = sign * std::sqrt(std::max(0.0, 1 - a * a * c * c));
      double phase = std::atan(px / (a * c));
      if (phase <= 0) phase += M_PI;
      return 2 * phase / c;
    };
    auto height = [&](double c) {
      double px = sign * std::sqrt(std::max(0.0, 1 - a * a * c * c));
      return grushin_flow(a, 0, px, c, length(c)).y - h;
    };
    const double cmax = 1 / a;
    const int n = 4000;
    double prev_c = cmax * 1e-4, prev = height(prev_c);
    for (int k = 1; k <= n; ++k) {
      double c = cmax * (1e-4 + (1 - 2e-4) * k / n), val = height(c);
      if ((prev < 0) != (val < 0)) {
        double lo = prev_c, hi = c;
        for (int it = 0; it < 200; ++it) {
          double mid = (lo + hi) / 2;
          ((height(mid) < 0) == (prev < 0) ? lo : hi) = mid;
        }
        best = std::min(best, length((lo + hi) / 2));
      }
      prev_c = c;
      prev = val;
    }
  }
  return best;
}

using Sym2 = std::array<std::array<double, 2>, 2>;
using Metric = std::function<Sym2(double, double)>;

inline Sym2 inverse(const Sym2& g) {
  double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  return {{{g[1][1] / det, -g[0][1] / det}, {-g[1][0] / det, g[0][0] / det}}};
}

/// Γ^k_ij at (x, y) by central differences of the metric.
inline std::array<Sym2, 2> christoffel(const Metric& g, double x, double y, double h) {
  std::array<Sym2, 2> dg;  // dg[l][i][j] = ∂_l g_ij
  Sym2 gp = g(x + h, y), gm = g(x - h, y), hp = g(x, y + h), hm = g(x, y - h);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      dg[0][i][j] = (gp[i][j] - gm[i][j]) / (2 * h);
      dg[1][i][j] = (hp[i][j] - hm[i][j]) / (2 * h);
    }
  Sym2 inv = inverse(g(x, y));
  std::array<Sym2, 2> gamma{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) gamma[k][i][j] += inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]) / 2;
  return gamma;
}

inline Sym2 weighted_ricci_at_step(const Metric& g, const std::function<double(double, double)>& log_rho, double x,
                                   double y, std::optional<double> n, double h) {
  auto gam = [&](double a, double b) { return christoffel(g, a, b, h); };
  auto v = [&](double a, double b) {
    Sym2 m = g(a, b);
    return -(log_rho(a, b) - 0.5 * std::log(m[0][0] * m[1][1] - m[0][1] * m[1][0]));
  };
  auto G = gam(x, y);
  std::array<std::array<Sym2, 2>, 2> dG;  // dG[l][k][i][j] = ∂_l Γ^k_ij
  auto gxp = gam(x + h, y), gxm = gam(x - h, y), gyp = gam(x, y + h), gym = gam(x, y - h);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        dG[0][k][i][j] = (gxp[k][i][j] - gxm[k][i][j]) / (2 * h);
        dG[1][k][i][j] = (gyp[k][i][j] - gym[k][i][j]) / (2 * h);
      }
  std::array<double, 2> dv{(v(x + h, y) - v(x - h, y)) / (2 * h), (v(x, y + h) - v(x, y - h)) / (2 * h)};
  Sym2 ddv;
  ddv[0][0] = (v(x + h, y) - 2 * v(x, y) + v(x - h, y)) / (h * h);
  ddv[1][1] = (v(x, y + h) - 2 * v(x, y) + v(x, y - h)) / (h * h);
  ddv[0][1] = ddv[1][0] = (v(x + h, y + h) - v(x + h, y - h) - v(x - h, y + h) + v(x - h, y - h)) / (4 * h * h);
  Sym2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double ric = 0;
      for (int k = 0; k < 2; ++k) {
        ric += dG[k][k][i][j] - dG[j][k][i][k];
        for (int l = 0; l < 2; ++l) ric += G[k][k][l] * G[l][i][j] - G[k][j][l] * G[l][i][k];
      }
      double hess = ddv[i][j];
      for (int k = 0; k < 2; ++k) hess -= G[k][i][j] * dv[k];
      out[i][j] = ric + hess - (n ? dv[i] * dv[j] / (*n - 2) : 0.0);
    }
  return out;
}

/// Ric_g + Hess V − dV⊗dV/(N−2) with V = −log(ρ/√det g) for the density ρ dx dy.
/// Richardson-extrapolated over steps h and h/2.
inline Sym2 weighted_ricci(const Metric& g, const std::function<double(double, double)>& log_rho, double x, double y,
                           std::optional<double> n, double h = 2e-3) {
  Sym2 coarse = weighted_ricci_at_step(g, log_rho, x, y, n, h);
  Sym2 fine = weighted_ricci_at_step(g, log_rho, x, y, n, h / 2);
  Sym2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = (4 * fine[i][j] - coarse[i][j]) / 3;
  return out;
}

inline Metric grushin_metric() {
  return [](double x, double) { return Sym2{{{1, 0}, {0, 1 / (x * x)}}}; };
}

}  // namespace srkit::oracle
