#pragma once

#include "srkit/rational_function.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace srkit::grushin {

/// m_p = |x|^p dx dy on the plane, or on [0,∞)×R when half is set.
struct GrushinModel {
  Rational p;
  bool half = false;
};

/// N ∈ (2, ∞], with ∞ as the empty value (1/∞ = 0).
struct Dimension {
  std::optional<Rational> value;

  static Dimension infinite() { return {}; }
  static Dimension finite(Rational n) { return {std::move(n)}; }
  bool is_infinite() const { return !value; }
  bool operator==(const Dimension&) const = default;
};

std::string to_string(const Dimension& n);
/// "inf", "∞" or a rational.
Dimension parse_dimension(std::string_view text);

/// Symmetric 2-tensor in the coordinate coframe, coefficients in (x, y).
struct RicciTensor2D {
  RationalFunction dxdx{2};
  RationalFunction dxdy{2};
  RationalFunction dydy{2};

  bool operator==(const RicciTensor2D& o) const {
    return dxdx == o.dxdx && dxdy == o.dxdy && dydy == o.dydy;
  }
};

/// The closed-form N-Bakry–Émery Ricci tensor of (R², dx² + dy²/x², |x|^p dx dy).
RicciTensor2D ricci_nv(const Rational& p, const Dimension& n);

/// Ingredients of Ric_g + Hess_g V − dV⊗dV/(N−2), computed from the metric alone.
struct MetricCurvature {
  RicciTensor2D ricci_g;
  RicciTensor2D hess_v;
  std::array<RationalFunction, 2> dv{RationalFunction(2), RationalFunction(2)};
  RicciTensor2D ricci_nv;
};

/// Generic Levi-Civita route: Christoffel symbols, Ricci curvature, Hessian of V and the
/// weighted tensor for a diagonal-or-not 2×2 metric with the weight of m_p.
MetricCurvature ricci_from_metric(const Rational& p, const Dimension& n);

/// Same computation for an arbitrary metric g_ij and log-density gradient of m (w.r.t. dx dy).
MetricCurvature curvature_of(const std::array<std::array<RationalFunction, 2>, 2>& g,
                             const std::array<RationalFunction, 2>& log_density_gradient, const Dimension& n);

/// N_p = (p+1)²/(p−1) + 2, and ∞ at p = 1.
Dimension n_threshold(const Rational& p);

/// Eigenvalue test of ricci_nv at x in the orthonormal frame {∂_x, x∂_y}.
bool ricci_psd(const Rational& p, const Dimension& n, const Rational& x);

/// Exact values of the tensor in the orthonormal frame: (Ric(e1,e1), Ric(e1,e2), Ric(e2,e2)).
std::array<Rational, 3> ricci_orthonormal(const Rational& p, const Dimension& n, const Rational& x);

struct DistanceBounds {
  double lower = 0;
  /// Absent when both x-coordinates vanish.
  std::optional<double> upper;
};

using Vec2 = std::array<double, 2>;

/// |x_a − x_b| ≤ d(a,b) ≤ |x_a − x_b| + |y_a − y_b| / max{|x_a|, |x_b|}.
DistanceBounds distance_bounds(const Vec2& a, const Vec2& b);

/// (x, y, p_x, p_y).
using State = std::array<double, 4>;

struct GeodesicArc {
  Vec2 start{};
  Vec2 covector{};
  double duration = 0;
  double step = 0;
  std::vector<State> samples;
  double h0 = 0;
  /// max_t |H(t) − H(0)| / H(0).
  double max_drift = 0;
  bool accepted = false;
  /// x changes sign somewhere along the samples.
  bool crosses_axis = false;

  Vec2 end() const { return {samples.back()[0], samples.back()[1]}; }
  Vec2 point(std::size_t k) const { return {samples[k][0], samples[k][1]}; }
  /// T·√(2H).
  double length() const;
};

inline constexpr double default_drift_tolerance = 1e-9;
inline constexpr std::size_t default_steps = 2048;

double hamiltonian(const State& s);

/// Integrates ẋ = p_x, ẏ = x²p_y, ṗ_x = −x p_y², ṗ_y = 0 with classical RK4.
/// The arc is accepted when the relative H drift stays within drift_tol.
GeodesicArc geodesic_shoot(const Vec2& q0, const Vec2& covector, double duration, double step,
                           double drift_tol = default_drift_tolerance);

struct DistanceOptions {
  double tol = 1e-6;
  std::size_t seeds = 64;
  std::size_t steps = default_steps;
  double drift_tol = default_drift_tolerance;
  bool half = false;
};

struct DistanceResult {
  double distance = 0;
  DistanceBounds bounds;
  /// Initial covector of the minimizing arc over unit time.
  Vec2 covector{};
  double residual = 0;
  /// |length at n steps − length at n/2 steps| / 15.
  double discretization_error = 0;
  std::size_t seeds_tried = 0;
  std::size_t converged = 0;
  std::size_t distinct = 0;
  GeodesicArc arc;
};

/// Length of the shortest of the shooting solutions found from the multistart seeds. Throws
/// when nothing converges or the result falls outside the distance_bounds window.
DistanceResult distance_numeric(const Vec2& q0, const Vec2& q1, const DistanceOptions& opts = {});

/// Exact ∫∫_box |x|^p dx dy when representable, with a floating value always.
struct Measure {
  std::optional<Rational> exact;
  double value = 0;
};

struct Box {
  Rational x0, x1, y0, y1;
};

Measure measure_of_box(const Rational& p, const Box& box);

struct MidpointSample {
  Vec2 q0{}, q1{}, midpoint{};
  double d01 = 0, d0m = 0, dm1 = 0;
  bool accepted = false;
};

struct MidpointReport {
  Rational ell;
  std::size_t grid = 0;
  std::vector<MidpointSample> samples;
  std::size_t accepted = 0;
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  double max_balance_defect = 0;
  double max_sum_defect = 0;
  double tol_mid = 1e-4;
  /// ε_ℓ = 1/(2ℓ) from d(q0,q1) ≤ 2ℓ + 2 + 1/ℓ.
  Rational eps_certified;
  /// Smallest ε with every accepted midpoint inside |x| ≤ 1 + ε.
  double eps_empirical = 0;
  bool contained = false;
  bool strip = false;
};

struct MidpointOptions {
  double tol_mid = 1e-4;
  DistanceOptions distance;
};

/// Midpoints of geodesics between G grid points of A₀ = [−ℓ−1,−ℓ]×[0,1] and G of A₁ = [ℓ,ℓ+1]×[0,1].
MidpointReport midpoint_box(const Rational& ell, std::size_t grid, const MidpointOptions& opts = {});

/// The G points of a box used by midpoint_box: an nx × ny lattice including the corners,
/// nx the largest divisor of G not above √G.
std::vector<Vec2> box_lattice(double x0, double x1, double y0, double y1, std::size_t grid);

struct BMReport {
  Rational p;
  Rational ell;
  Measure m_a0, m_a1;
  MidpointReport midpoints;
  /// m_p([−1−ε, 1+ε]×[0,1]) with the certified ε.
  Measure bound;
  double lhs = 0;
  double margin = 0;
  bool violated = false;
  bool inconclusive = false;
  std::string flag;
};

BMReport bm_violation_check(const Rational& p, const Rational& ell, std::size_t grid, const MidpointOptions& opts = {});
/// Verdict part only, reusing already computed midpoints.
BMReport bm_from_midpoints(const Rational& p, MidpointReport mid);

}  // namespace srkit::grushin
