#pragma once

// Closed-form limit constants and moment formulas for the crossing process
// and the stress of a projected random geometric graph, together with the
// Monte Carlo / quadrature oracles that check them.

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "rggx/geometry.hpp"
#include "rggx/rng.hpp"
#include "rggx/stress.hpp"

namespace rggx {

/// Which closed forms to use for c_d and c_d'.
///
/// `published` is the literature form 8π κ² B(3,d/2)² and
/// π κ³ B(3,d/2)² B(4,d/2). `integral` is the closed form of the defining
/// integrals, 2π κ² B(3/2,d/2)² and 4π κ³ B(3/2,d/2)² B(2,d/2), which is what
/// the Monte Carlo oracles (and simulations) reproduce.
enum class ConstantSet { published, integral };

std::string to_string(ConstantSet set);
ConstantSet constant_set_from_string(const std::string& name);

double beta_function(double a, double b);

double c_d_closed(int d);
double c_d_prime_closed(int d);
double c_d_integral(int d);
double c_d_prime_integral(int d);
double c_d(int d, ConstantSet set);
double c_d_prime(int d, ConstantSet set);

struct LimitConstants {
  int d = 3;
  double kappa = 0.0;  // κ_{d-2}
  double c_d = 0.0;
  double c_d_prime = 0.0;
};
LimitConstants limit_constants(int d, ConstantSet set = ConstantSet::published);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo estimate of
///   ∫_{2B_2} ∫_{B_d^2} 1{[0,w1]|_L ∩ [w3, w3 + w2]|_L ≠ ∅} dw1 dw2 dw3.
McEstimate c_d_montecarlo(int d, std::int64_t n_samples, RngStream& rng);

/// Monte Carlo estimate of the two-crossing analogue
///   ∫ 1{[0,x]|_L ∩ (y1+[0,z1])|_L ≠ ∅} 1{[0,x]|_L ∩ (y2+[0,z2])|_L ≠ ∅}
/// over x, z1, z2 ∈ B_d and y1, y2 ∈ 2B_2 (unit radius, unit fibre).
McEstimate c_d_prime_montecarlo(int d, std::int64_t n_samples, RngStream& rng);

/// Limit intensity M(A) = (1/8) c_d c^2 ∫_A λ_{d-2}((v + L^perp) ∩ W)^2 dv.
double limit_intensity(const Window& w, const ProjectionPlane& plane, double c, const Region2& region,
                       ConstantSet set = ConstantSet::published, QuadratureGrid grid = {});

/// Leading term (1/8) c_d t^4 delta^{2d+2} ∫_A λ_{d-2}(...)^2 dv of E ξ_t(A).
double expected_crossings_leading(const Window& w, const ProjectionPlane& plane, double t, double delta,
                                  const Region2& region = Region2::full_plane(),
                                  ConstantSet set = ConstantSet::published, QuadratureGrid grid = {});

/// Bracket for E ξ_t(A): the inf over B_2(v, 4δ) of squared slices of W_{-3δ}
/// (lower) and the sup over B_2(v, 4δ) of squared slices of W (upper), each
/// integrated over A and scaled by (1/8) c_d t^4 δ^{2d+2}.
struct IntensityBounds {
  double lower = 0.0;
  double upper = 0.0;
};
IntensityBounds intensity_bounds(const Window& w, const ProjectionPlane& plane, double t, double delta,
                                 const Region2& region, ConstantSet set = ConstantSet::published,
                                 QuadratureGrid grid = {});

/// Leading-order Var ξ_t(L) for the cube in the thermodynamic regime
/// t delta^d = c: (1/8) c^4 t^3 delta^4 (2 c_d^2 + c_d' / c).
double cube_variance_crossings(int d, double t, double c, ConstantSet set = ConstantSet::published);

struct StressQuadrature {
  int outer_per_axis = 32;  // tensor midpoint grid over the window's box
  int inner_points = 100000;  // low-discrepancy points for the inner integral
};

/// S^(1)(v) = ∫_{W} S(v, u) du with the inverse-square weight, by a
/// Kronecker (R_d) low-discrepancy rule with `inner_points` points.
double stress_profile_S1(const Window& w, const ProjectionPlane& plane, std::span<const double> v,
                         const StressQuadrature& quad = {});

struct StressIntegrals {
  double integral_s1 = 0.0;     // ∫_W S^(1)(v) dv
  double integral_s1_sq = 0.0;  // ∫_W S^(1)(v)^2 dv
  int outer_per_axis = 0;
  int inner_points = 0;
};

/// Nested quadrature: midpoint tensor grid outside, low-discrepancy inside.
/// The cube with a coordinate-axis plane is reflection symmetric in every
/// axis; the outer grid then covers one orthant only.
StressIntegrals stress_integrals(const Window& w, const ProjectionPlane& plane, const StressQuadrature& quad = {});

/// Leading-order Cov(ξ_t(W_L), stress) for the cube in the thermodynamic
/// regime: (1/2) c_d t^5 delta^{2d+2} ∫_W S^(1) (equal to
/// (1/2) c_d c^2 t^3 delta^2 ∫_W S^(1)).
double cube_covariance_cross_stress(int d, double t, double c, double integral_s1,
                                    ConstantSet set = ConstantSet::published);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Reference moments for the cube, thermodynamic regime.
struct CubeMoments {
  double t = 0.0;
  double delta = 0.0;
  double c = 0.0;
  double exp_crossings = 0.0;
  double var_crossings = 0.0;
  double var_stress = 0.0;
  double cov_cross_stress = 0.0;
  Matrix2 sigma{};  // limit covariance of (F1, F2)
};
CubeMoments cube_moments(int d, double t, double c, const StressIntegrals& integrals,
                         ConstantSet set = ConstantSet::published);

/// Centred and scaled observables:
///   F1 = (ξ - Eξ) / (t^{7/2} delta^{2d+2}),  F2 = (stress - E stress) / t^{3/2}.
std::pair<double, double> normalize_F(int d, double t, double delta, double crossings, double stress,
                                      double exp_crossings, double exp_stress);

}  // namespace rggx
