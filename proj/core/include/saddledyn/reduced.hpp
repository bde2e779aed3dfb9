#pragma once

#include <string>

#include "saddledyn/flows.hpp"
#include "saddledyn/types.hpp"

namespace sdyn {

/// Leading-order GAD near a singularity in doubled-angle form:
///   x' = R(-alpha) vbar,   eps^2 vbar' = -2 <R(pi/2) vbar, A x> R(pi/2) vbar.
struct LeadingGadDeriv {
  Vec2 x_dot;
  Vec2 vbar_dot;
};
LeadingGadDeriv leading_gad_field(const Vec2& x, const Vec2& vbar, double alpha,
                                  const Mat2& A, double eps);

/// Leading-order ISD x' = -R(-alpha) A x / |A x|.
Vec2 leading_isd_field(const Vec2& x, double alpha, const Mat2& A);

/// Discrepancy between the full GAD field (doubled-angle orientation) and the
/// leading-order field at the same state; the position part is O(|x|), the
/// orientation part O(|x|^2).
struct LeadingOrderDiscrepancy {
  double x_err = 0.0;
  double vbar_err = 0.0;
};
LeadingOrderDiscrepancy full_vs_leading_consistency(const EnergyModel& model,
                                                    const GadState& state,
                                                    double eps);

/// Polar coordinates of the isotropic (A = I) leading-order GAD.
struct PolarState {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};
struct PolarDeriv {
  double r_dot = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
};
/// r' = cos(2 phi - alpha - theta), theta' = sin(2 phi - alpha - theta)/r,
/// eps^2 phi' = r sin(2 phi - theta). Rejects r = 0.
PolarDeriv polar_field(const PolarState& s, double alpha, double eps);

/// Same system on the epsilon time/space scale (r and t in units of eps).
PolarDeriv rescaled_polar_field(const PolarState& s, double alpha);

/// Planar reduction in (r, omega = 2 phi - theta):
///   r' = cos(omega - alpha), omega' = 2 r sin(omega) - sin(omega - alpha)/r.
struct ReducedState {
  double r = 0.0;
  double omega = 0.0;
};
struct ReducedDeriv {
  double r_dot = 0.0;
  double omega_dot = 0.0;
};
ReducedDeriv reduced_field(const ReducedState& s, double alpha);

/// Analytic Jacobian of reduced_field.
Mat2 reduced_jacobian(const ReducedState& s, double alpha);

enum class Branch { Plus, Minus, Undecided };
std::string to_string(Branch b);

/// Fixed points r0 = sqrt(1/(2 cos alpha)), omega0 = alpha +- pi/2 with their
/// stability matrices; requires cos(alpha) > 0. The stable branch follows the
/// sign of sin(alpha) and is undecided when sin(alpha) = 0.
struct FixedPointReport {
  double alpha = 0.0;
  double r0 = 0.0;
  double omega0_plus = 0.0;
  double omega0_minus = 0.0;
  Mat2 J_plus;
  Mat2 J_minus;
  Branch stable_branch = Branch::Undecided;
};
FixedPointReport fixed_points(double alpha);

/// Radius eps / sqrt(2 cos alpha) of the stable circular orbit in unrescaled
/// variables. Domain: cos(alpha) > 0 and sin(alpha) != 0; eps = 0 returns 0.
double predicted_radius(double alpha, double eps);

/// cos(alpha) degenerates past this point; the predicted radius diverges.
constexpr double kRadiusDomainWarning = 1.55;
bool radius_domain_warning(double alpha);

/// Map a GAD orientation v = (cos phi, sin phi) to vbar = (cos 2phi, sin 2phi).
Vec2 doubled_angle(const Vec2& v);

}  // namespace sdyn
