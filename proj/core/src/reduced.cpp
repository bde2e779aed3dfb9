#include "saddledyn/reduced.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "saddledyn/singularity.hpp"

namespace sdyn {

LeadingGadDeriv leading_gad_field(const Vec2& x, const Vec2& vbar, double alpha,
                                  const Mat2& A, double eps) {
  LeadingGadDeriv d;
  d.x_dot = rotation2(-alpha) * vbar;
  const Vec2 pv = perp(vbar);
  d.vbar_dot = (-2.0 * pv.dot(A * x) / (eps * eps)) * pv;
  return d;
}

Vec2 leading_isd_field(const Vec2& x, double alpha, const Mat2& A) {
  const Vec2 ax = A * x;
  return -(rotation2(-alpha) * ax) / ax.norm();
}

Vec2 doubled_angle(const Vec2& v) {
  // (cos 2phi, sin 2phi) from (cos phi, sin phi)
  return Vec2(v[0] * v[0] - v[1] * v[1], 2.0 * v[0] * v[1]);
}

LeadingOrderDiscrepancy full_vs_leading_consistency(const EnergyModel& model,
                                                    const GadState& state,
                                                    double eps) {
  if (model.dimension() != 2)
    throw std::invalid_argument("full_vs_leading_consistency requires 2D");

  // Singularity data at the origin of the model.
  const Vec origin = Vec::Zero(2);
  const Vec g0 = model.gradient(origin);
  const double alpha = std::atan2(g0[1], g0[0]);
  const ThirdTensor T = model.third(origin);
  CubicCoeffs c;
  c.e111 = T(0, 0, 0);
  c.e112 = T(0, 0, 1);
  c.e122 = T(0, 1, 1);
  c.e222 = T(1, 1, 1);
  const Mat2 A = matrix_A(c);

  const GadDeriv full = gad_field(model, state, eps);
  // vbar' = 2 <v', R(pi/2) v> R(pi/2) vbar
  const Vec2 v(state.v[0], state.v[1]);
  const Vec2 vbar = doubled_angle(v);
  const double phi_dot = full.v_dot.dot(perp(v));
  const Vec2 vbar_dot_full = 2.0 * phi_dot * perp(vbar);

  const LeadingGadDeriv lead =
      leading_gad_field(Vec2(state.x[0], state.x[1]), vbar, alpha, A, eps);

  LeadingOrderDiscrepancy out;
  out.x_err = (Vec2(full.x_dot[0], full.x_dot[1]) - lead.x_dot).norm();
  out.vbar_err = (eps * eps) * (vbar_dot_full - lead.vbar_dot).norm();
  return out;
}

PolarDeriv polar_field(const PolarState& s, double alpha, double eps) {
  if (!(s.r > 0.0)) throw std::invalid_argument("polar_field requires r > 0");
  PolarDeriv d;
  d.r_dot = std::cos(2.0 * s.phi - alpha - s.theta);
  d.theta_dot = std::sin(2.0 * s.phi - alpha - s.theta) / s.r;
  d.phi_dot = s.r * std::sin(2.0 * s.phi - s.theta) / (eps * eps);
  return d;
}

PolarDeriv rescaled_polar_field(const PolarState& s, double alpha) {
  return polar_field(s, alpha, 1.0);
}

ReducedDeriv reduced_field(const ReducedState& s, double alpha) {
  if (!(s.r > 0.0)) throw std::invalid_argument("reduced_field requires r > 0");
  ReducedDeriv d;
  d.r_dot = std::cos(s.omega - alpha);
  d.omega_dot = 2.0 * s.r * std::sin(s.omega) - std::sin(s.omega - alpha) / s.r;
  return d;
}

Mat2 reduced_jacobian(const ReducedState& s, double alpha) {
  Mat2 j;
  j(0, 0) = 0.0;
  j(0, 1) = -std::sin(s.omega - alpha);
  j(1, 0) = 2.0 * std::sin(s.omega) + std::sin(s.omega - alpha) / (s.r * s.r);
  j(1, 1) = 2.0 * s.r * std::cos(s.omega) - std::cos(s.omega - alpha) / s.r;
  return j;
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Plus: return "plus";
    case Branch::Minus: return "minus";
    case Branch::Undecided: return "undecided";
  }
  return "unknown";
}

FixedPointReport fixed_points(double alpha) {
  if (!(std::cos(alpha) > 0.0))
    throw std::domain_error("fixed_points requires cos(alpha) > 0");
  FixedPointReport rep;
  rep.alpha = alpha;
  rep.r0 = std::sqrt(1.0 / (2.0 * std::cos(alpha)));
  rep.omega0_plus = alpha + 0.5 * std::numbers::pi;
  rep.omega0_minus = alpha - 0.5 * std::numbers::pi;
  rep.J_plus = reduced_jacobian({rep.r0, rep.omega0_plus}, alpha);
  rep.J_minus = reduced_jacobian({rep.r0, rep.omega0_minus}, alpha);
  const double sa = std::sin(alpha);
  rep.stable_branch = sa > 0.0 ? Branch::Plus
                     : sa < 0.0 ? Branch::Minus
                                : Branch::Undecided;
  return rep;
}

double predicted_radius(double alpha, double eps) {
  if (!(std::cos(alpha) > 0.0))
    throw std::domain_error("predicted_radius requires cos(alpha) > 0");
  if (std::sin(alpha) == 0.0)
    throw std::domain_error("predicted_radius requires sin(alpha) != 0");
  if (!(eps >= 0.0)) throw std::domain_error("predicted_radius requires eps >= 0");
  return eps / std::sqrt(2.0 * std::cos(alpha));
}

bool radius_domain_warning(double alpha) {
  return std::abs(alpha) > kRadiusDomainWarning;
}

}  // namespace sdyn
