#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddledyn/landscape.hpp"
#include "saddledyn/spectral.hpp"

namespace sdyn {

enum class Dynamics { Gradient, Isd, Gad };

enum class StepMethod { Rk4, Rk45 };

struct IntegratorConfig {
  StepMethod method = StepMethod::Rk45;

  // fixed-step (Rk4)
  double dt = 1e-3;

  // adaptive (Rk45, Dormand-Prince 5(4))
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 0.1;

  double t_max = 100.0;

  double tol_g = 1e-8;    // convergence threshold on |grad E|
  double tol_gap = 1e-6;  // singularity gap threshold
  double r_max = 10.0;    // domain radius

  double eps = 0.05;  // GAD orientation relaxation parameter (> 0)

  // speed floor distinguishing blow-up from slow convergence
  double blowup_speed_floor = 1e-4;

  void validate() const;
};

struct GadState {
  Vec x;
  Vec v;  // unit orientation
};

struct TrajectorySample {
  double t = 0.0;
  Vec x;
  Vec v;  // tracked v1 (gradient/ISD) or GAD orientation
  double grad_norm = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double v_err = 0.0;  // |v - v1| (GAD), 0 otherwise
};

enum class StopTag {
  ConvergedToSaddle,
  ConvergedToCritical,
  SingularityApproach,
  BlowUp,
  DomainExit,
  MaxTime,
  NumericalFailure,
};

std::string to_string(StopTag tag);

struct StopEvent {
  StopTag tag = StopTag::MaxTime;
  Vec x_last;
  int morse_index = -1;                 // Converged* payload
  double gap = 0.0;                     // SingularityApproach payload
  double t_star = 0.0;                  // BlowUp payload (estimated blow-up time)
  std::string detail;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StopEvent stop;
};

/// -grad E(x).
Vec gradient_flow_field(const EnergyModel& model, const Vec& x);

/// ISD right-hand side -(I - 2 v1 v1') grad E with v1 sign-aligned to v_prev
/// when given. `degenerate` is set (field zeroed) when the gap is below
/// tol_gap; the caller converts that into a SingularityApproach event.
struct IsdEval {
  Vec field;
  SpectralInfo info;
  bool degenerate = false;
};
IsdEval isd_field(const EnergyModel& model, const Vec& x,
                  const Vec* v_prev = nullptr, double tol_gap = 1e-6);

/// GAD right-hand side: x' = -(I-2vv')grad E, eps^2 v' = -(I-vv') H v.
struct GadDeriv {
  Vec x_dot;
  Vec v_dot;
};
GadDeriv gad_field(const EnergyModel& model, const GadState& state, double eps);

/// Event-aware integration of the selected dynamics. For GAD, v0 must be a
/// unit vector (defaults to v1(x0)); for the ISD, v0 only seeds the
/// eigenvector sign alignment.
Trajectory integrate(const EnergyModel& model, Dynamics dynamics, const Vec& x0,
                     const IntegratorConfig& config,
                     const std::optional<Vec>& v0 = std::nullopt);

/// Closed form -(I - 2 v1 v1') hess E(x*) of the ISD linearization at an
/// index-1 saddle; rejects points that fail the saddle conditions.
Mat isd_jacobian_at_saddle(const EnergyModel& model, const Vec& x_star,
                           double tol_g = 1e-8, double tol_gap = 1e-6);

}  // namespace sdyn
