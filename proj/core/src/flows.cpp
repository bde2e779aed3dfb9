#include "saddledyn/flows.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdyn {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !(dt_init > 0.0) || !(abs_tol > 0.0) || !(rel_tol > 0.0) ||
      !(tol_g > 0.0) || !(tol_gap > 0.0) || !(r_max > 0.0) || !(t_max > 0.0) ||
      !(eps > 0.0))
    throw std::invalid_argument("IntegratorConfig: all tolerances must be > 0");
  if (!(dt_min < dt_max))
    throw std::invalid_argument("IntegratorConfig: dt_min must be < dt_max");
}

std::string to_string(StopTag tag) {
  switch (tag) {
    case StopTag::ConvergedToSaddle: return "ConvergedToSaddle";
    case StopTag::ConvergedToCritical: return "ConvergedToCritical";
    case StopTag::SingularityApproach: return "SingularityApproach";
    case StopTag::BlowUp: return "BlowUp";
    case StopTag::DomainExit: return "DomainExit";
    case StopTag::MaxTime: return "MaxTime";
    case StopTag::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

Vec gradient_flow_field(const EnergyModel& model, const Vec& x) {
  return -model.gradient(x);
}

IsdEval isd_field(const EnergyModel& model, const Vec& x, const Vec* v_prev,
                  double tol_gap) {
  IsdEval out;
  out.info = lowest_pairs(model.hessian(x));
  if (std::isfinite(out.info.gap) && out.info.gap < tol_gap) {
    out.degenerate = true;
    out.field = Vec::Zero(x.size());
    return out;
  }
  if (v_prev) out.info.v1 = align_sign(out.info.v1, *v_prev);
  const Vec g = model.gradient(x);
  out.field = -(g - 2.0 * out.info.v1.dot(g) * out.info.v1);
  return out;
}

GadDeriv gad_field(const EnergyModel& model, const GadState& state, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("gad_field requires eps > 0");
  const Vec g = model.gradient(state.x);
  const Mat H = model.hessian(state.x);
  GadDeriv d;
  d.x_dot = -(g - 2.0 * state.v.dot(g) * state.v);
  const Vec hv = H * state.v;
  d.v_dot = -(hv - state.v.dot(hv) * state.v) / (eps * eps);
  return d;
}

Mat isd_jacobian_at_saddle(const EnergyModel& model, const Vec& x_star,
                           double tol_g, double tol_gap) {
  const Vec g = model.gradient(x_star);
  if (g.norm() >= tol_g)
    throw std::invalid_argument("isd_jacobian_at_saddle: |grad E| >= tol_g");
  const Mat H = model.hessian(x_star);
  const SpectralInfo si = lowest_pairs(H);
  if (si.index != 1)
    throw std::invalid_argument("isd_jacobian_at_saddle: Morse index != 1");
  if (std::isfinite(si.gap) && si.gap <= tol_gap)
    throw std::invalid_argument("isd_jacobian_at_saddle: spectral gap <= tol_gap");
  return -(H - 2.0 * si.v1 * (si.v1.transpose() * H));
}

// ---------------------------------------------------------------------------
// Integrator

namespace {

constexpr double kAlignFloor = 0.5;  // eigenvector continuity guard (cos 60 deg)

struct RhsResult {
  Vec dy;
  bool blocked = false;  // degenerate Hessian hit during an ISD evaluation
};

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kErr[7] = {71.0 / 57600,    0.0,          -71.0 / 16695,
                            71.0 / 1920,     -17253.0 / 339200,
                            22.0 / 525,      -1.0 / 40};

class Stepper {
 public:
  Stepper(const EnergyModel& model, Dynamics dyn, const IntegratorConfig& cfg)
      : model_(model), dyn_(dyn), cfg_(cfg), n_(model.dimension()) {}

  // y layout: [x] for gradient/ISD, [x; v] for GAD.
  RhsResult rhs(const Vec& y, const Vec& v_ref) const {
    RhsResult r;
    if (!y.allFinite()) {
      // overflow from an earlier stage; surfaces as a non-finite step
      r.dy = Vec::Constant(y.size(), std::numeric_limits<double>::quiet_NaN());
      return r;
    }
    switch (dyn_) {
      case Dynamics::Gradient:
        r.dy = gradient_flow_field(model_, y);
        break;
      case Dynamics::Isd: {
        const IsdEval e = isd_field(model_, y, &v_ref, cfg_.tol_gap);
        // Stage evaluations past an eigenvector swap would mix the two sides
        // of the crossing; treat them like degenerate points and shrink.
        if (e.degenerate || std::abs(e.info.v1.dot(v_ref)) < kAlignFloor) {
          r.blocked = true;
          r.dy = Vec::Zero(n_);
        } else {
          r.dy = e.field;
        }
        break;
      }
      case Dynamics::Gad: {
        GadState s{y.head(n_), y.tail(n_)};
        const GadDeriv d = gad_field(model_, s, cfg_.eps);
        r.dy = Vec(2 * n_);
        r.dy.head(n_) = d.x_dot;
        r.dy.tail(n_) = d.v_dot;
        break;
      }
    }
    return r;
  }

  struct Attempt {
    Vec y_new;
    double err = 0.0;   // scaled error estimate (rk45)
    bool blocked = false;
    bool finite = true;
  };

  Attempt rk4_step(const Vec& y, double h, const Vec& v_ref) const {
    Attempt a;
    const RhsResult k1 = rhs(y, v_ref);
    if (k1.blocked) return blocked();
    const RhsResult k2 = rhs(y + 0.5 * h * k1.dy, v_ref);
    if (k2.blocked) return blocked();
    const RhsResult k3 = rhs(y + 0.5 * h * k2.dy, v_ref);
    if (k3.blocked) return blocked();
    const RhsResult k4 = rhs(y + h * k3.dy, v_ref);
    if (k4.blocked) return blocked();
    a.y_new = y + (h / 6.0) * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    a.finite = a.y_new.allFinite();
    return a;
  }

  Attempt rk45_step(const Vec& y, double h, const Vec& v_ref) const {
    Attempt a;
    Vec k[7];
    for (int s = 0; s < 7; ++s) {
      Vec ys = y;
      for (int j = 0; j < s; ++j)
        if (kA[s][j] != 0.0) ys += h * kA[s][j] * k[j];
      const RhsResult r = rhs(ys, v_ref);
      if (r.blocked) return blocked();
      k[s] = r.dy;
    }
    // 5th-order solution from the final row of the tableau
    a.y_new = y;
    for (int j = 0; j < 6; ++j)
      if (kA[6][j] != 0.0) a.y_new += h * kA[6][j] * k[j];
    Vec err_vec = Vec::Zero(y.size());
    for (int j = 0; j < 7; ++j)
      if (kErr[j] != 0.0) err_vec += h * kErr[j] * k[j];
    a.finite = a.y_new.allFinite() && err_vec.allFinite();
    if (a.finite) {
      double e = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        const double sc =
            cfg_.abs_tol +
            cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(a.y_new[i]));
        e = std::max(e, std::abs(err_vec[i]) / sc);
      }
      a.err = e;
    }
    return a;
  }

 private:
  static Attempt blocked() {
    Attempt a;
    a.blocked = true;
    return a;
  }
  const EnergyModel& model_;
  Dynamics dyn_;
  const IntegratorConfig& cfg_;
  int n_;
};

}  // namespace

Trajectory integrate(const EnergyModel& model, Dynamics dynamics, const Vec& x0,
                     const IntegratorConfig& config,
                     const std::optional<Vec>& v0) {
  config.validate();
  if (!x0.allFinite() || x0.size() != model.dimension())
    throw std::invalid_argument("integrate: invalid initial state");

  const int n = model.dimension();
  Trajectory traj;

  // Initial orientation: GAD state or ISD sign seed.
  SpectralInfo si0 = lowest_pairs(model.hessian(x0));
  Vec v_ref = si0.v1;
  if (v0) {
    if (v0->size() != n || !v0->allFinite() || v0->norm() == 0.0)
      throw std::invalid_argument("integrate: invalid initial orientation");
    v_ref = *v0 / v0->norm();
  }

  Vec y;
  if (dynamics == Dynamics::Gad) {
    y = Vec(2 * n);
    y.head(n) = x0;
    y.tail(n) = v_ref;
  } else {
    y = x0;
    if (dynamics == Dynamics::Isd) v_ref = align_sign(si0.v1, v_ref);
  }

  const Stepper stepper(model, dynamics, config);

  double t = 0.0;
  double dt = (config.method == StepMethod::Rk4) ? config.dt
                                                 : std::min(config.dt_init, config.dt_max);

  auto record = [&](double tt, const Vec& yy) {
    TrajectorySample s;
    s.t = tt;
    s.x = yy.head(n);
    const SpectralInfo si = lowest_pairs(model.hessian(s.x));
    s.grad_norm = model.gradient(s.x).norm();
    s.lambda1 = si.lambda1;
    s.lambda2 = si.lambda2;
    s.gap = si.gap;
    if (dynamics == Dynamics::Gad) {
      s.v = yy.tail(n);
      s.v_err = (s.v - align_sign(si.v1, s.v)).norm();
    } else {
      s.v = align_sign(si.v1, v_ref);
      s.v_err = 0.0;
    }
    traj.samples.push_back(std::move(s));
  };

  auto speed_at = [&](const Vec& yy) {
    const RhsResult r = stepper.rhs(yy, v_ref);
    return r.blocked ? 0.0 : r.dy.head(n).norm();
  };

  // Estimated blow-up time: extrapolate the gap decline over recent samples.
  auto blowup_time = [&](double gap_now) {
    for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it) {
      if (it->gap >= 2.0 * gap_now && it->t < t) {
        const double rate = (it->gap - gap_now) / (t - it->t);
        return t + gap_now / rate;
      }
    }
    if (traj.samples.size() >= 2) {
      const auto& a = traj.samples[traj.samples.size() - 2];
      const auto& b = traj.samples.back();
      const double rate = (a.gap - b.gap) / std::max(b.t - a.t, 1e-300);
      if (rate > 0.0) return t + gap_now / rate;
    }
    return t;
  };

  auto finish = [&](StopTag tag, const Vec& x_last) {
    traj.stop.tag = tag;
    traj.stop.x_last = x_last;
  };

  // Classify a terminal critical point / boundary condition at a fresh sample.
  // Returns true when the trajectory is finished.
  auto sample_events = [&](const Vec& yy) {
    const TrajectorySample& s = traj.samples.back();
    if (s.grad_norm < config.tol_g) {
      const SpectralInfo si = lowest_pairs(model.hessian(s.x));
      if (si.index == 1 && (!std::isfinite(si.gap) || si.gap > config.tol_gap)) {
        finish(StopTag::ConvergedToSaddle, s.x);
        traj.stop.morse_index = si.index;
      } else {
        finish(StopTag::ConvergedToCritical, s.x);
        traj.stop.morse_index = si.index;
      }
      return true;
    }
    if (s.x.norm() > config.r_max) {
      finish(StopTag::DomainExit, s.x);
      return true;
    }
    if (t >= config.t_max * (1.0 - 1e-12)) {
      finish(StopTag::MaxTime, s.x);
      return true;
    }
    (void)yy;
    return false;
  };

  // Fire the singularity-class event after the step size collapsed at a
  // degeneracy: blow-up requires the adaptive stepper plus speed bounded away
  // from zero (the triple indicator); otherwise report the approach.
  auto fire_singular = [&](const Vec& yy) {
    const Vec x_cur = yy.head(n);
    const double gap_now = traj.samples.back().gap;
    const double speed = speed_at(yy);
    if (config.method == StepMethod::Rk45 && speed > config.blowup_speed_floor) {
      finish(StopTag::BlowUp, x_cur);
      traj.stop.t_star = blowup_time(gap_now);
      traj.stop.gap = gap_now;
    } else {
      finish(StopTag::SingularityApproach, x_cur);
      traj.stop.gap = gap_now;
    }
  };

  record(0.0, y);
  // Initial state already inside the degenerate zone.
  if (dynamics == Dynamics::Isd && std::isfinite(si0.gap) &&
      si0.gap < config.tol_gap) {
    finish(StopTag::SingularityApproach, x0);
    traj.stop.gap = si0.gap;
    return traj;
  }
  if (sample_events(y)) return traj;

  while (true) {
    const double h = std::min(dt, config.t_max - t);
    Stepper::Attempt at = (config.method == StepMethod::Rk4)
                              ? stepper.rk4_step(y, h, v_ref)
                              : stepper.rk45_step(y, h, v_ref);

    bool reject = false;
    std::string why;
    SpectralInfo si_new;
    bool have_si = false;

    if (at.blocked) {
      reject = true;
      why = "degenerate";
    } else if (!at.finite) {
      reject = true;
      why = "nonfinite";
    } else if (config.method == StepMethod::Rk45 && at.err > 1.0) {
      reject = true;
      why = "error";
    } else if (dynamics == Dynamics::Isd) {
      si_new = lowest_pairs(model.hessian(Vec(at.y_new.head(n))));
      have_si = true;
      if (std::isfinite(si_new.gap) && si_new.gap < config.tol_gap) {
        reject = true;
        why = "degenerate";
      } else if (std::abs(si_new.v1.dot(v_ref)) < kAlignFloor) {
        reject = true;
        why = "eigvec-swap";
      }
    }

    if (reject) {
      double factor = 0.5;
      if (why == "error")
        factor = std::max(0.2, 0.9 * std::pow(at.err, -0.2));
      dt = h * factor;
      if (dt < config.dt_min) {
        if (why == "nonfinite") {
          finish(StopTag::NumericalFailure, Vec(y.head(n)));
          traj.stop.detail = "non-finite state at t=" + std::to_string(t);
        } else if (why == "error") {
          finish(StopTag::NumericalFailure, Vec(y.head(n)));
          traj.stop.detail = "step size underflow at t=" + std::to_string(t);
        } else {
          fire_singular(y);
        }
        return traj;
      }
      continue;
    }

    // accept
    t += h;
    y = at.y_new;
    if (dynamics == Dynamics::Gad) {
      const double nv = y.tail(n).norm();
      y.tail(n) /= nv;
    } else {
      if (!have_si) si_new = lowest_pairs(model.hessian(Vec(y.head(n))));
      v_ref = align_sign(si_new.v1, v_ref);
    }
    record(t, y);

    if (config.method == StepMethod::Rk45) {
      const double factor =
          (at.err > 0.0) ? std::min(5.0, std::max(0.2, 0.9 * std::pow(at.err, -0.2)))
                         : 5.0;
      dt = std::min(config.dt_max, std::max(config.dt_min, h * factor));
    } else {
      dt = config.dt;
    }

    if (sample_events(y)) return traj;
  }
}

}  // namespace sdyn
