#pragma once

#include <vector>

#include "saddledyn/flows.hpp"
#include "saddledyn/singularity.hpp"

namespace sdyn {

/// Grid specification for the sampled sublevel-component certificate.
struct RegionSpec {
  double level = 0.0;            // gradient-norm level L
  Vec lo, hi;                    // per-axis bounding box
  std::vector<int> resolution;   // cells per axis, >= 8
  Vec seed;                      // point inside the intended component

  void validate(int dim) const;
};

/// Sampled (non-rigorous) version of the index-1 sublevel-component check:
/// flood fill over cells with |grad E(center)| <= L from the seed cell,
/// index-1 test at every cell center. Only certificates with
/// touches_boundary == false verify the boundedness hypothesis.
struct RegionCertificate {
  RegionSpec spec;
  std::vector<int> cells;        // flattened indices of the component
  bool index1_everywhere = false;
  double min_margin = 0.0;       // min over cells of min(-lambda1, lambda2)
  bool touches_boundary = false;

  Vec cell_center(int flat_index) const;
};
RegionCertificate certify_region(const EnergyModel& model, const RegionSpec& spec);

/// Lyapunov diagnostic along an ISD trajectory: |grad E| monotone within slack
/// and measured exponential decay rate of |grad E|^2 against the bound
/// 2 min(-lambda1, lambda2). The check restricts itself to the leading prefix
/// of samples with lambda1 < 0 < lambda2 and reports partial coverage.
struct LyapunovReport {
  bool pass = false;
  bool monotone = false;
  bool partial = false;          // trajectory left the index-1 region
  size_t prefix = 0;             // samples covered
  double rate_overall = 0.0;     // average rate over the prefix
  double rate_tail = 0.0;        // rate over the trailing half of the prefix
  double bound = 0.0;            // 2 * min over samples of min(-l1, l2)
};
LyapunovReport lyapunov_check(const Trajectory& traj);

/// Max over samples of |v - v1(x)| for a GAD trajectory (samples with a
/// collapsed gap are skipped; adiabaticity is meaningless there).
double gad_tracking_check(const Trajectory& traj, double tol_gap = 1e-6);

/// One integration per grid cell, labeled with the terminal event.
struct BasinSpec {
  Vec lo, hi;
  std::vector<int> resolution;
  Dynamics dynamics = Dynamics::Isd;
  IntegratorConfig config;
};
struct BasinMap {
  BasinSpec spec;
  std::vector<StopTag> labels;   // row-major over the grid
  std::vector<Vec> x_last;
  Vec cell_center(int flat_index) const;
};
BasinMap basin_scan(const EnergyModel& model, const BasinSpec& spec, int threads = 1);

/// Late-time annulus statistics of a GAD orbit around a located singularity.
/// Burn-in and window lengths scale with eps (the orbit period is O(eps)).
struct CycleMeasurement {
  Vec center;
  double burn_in = 0.0;
  double window = 0.0;
  double r_mean = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double width = 0.0;
  double predicted = 0.0;
  bool no_cycle = false;         // orbit escaped |x - z| > 10 * predicted
};
struct CycleOptions {
  double burn_in_over_eps = 50.0;
  double window_over_eps = 100.0;
  double theta0 = 0.0;           // starting angle on the predicted circle
  IntegratorConfig config;       // eps is taken from here
};
CycleMeasurement measure_cycle(const EnergyModel& model,
                               const SingularityReport& sing,
                               const CycleOptions& opts);

/// Global-convergence benchmark: GAD from a deterministic point set in the ball
/// of radius r with v0 = v1(x0). Hypotheses (index-1 everywhere, coercive
/// gradient) are sampled first; refuses to certify when they fail.
struct BenchmarkReport {
  bool hypothesis_index1 = false;
  bool hypothesis_coercive = false;
  int total = 0;
  int converged = 0;
  std::vector<StopEvent> failures;
  bool certified() const {
    return hypothesis_index1 && hypothesis_coercive && converged == total;
  }
};
BenchmarkReport benchmark_global(const EnergyModel& model, double radius,
                                 double eps, const IntegratorConfig& config,
                                 int points = 25);

/// Bisection along the segment {(x, y_fixed)} for the eigenvalue crossing
/// H11 = H22 (valid when H12 vanishes on the segment, as in the double-well
/// family), plus a side test whether the ISD field points toward the crossing
/// from both sides.
struct LineStudy {
  double r_c = 0.0;
  bool attractive = false;
  bool bracketed = false;
};
LineStudy singular_line_study(const EnergyModel& model, double x_lo, double x_hi,
                              double y_fixed = 0.0, double tol = 1e-9);

}  // namespace sdyn
