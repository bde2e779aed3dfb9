#include "saddledyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "saddledyn/reduced.hpp"

namespace sdyn {

namespace {

// Row-major flattening helpers shared by the grid ops.
struct Grid {
  Vec lo, hi;
  std::vector<int> res;

  int cells() const {
    int c = 1;
    for (int r : res) c *= r;
    return c;
  }
  Vec center(int flat) const {
    const int d = static_cast<int>(res.size());
    Vec x(d);
    for (int k = d - 1; k >= 0; --k) {
      const int i = flat % res[k];
      flat /= res[k];
      x[k] = lo[k] + (i + 0.5) * (hi[k] - lo[k]) / res[k];
    }
    return x;
  }
  // index along each axis from flat id
  std::vector<int> multi(int flat) const {
    const int d = static_cast<int>(res.size());
    std::vector<int> idx(d);
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = flat % res[k];
      flat /= res[k];
    }
    return idx;
  }
  int flat(const std::vector<int>& idx) const {
    int f = 0;
    for (size_t k = 0; k < idx.size(); ++k) f = f * res[k] + idx[k];
    return f;
  }
};

}  // namespace

void RegionSpec::validate(int dim) const {
  if (!(level > 0.0)) throw std::invalid_argument("RegionSpec: level must be > 0");
  if (lo.size() != dim || hi.size() != dim || seed.size() != dim ||
      static_cast<int>(resolution.size()) != dim)
    throw std::invalid_argument("RegionSpec: dimension mismatch");
  for (int r : resolution)
    if (r < 8) throw std::invalid_argument("RegionSpec: resolution must be >= 8 per axis");
  for (int k = 0; k < dim; ++k)
    if (!(lo[k] < hi[k])) throw std::invalid_argument("RegionSpec: lo must be < hi");
}

Vec RegionCertificate::cell_center(int flat_index) const {
  return Grid{spec.lo, spec.hi, spec.resolution}.center(flat_index);
}

RegionCertificate certify_region(const EnergyModel& model, const RegionSpec& spec) {
  spec.validate(model.dimension());
  const Grid grid{spec.lo, spec.hi, spec.resolution};

  if (model.gradient(spec.seed).norm() > spec.level)
    throw std::invalid_argument("certify_region: seed outside the sublevel set");

  RegionCertificate cert;
  cert.spec = spec;

  // seed cell
  std::vector<int> seed_idx(grid.res.size());
  for (size_t k = 0; k < grid.res.size(); ++k) {
    const double w = (grid.hi[k] - grid.lo[k]) / grid.res[k];
    int i = static_cast<int>((spec.seed[k] - grid.lo[k]) / w);
    seed_idx[k] = std::clamp(i, 0, grid.res[k] - 1);
  }
  const int seed_flat = grid.flat(seed_idx);
  if (model.gradient(grid.center(seed_flat)).norm() > spec.level)
    throw std::invalid_argument("certify_region: seed cell outside the sublevel set");

  std::vector<char> in_comp(grid.cells(), 0);
  std::vector<int> stack{seed_flat};
  in_comp[seed_flat] = 1;
  cert.index1_everywhere = true;
  cert.min_margin = std::numeric_limits<double>::infinity();

  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    cert.cells.push_back(f);

    const Vec x = grid.center(f);
    const SpectralInfo si = lowest_pairs(model.hessian(x));
    if (!(si.lambda1 < 0.0 && si.lambda2 > 0.0)) cert.index1_everywhere = false;
    cert.min_margin = std::min(cert.min_margin, std::min(-si.lambda1, si.lambda2));

    const std::vector<int> idx = grid.multi(f);
    for (size_t k = 0; k < idx.size(); ++k) {
      for (int step : {-1, +1}) {
        std::vector<int> nb = idx;
        nb[k] += step;
        if (nb[k] < 0 || nb[k] >= grid.res[k]) {
          cert.touches_boundary = true;
          continue;
        }
        const int nf = grid.flat(nb);
        if (in_comp[nf]) continue;
        if (model.gradient(grid.center(nf)).norm() <= spec.level) {
          in_comp[nf] = 1;
          stack.push_back(nf);
        }
      }
    }
  }
  std::sort(cert.cells.begin(), cert.cells.end());
  return cert;
}

LyapunovReport lyapunov_check(const Trajectory& traj) {
  LyapunovReport rep;

  size_t prefix = 0;
  while (prefix < traj.samples.size() &&
         traj.samples[prefix].lambda1 < 0.0 && traj.samples[prefix].lambda2 > 0.0)
    ++prefix;
  rep.partial = prefix < traj.samples.size();
  rep.prefix = prefix;
  if (prefix < 10) return rep;  // not enough in-region samples

  rep.monotone = true;
  double bound = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < prefix; ++i) {
    const auto& s = traj.samples[i];
    bound = std::min(bound, std::min(-s.lambda1, s.lambda2));
    if (i > 0) {
      const double prev = traj.samples[i - 1].grad_norm;
      if (s.grad_norm > prev * (1.0 + 1e-8)) rep.monotone = false;
    }
  }
  rep.bound = 2.0 * bound;

  auto rate_over = [&](size_t a, size_t b) {
    const auto& s0 = traj.samples[a];
    const auto& s1 = traj.samples[b];
    const double dt = s1.t - s0.t;
    if (dt <= 0.0 || s0.grad_norm <= 0.0 || s1.grad_norm <= 0.0) return 0.0;
    return 2.0 * (std::log(s0.grad_norm) - std::log(s1.grad_norm)) / dt;
  };
  rep.rate_overall = rate_over(0, prefix - 1);
  rep.rate_tail = rate_over(prefix / 2, prefix - 1);
  rep.pass = rep.monotone && rep.rate_overall >= 0.95 * rep.bound;
  return rep;
}

double gad_tracking_check(const Trajectory& traj, double tol_gap) {
  double worst = 0.0;
  for (const auto& s : traj.samples)
    if (!(s.gap <= tol_gap)) worst = std::max(worst, s.v_err);
  return worst;
}

Vec BasinMap::cell_center(int flat_index) const {
  return Grid{spec.lo, spec.hi, spec.resolution}.center(flat_index);
}

BasinMap basin_scan(const EnergyModel& model, const BasinSpec& spec, int threads) {
  const int dim = model.dimension();
  if (spec.lo.size() != dim || spec.hi.size() != dim ||
      static_cast<int>(spec.resolution.size()) != dim)
    throw std::invalid_argument("basin_scan: dimension mismatch");
  spec.config.validate();

  const Grid grid{spec.lo, spec.hi, spec.resolution};
  const int n = grid.cells();
  BasinMap map;
  map.spec = spec;
  map.labels.assign(n, StopTag::MaxTime);
  map.x_last.assign(n, Vec());

  auto work = [&](int begin, int end) {
    for (int f = begin; f < end; ++f) {
      const Vec x0 = grid.center(f);
      try {
        const Trajectory t = integrate(model, spec.dynamics, x0, spec.config);
        map.labels[f] = t.stop.tag;
        map.x_last[f] = t.stop.x_last;
      } catch (const std::exception&) {
        map.labels[f] = StopTag::NumericalFailure;
        map.x_last[f] = x0;
      }
    }
  };

  threads = std::max(1, threads);
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int b = t * chunk, e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return map;
}

CycleMeasurement measure_cycle(const EnergyModel& model,
                               const SingularityReport& sing,
                               const CycleOptions& opts) {
  const double eps = opts.config.eps;
  const double predicted = predicted_radius(sing.alpha, eps);

  CycleMeasurement m;
  m.center = sing.z;
  m.burn_in = opts.burn_in_over_eps * eps;
  m.window = opts.window_over_eps * eps;
  m.predicted = predicted;

  // Initial condition on the predicted circle, orientation from the stable
  // reduced fixed point: omega0 = alpha +- pi/2, phi0 = (omega0 + theta0)/2.
  const Vec e1 = sing.frame.col(0);
  const Vec e2 = sing.frame.col(1);
  const double omega0 = sing.alpha + (std::sin(sing.alpha) >= 0.0 ? 1.0 : -1.0) *
                                         0.5 * std::numbers::pi;
  const double phi0 = 0.5 * (omega0 + opts.theta0);
  const Vec x0 = sing.z + predicted * (std::cos(opts.theta0) * e1 +
                                       std::sin(opts.theta0) * e2);
  const Vec v0 = std::cos(phi0) * e1 + std::sin(phi0) * e2;

  IntegratorConfig cfg = opts.config;
  cfg.t_max = m.burn_in + m.window;
  const Trajectory traj = integrate(model, Dynamics::Gad, x0, cfg, v0);

  m.r_min = std::numeric_limits<double>::infinity();
  m.r_max = 0.0;
  double sum = 0.0;
  size_t count = 0;
  for (const auto& s : traj.samples) {
    const double r = (s.x - sing.z).norm();
    if (r > 10.0 * predicted) {
      m.no_cycle = true;
      return m;
    }
    if (s.t < m.burn_in) continue;
    m.r_min = std::min(m.r_min, r);
    m.r_max = std::max(m.r_max, r);
    sum += r;
    ++count;
  }
  if (count == 0 || traj.stop.tag == StopTag::NumericalFailure) {
    m.no_cycle = true;
    return m;
  }
  m.r_mean = sum / count;
  m.width = m.r_max - m.r_min;
  return m;
}

BenchmarkReport benchmark_global(const EnergyModel& model, double radius,
                                 double eps, const IntegratorConfig& config,
                                 int points) {
  const int dim = model.dimension();
  BenchmarkReport rep;
  rep.total = points;

  // Hypothesis sampling: index-1 on a ball grid, gradient norm growing on
  // enclosing spheres (coercivity proxy).
  rep.hypothesis_index1 = true;
  std::vector<Vec> ball;
  {
    // deterministic low-discrepancy-ish slab: golden-angle spiral in 2D,
    // axis-aligned grid otherwise
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const int m = std::max(points, 64);
    for (int i = 0; i < m; ++i) {
      const double rr = radius * std::sqrt((i + 0.5) / m);
      Vec x = Vec::Zero(dim);
      if (dim == 1) {
        x[0] = -radius + 2.0 * radius * (i + 0.5) / m;
      } else {
        const double a = golden * i;
        x[0] = std::cos(a);
        x[1] = std::sin(a);
        for (int k = 2; k < dim; ++k) x[k] = std::sin(0.5 * a * (k + 1)) / (k + 1);
        x *= rr / x.norm();
      }
      ball.push_back(x);
      const SpectralInfo si = lowest_pairs(model.hessian(x));
      if (!(si.lambda1 < 0.0 && (!std::isfinite(si.lambda2) || si.lambda2 > 0.0)))
        rep.hypothesis_index1 = false;
    }
    double g_inner = std::numeric_limits<double>::infinity();
    double g_outer = std::numeric_limits<double>::infinity();
    const int ns = 32;
    for (int i = 0; i < ns; ++i) {
      const double a = 2.0 * std::numbers::pi * i / ns;
      Vec u = Vec::Zero(dim);
      if (dim == 1) {
        u[0] = (i % 2 == 0) ? 1.0 : -1.0;
      } else {
        u[0] = std::cos(a);
        u[1] = std::sin(a);
      }
      g_inner = std::min(g_inner, model.gradient(radius * u).norm());
      g_outer = std::min(g_outer, model.gradient(1.5 * radius * u).norm());
    }
    rep.hypothesis_coercive = g_inner > 0.0 && g_outer > g_inner;
  }
  if (!rep.hypothesis_index1 || !rep.hypothesis_coercive) return rep;

  IntegratorConfig cfg = config;
  cfg.eps = eps;
  for (int i = 0; i < points; ++i) {
    const Vec& x0 = ball[i];
    const SpectralInfo si = lowest_pairs(model.hessian(x0));
    const Trajectory t = integrate(model, Dynamics::Gad, x0, cfg, si.v1);
    if (t.stop.tag == StopTag::ConvergedToSaddle)
      ++rep.converged;
    else
      rep.failures.push_back(t.stop);
  }
  return rep;
}

LineStudy singular_line_study(const EnergyModel& model, double x_lo, double x_hi,
                              double y_fixed, double tol) {
  auto d = [&](double x) {
    Vec p(2);
    p << x, y_fixed;
    const Mat H = model.hessian(p);
    return H(0, 0) - H(1, 1);
  };
  LineStudy out;
  double a = x_lo, b = x_hi, fa = d(a), fb = d(b);
  if (fa * fb > 0.0) return out;  // not bracketed
  out.bracketed = true;
  while (b - a > tol) {
    const double m = 0.5 * (a + b), fm = d(m);
    if (fa * fm <= 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  out.r_c = 0.5 * (a + b);

  // Attractive iff the ISD points toward the line from both sides.
  const double h = 64.0 * tol + 1e-6;
  Vec pl(2), pr(2);
  pl << out.r_c - h, y_fixed;
  pr << out.r_c + h, y_fixed;
  const IsdEval el = isd_field(model, pl);
  const IsdEval er = isd_field(model, pr);
  out.attractive = !el.degenerate && !er.degenerate && el.field[0] > 0.0 &&
                   er.field[0] < 0.0;
  return out;
}

}  // namespace sdyn
