// Acceptance suite: one check per shipped guarantee, each printed as a
// PASS/FAIL line with the measured numbers. Exit code = number of failures.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "saddledyn/analysis.hpp"
#include "saddledyn/reduced.hpp"
#include "saddledyn/serialize.hpp"

using namespace sdyn;
using std::numbers::pi;

namespace {

int failures = 0;

void criterion(int n, const std::string& what, bool ok, const std::string& detail) {
  std::printf("[%s] C%02d %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

// ---------------------------------------------------------------------
// C1: attractive/repulsive singular line of the 2D double well, r_c located
// by bisection of the diagonal crossing within 1e-6.
void c1() {
  const LineStudy s6 =
      singular_line_study(make_model(ModelSpec::double_well_2d(6.0)), 0.5, 2.0);
  const LineStudy s2 =
      singular_line_study(make_model(ModelSpec::double_well_2d(2.0)), 0.5, 2.0);
  const bool ok = s6.bracketed && s6.attractive &&
                  std::abs(s6.r_c - 1.154700) < 1e-6 && s2.bracketed &&
                  !s2.attractive && std::abs(s2.r_c - 0.816497) < 1e-6;
  criterion(1, "double-well line attractive(a=6)/repulsive(a=2), r_c by bisection",
            ok,
            "r_c(6)=" + fmt(s6.r_c) + (s6.attractive ? " attractive" : " repulsive") +
                ", r_c(2)=" + fmt(s2.r_c) + (s2.attractive ? " attractive" : " repulsive"));
}

// C2: 1D convergence dichotomy over 21 initial points in [-2, 2].
void c2() {
  const EnergyModel m = make_model(ModelSpec::double_well_1d());
  IntegratorConfig cfg;
  cfg.t_max = 60.0;
  int checked = 0, agree = 0;
  for (int i = 0; i < 21; ++i) {
    const double x0 = -2.0 + 4.0 * i / 20.0;
    if (std::abs(std::abs(x0) - 1.0) < 1e-12) continue;  // boundary excluded
    Vec x(1);
    x << x0;
    const Trajectory t = integrate(m, Dynamics::Isd, x, cfg);
    const bool inside = std::abs(x0) < 1.0;
    const bool good = inside ? t.stop.tag == StopTag::ConvergedToSaddle &&
                                   std::abs(t.stop.x_last[0]) < 1e-6
                             : t.stop.tag == StopTag::DomainExit;
    ++checked;
    agree += good;
  }
  criterion(2, "1D dichotomy: converges iff |x0| < 1", agree == checked && checked == 19,
            std::to_string(agree) + "/" + std::to_string(checked) + " labels agree");
}

// C3: closed-form ISD linearization at the double-well saddle.
void c3() {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(2.0));
  const Mat J = isd_jacobian_at_saddle(m, vec2(0, 0));
  const double h = 1e-6;
  Mat fd(2, 2);
  for (int j = 0; j < 2; ++j) {
    Vec dp = Vec::Zero(2), dm = Vec::Zero(2);
    dp[j] += h;
    dm[j] -= h;
    fd.col(j) = (isd_field(m, dp).field - isd_field(m, dm).field) / (2 * h);
  }
  Mat want(2, 2);
  want << -4, 0, 0, -4;
  const double err = (fd - want).cwiseAbs().maxCoeff();
  const double sym = (fd - fd.transpose()).cwiseAbs().maxCoeff();
  const SpectralInfo si = lowest_pairs(J);
  const bool ok = err < 1e-5 && sym < 1e-5 && si.lambda1 < 0 && si.lambda2 < 0 &&
                  (J - want).cwiseAbs().maxCoeff() < 1e-12;
  criterion(3, "ISD jacobian at the saddle = diag(-4,-4)", ok,
            "fd err=" + fmt(err) + " sym=" + fmt(sym));
}

// C4: Lyapunov decay along in-region ISD trajectories, exact rate on the
// solvable quadratic.
void c4() {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(2.0));
  RegionSpec rs;
  rs.level = 1.0;
  rs.lo = vec2(-0.6, -0.6);
  rs.hi = vec2(0.6, 0.6);
  rs.resolution = {24, 24};
  rs.seed = vec2(0, 0);
  const RegionCertificate cert = certify_region(m, rs);

  IntegratorConfig cfg;
  cfg.t_max = 40.0;
  int pass = 0;
  const size_t stride = std::max<size_t>(1, cert.cells.size() / 20);
  int runs = 0;
  double worst_margin = 1e9;
  for (size_t i = 0; i < cert.cells.size() && runs < 20; i += stride, ++runs) {
    const Trajectory t =
        integrate(m, Dynamics::Isd, cert.cell_center(cert.cells[i]), cfg);
    const LyapunovReport rep = lyapunov_check(t);
    pass += rep.pass;
    worst_margin = std::min(worst_margin, rep.rate_overall / rep.bound);
  }

  Mat H(2, 2);
  H << -1, 0, 0, 2;
  const EnergyModel q = make_model(ModelSpec::quadratic(H, Vec::Zero(2)));
  const LyapunovReport qr =
      lyapunov_check(integrate(q, Dynamics::Isd, vec2(1, 1), cfg));
  const double qerr = std::abs(qr.rate_tail - 2.0) / 2.0;

  const bool ok = cert.index1_everywhere && !cert.touches_boundary &&
                  pass == runs && runs == 20 && qr.pass && qerr < 0.02;
  criterion(4, "Lyapunov decay: 20 certified trajectories + exact quadratic rate",
            ok,
            std::to_string(pass) + "/20 pass, min rate/bound=" + fmt(worst_margin) +
                ", quad rate err=" + fmt(qerr));
}

// C5: index-1 certificate without a saddle: every seeded ISD run terminates at
// the attractive singularity S1.
void c5() {
  const EnergyModel m = make_model(ModelSpec::coercive_quartic());
  RegionSpec rs;
  rs.level = 2.2;
  rs.lo = vec2(-0.5, -0.3);
  rs.hi = vec2(0.5, 0.3);
  rs.resolution = {41, 25};
  rs.seed = vec2(0, 0);
  const RegionCertificate cert = certify_region(m, rs);

  const LocateResult s1 = locate_2d(m, Vec2(0.1, 0.6));
  const bool s1ok = s1.ok() && s1.report.cls == SingClass::StableSpiral;

  IntegratorConfig cfg;
  cfg.method = StepMethod::Rk4;
  cfg.dt = 1e-3;
  cfg.t_max = 30.0;
  int runs = 0, sing = 0, near = 0, saddle = 0;
  const size_t stride = std::max<size_t>(1, cert.cells.size() / 50);
  for (size_t i = 0; i < cert.cells.size() && runs < 50; i += stride, ++runs) {
    const Trajectory t =
        integrate(m, Dynamics::Isd, cert.cell_center(cert.cells[i]), cfg);
    sing += t.stop.tag == StopTag::SingularityApproach;
    saddle += t.stop.tag == StopTag::ConvergedToSaddle;
    if (s1ok && (t.stop.x_last - s1.report.z).norm() < 0.05) ++near;
  }
  const bool ok = cert.index1_everywhere && s1ok && runs == 50 && sing == 50 &&
                  near == 50 && saddle == 0;
  criterion(5, "no-saddle index-1 region: 50/50 runs end at S1, zero saddles", ok,
            "singularity=" + std::to_string(sing) + "/50 near-S1=" +
                std::to_string(near) + " saddles=" + std::to_string(saddle) +
                (cert.touches_boundary ? " (boundary-clipped certificate)" : ""));
}

// C6: discriminant identities.
void c6() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CubicCoeffs c{g(rng), g(rng), g(rng), g(rng)};
    worst = std::max(worst,
                     std::abs(matrix_A(c).determinant() - 0.5 * discriminant(c)));
  }
  const double canon = discriminant(CubicCoeffs{3, 0, 1, 0});
  const bool ok = worst < 1e-12 && canon == 2.0;
  criterion(6, "det A = Delta/2 over 1000 draws; canonical Delta = 2 exactly", ok,
            "max |det A - Delta/2| = " + fmt(worst) + ", Delta=" + fmt(canon));
}

// C7: four-way classification of the canonical phase-plane cases.
void c7() {
  auto coeffs_for = [](double s) { return CubicCoeffs{3.0 * s, 0.0, 1.0, 0.0}; };
  const bool ok =
      classify(matrix_A(coeffs_for(1)), pi / 4) == SingClass::StableSpiral &&
      classify(matrix_A(coeffs_for(1)), 3 * pi / 4) == SingClass::UnstableSpiral &&
      classify(matrix_A(coeffs_for(1)), pi / 2) == SingClass::Center &&
      classify(matrix_A(coeffs_for(-1)), pi) == SingClass::SaddleLike;
  criterion(7, "classification of the four canonical (s,alpha) cases", ok,
            "stable/unstable/center/saddle-like");
}

// C8: finite-time blow-up with a stable T* estimate under dt_min halving.
void c8() {
  const EnergyModel m = make_model(ModelSpec::isotropic_canonical(pi / 4, 1.0));
  auto run = [&](double dt_min) {
    IntegratorConfig cfg;
    cfg.method = StepMethod::Rk45;
    cfg.dt_min = dt_min;
    cfg.t_max = 5.0;
    return integrate(m, Dynamics::Isd, vec2(0.1, 0.0), cfg);
  };
  const Trajectory a = run(1e-12);
  const Trajectory b = run(5e-13);
  const double rel = std::abs(a.stop.t_star - b.stop.t_star) /
                     std::max(a.stop.t_star, 1e-300);
  const bool ok = a.stop.tag == StopTag::BlowUp && b.stop.tag == StopTag::BlowUp &&
                  a.stop.x_last.norm() < 1e-5 && std::isfinite(a.stop.t_star) &&
                  rel < 0.05;
  criterion(8, "ISD blow-up: |x|<1e-5 at dt collapse, T* stable under halving", ok,
            "T*=" + fmt(a.stop.t_star) + " vs " + fmt(b.stop.t_star) +
                " rel=" + fmt(rel) + " |x_last|=" + fmt(a.stop.x_last.norm()));
}

// C9: reduced-system fidelity: analytic J vs numeric linearization and the
// change-of-variables consistency of the leading-order GAD.
void c9() {
  bool ja = true;
  double worst_j = 0.0;
  for (double alpha : {pi / 4, 0.4, 1.0, -0.8}) {
    const FixedPointReport fp = fixed_points(alpha);
    for (int br = 0; br < 2; ++br) {
      const double w0 = br ? fp.omega0_minus : fp.omega0_plus;
      const Mat2& J = br ? fp.J_minus : fp.J_plus;
      auto f = [&](double r, double w) {
        const ReducedDeriv d = reduced_field({r, w}, alpha);
        return Vec2(d.r_dot, d.omega_dot);
      };
      const double h = 1e-7;
      Mat2 fd;
      fd.col(0) = (f(fp.r0 + h, w0) - f(fp.r0 - h, w0)) / (2 * h);
      fd.col(1) = (f(fp.r0, w0 + h) - f(fp.r0, w0 - h)) / (2 * h);
      worst_j = std::max(worst_j, (fd - J).cwiseAbs().maxCoeff());
      ja = ja && (fd - J).cwiseAbs().maxCoeff() < 1e-8;
    }
    ja = ja && std::abs(fp.J_plus(1, 0) - 4.0 * std::cos(alpha)) < 1e-12;
  }

  // leading-order GAD integrated in cartesian form, mapped to (r, omega),
  // against the planar reduction: sup over t in [0, 20] rescaled units
  const double alpha = pi / 4, eps = 0.05;
  const double dt_resc = 2.5e-4, dt = eps * dt_resc;
  Vec2 x(eps * 1.3 * std::cos(0.2), eps * 1.3 * std::sin(0.2));
  Vec2 vbar(std::cos(2 * 0.9), std::sin(2 * 0.9));
  ReducedState s{1.3, 2 * 0.9 - 0.2};
  auto f = [&](const Vec2& xx, const Vec2& vv) {
    return leading_gad_field(xx, vv, alpha, Mat2::Identity(), eps);
  };
  auto step_red = [&](ReducedState u) {
    const auto k1 = reduced_field(u, alpha);
    const auto k2 = reduced_field({u.r + 0.5 * dt_resc * k1.r_dot,
                                   u.omega + 0.5 * dt_resc * k1.omega_dot}, alpha);
    const auto k3 = reduced_field({u.r + 0.5 * dt_resc * k2.r_dot,
                                   u.omega + 0.5 * dt_resc * k2.omega_dot}, alpha);
    const auto k4 = reduced_field({u.r + dt_resc * k3.r_dot,
                                   u.omega + dt_resc * k3.omega_dot}, alpha);
    return ReducedState{
        u.r + dt_resc / 6 * (k1.r_dot + 2 * k2.r_dot + 2 * k3.r_dot + k4.r_dot),
        u.omega + dt_resc / 6 * (k1.omega_dot + 2 * k2.omega_dot +
                                 2 * k3.omega_dot + k4.omega_dot)};
  };
  double sup = 0.0;
  for (double t = 0.0; t < 20.0; t += dt_resc) {
    const LeadingGadDeriv k1 = f(x, vbar);
    const LeadingGadDeriv k2 =
        f(x + 0.5 * dt * k1.x_dot, Vec2((vbar + 0.5 * dt * k1.vbar_dot).normalized()));
    const LeadingGadDeriv k3 =
        f(x + 0.5 * dt * k2.x_dot, Vec2((vbar + 0.5 * dt * k2.vbar_dot).normalized()));
    const LeadingGadDeriv k4 =
        f(x + dt * k3.x_dot, Vec2((vbar + dt * k3.vbar_dot).normalized()));
    x += dt / 6 * (k1.x_dot + 2 * k2.x_dot + 2 * k3.x_dot + k4.x_dot);
    vbar += dt / 6 * (k1.vbar_dot + 2 * k2.vbar_dot + 2 * k3.vbar_dot + k4.vbar_dot);
    vbar.normalize();
    s = step_red(s);
    sup = std::max(sup, std::abs(x.norm() / eps - s.r));
    // omega through unit complex numbers (no unwrapping needed)
    const std::complex<double> vb(vbar[0], vbar[1]);
    const std::complex<double> xh(x[0] / x.norm(), x[1] / x.norm());
    const std::complex<double> om_cart = vb * std::conj(xh);
    const std::complex<double> om_red = std::polar(1.0, s.omega);
    sup = std::max(sup, std::abs(om_cart - om_red));
  }
  const bool ok = ja && sup < 1e-5;
  criterion(9, "reduced fidelity: J analytic vs numeric + chart consistency", ok,
            "max J err=" + fmt(worst_j) + ", sup chart gap=" + fmt(sup));
}

// C10: stable orbit radius and O(eps^2) annulus width.
void c10() {
  const EnergyModel m = make_model(ModelSpec::isotropic_canonical(pi / 4, 1.0));
  const LocateResult loc = locate_2d(m, Vec2(0.05, -0.05));
  CycleOptions opts;
  opts.config.eps = 0.01;
  const CycleMeasurement a = measure_cycle(m, loc.report, opts);
  CycleOptions half = opts;
  half.config.eps = 0.005;
  const CycleMeasurement b = measure_cycle(m, loc.report, half);

  const double rel = std::abs(a.r_mean - a.predicted) / a.predicted;
  const double wa = a.width / (0.01 * 0.01);
  const double wb = b.width / (0.005 * 0.005);
  const bool ok = loc.ok() && !a.no_cycle && !b.no_cycle && rel < 0.10 &&
                  wa > 0.1 && wa < 10.0 && wb > 0.1 && wb < 10.0;
  criterion(10, "stable orbit: r_mean within 10%, width/eps^2 in [0.1,10]", ok,
            "r_mean=" + fmt(a.r_mean) + " pred=" + fmt(a.predicted) +
                " rel=" + fmt(rel) + " w/eps^2=" + fmt(wa) + "," + fmt(wb));
}

// C11: quasi-periodicity of the N=3 model under perturbation.
void c11() {
  Mat Hp(3, 3);
  Hp << 0.3, 0.1, 0.2, 0.1, -0.2, 0.15, 0.2, 0.15, 0.1;
  Vec bp(3);
  bp << 0.05, -0.1, 0.2;
  const auto pert =
      std::make_shared<const ModelSpec>(ModelSpec::quadratic(Hp, bp));

  const double eps = 0.01;
  bool ok = true;
  std::string detail;
  double worst_c = 0.0, worst_res = 0.0, worst_ratio = 0.0;
  for (double delta : {0.0, 0.02, 0.05}) {
    const EnergyModel m =
        make_model(ModelSpec::perturbed(ModelSpec::cycling_example_3d(), delta, pert));
    const LocateResult loc = locate_nd(m, Vec::Zero(3));
    if (!loc.ok()) {
      ok = false;
      break;
    }
    worst_res = std::max(worst_res, loc.report.residual);
    ok = ok && loc.report.residual < 1e-10;
    if (delta > 0.0) {
      const double ratio = loc.report.z.norm() / delta;
      worst_ratio = std::max(worst_ratio, ratio);
      ok = ok && ratio < 1.0;  // bounded across the sweep
    } else {
      ok = ok && loc.report.z.norm() < 1e-9;
    }

    CycleOptions opts;
    opts.config.eps = eps;
    const CycleMeasurement c = measure_cycle(m, loc.report, opts);
    ok = ok && !c.no_cycle;
    const double C = std::abs(c.r_mean - c.predicted) / (eps * (eps + delta));
    worst_c = std::max(worst_c, C);
    detail += "d=" + fmt(delta) + ":C=" + fmt(C) + " ";
  }
  ok = ok && worst_c <= 20.0;
  criterion(11, "perturbed N=3 cycles: residuals, |z|/delta, C <= 20", ok,
            detail + "max residual=" + fmt(worst_res) +
                " max|z|/d=" + fmt(worst_ratio));
}

// C12: Corollary benchmark on globally index-1 landscapes.
void c12() {
  IntegratorConfig cfg;
  cfg.t_max = 80.0;

  Mat H(2, 2);
  H << -1, 0, 0, 2;
  const EnergyModel q = make_model(ModelSpec::quadratic(H, Vec::Zero(2)));
  const BenchmarkReport a = benchmark_global(q, 2.0, 0.05, cfg, 25);

  // quadratic plus a small cubic tilt that keeps index-1 on the sampled ball
  const EnergyModel tilt = make_custom_model(2, [](const Vec& p) {
    const double x = p[0], y = p[1];
    return -0.5 * x * x + y * y + (0.05 / 6.0) * (x * x * x + y * y * y);
  });
  const BenchmarkReport b = benchmark_global(tilt, 2.0, 0.05, cfg, 25);

  const bool ok = a.certified() && a.converged == 25 && b.certified() &&
                  b.converged == 25;
  criterion(12, "benchmark: 25/25 GAD runs converge on index-1 landscapes", ok,
            "quadratic " + std::to_string(a.converged) + "/25, tilted " +
                std::to_string(b.converged) + "/25");
}

// C13: derivative oracle across the builtin catalog.
void c13() {
  Mat Hp(3, 3);
  Hp << 0.3, 0.1, 0.2, 0.1, -0.2, 0.15, 0.2, 0.15, 0.1;
  Vec bp(3);
  bp << 0.05, -0.1, 0.2;
  const std::vector<ModelSpec> catalog = {
      ModelSpec::double_well_1d(),
      ModelSpec::double_well_2d(2.0),
      ModelSpec::double_well_2d(6.0),
      ModelSpec::coercive_quartic(),
      ModelSpec::cubic_singularity(pi / 4, 1.0, 1.0),
      ModelSpec::cubic_singularity(pi, 0.5, -1.0),
      ModelSpec::isotropic_canonical(pi / 4, 1.0),
      ModelSpec::quadratic(Hp, bp),
      ModelSpec::cycling_example_3d(),
      ModelSpec::bump(3),
      ModelSpec::perturbed(ModelSpec::cycling_example_3d(), 0.05,
                           std::make_shared<const ModelSpec>(
                               ModelSpec::quadratic(Hp, bp))),
  };
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (const ModelSpec& spec : catalog) {
    const EnergyModel m = make_model(spec);
    for (int p = 0; p < 100; ++p) {
      Vec x(m.dimension());
      do {
        for (int i = 0; i < x.size(); ++i) x[i] = 2.0 * u(rng);
      } while (x.norm() > 2.0);
      worst = std::max(worst, check_derivatives(m, x, 1e-5).max_err());
    }
  }
  criterion(13, "derivative oracle < 1e-5 for every builtin at 100 points",
            worst < 1e-5, "max rel err=" + fmt(worst));
}

// C14: byte-identical portrait CSV across repeated CLI runs.
void c14() {
  auto shell = [](const std::string& args) {
    const std::string cmd = std::string(SADDLEDYN_CLI_PATH) + " " + args;
    return std::system(cmd.c_str());
  };
  auto slurp = [](const char* p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string base =
      "portrait --model doublewell2d --alpha 6 --dyn isd --lo -2,-1 --hi 2,1 "
      "--res 14,7 --out ";
  const int ra = shell(base + "/tmp/acc_portrait_a.csv > /dev/null");
  const int rb = shell(base + "/tmp/acc_portrait_b.csv > /dev/null");
  const std::string a = slurp("/tmp/acc_portrait_a.csv");
  const bool ok = ra == 0 && rb == 0 && !a.empty() &&
                  a == slurp("/tmp/acc_portrait_b.csv");
  criterion(14, "determinism: repeated portrait runs byte-identical", ok,
            std::to_string(a.size()) + " bytes compared");
}

}  // namespace

int main() {
  c1();
  c2();
  c3();
  c4();
  c5();
  c6();
  c7();
  c8();
  c9();
  c10();
  c11();
  c12();
  c13();
  c14();
  std::printf("%d/14 criteria passed\n", 14 - failures);
  return failures;
}
