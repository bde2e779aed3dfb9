#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "saddledyn/singularity.hpp"

using namespace sdyn;
using std::numbers::pi;

namespace {
CubicCoeffs coeffs(double a, double b, double c, double d) {
  return CubicCoeffs{a, b, c, d};
}
}  // namespace

TEST_SUITE_BEGIN("singularity");

TEST_CASE("matrix A") {
  const Mat2 id = matrix_A(coeffs(3, 0, 1, 0));
  CHECK((id - Mat2::Identity()).norm() == doctest::Approx(0.0));

  CHECK(matrix_A(coeffs(0, 0, 0, 0)).norm() == doctest::Approx(0.0));

  const Mat2 rot = matrix_A(coeffs(0, 1, 0, 3));
  Mat2 expect;
  expect << 0, -1, 1, 0;
  CHECK((rot - expect).norm() == doctest::Approx(0.0));
}

TEST_CASE("discriminant identities") {
  CHECK(discriminant(coeffs(3, 0, 1, 0)) == doctest::Approx(2.0));
  CHECK(discriminant(coeffs(0, 0, 0, 0)) == doctest::Approx(0.0));
  CHECK(discriminant(coeffs(0, 1, 0, 3)) == doctest::Approx(2.0));

  // det A = Delta / 2 over random draws
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const CubicCoeffs c = coeffs(g(rng), g(rng), g(rng), g(rng));
    CHECK(std::abs(matrix_A(c).determinant() - 0.5 * discriminant(c)) < 1e-12);
  }
}

TEST_CASE("four-way classification of the canonical cases") {
  // E = cos(a)x1 + sin(a)x2 + |x|^2/2 + (s x1^3 + x1 x2^2)/2
  const Mat2 A_s1 = matrix_A(coeffs(3, 0, 1, 0));    // s = +1
  const Mat2 A_sm1 = matrix_A(coeffs(-3, 0, 1, 0));  // s = -1
  CHECK(classify(A_s1, pi / 4) == SingClass::StableSpiral);
  CHECK(classify(A_s1, 3 * pi / 4) == SingClass::UnstableSpiral);
  CHECK(classify(A_s1, pi / 2) == SingClass::Center);
  CHECK(classify(A_sm1, pi) == SingClass::SaddleLike);
  CHECK(classify(Mat2::Zero(), 0.3) == SingClass::Degenerate);
}

TEST_CASE("classification is invariant under the isotropic reductions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-pi, pi);
  std::uniform_real_distribution<double> du(0.1, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double s = u(rng), alpha = u(rng), d = du(rng), t = u(rng);
    const Mat2 A = d * rotation2(s);
    const SingClass base = classify(A, alpha);
    // scale by d' > 0 and rotate: alpha -> alpha - t with A -> A R(-t)
    const SingClass moved = classify(Mat2(du(rng) * A * rotation2(-t)), alpha - t);
    CHECK(base == moved);
  }
}

TEST_CASE("locate_2d on the constructed singularity") {
  for (double alpha : {pi / 4, 3 * pi / 4, 1.1}) {
    const EnergyModel m =
        make_model(ModelSpec::cubic_singularity(alpha, 0.7, 1.0));
    const LocateResult res = locate_2d(m, Vec2(0.1, -0.1));
    REQUIRE(res.ok());
    CHECK(res.report.z.norm() < 1e-10);
    CHECK(res.report.lambda == doctest::Approx(0.7));
    CHECK(res.report.grad_norm == doctest::Approx(1.0));
    // gauge-fixed coefficients reproduce the constructing parameters
    CHECK(res.report.coeffs.e111 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(res.report.coeffs.e112 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(res.report.coeffs.e122 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.report.coeffs.e222 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(res.report.delta_disc == doctest::Approx(2.0));
    // reported angle matches the construction modulo the sin >= 0 gauge
    const double want = std::abs(std::remainder(alpha, 2 * pi));
    CHECK(std::abs(std::remainder(std::abs(res.report.alpha) - want, 2 * pi)) <
          1e-8);
  }
}

TEST_CASE("locate_2d hits the degenerate-jacobian wall of the double well") {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(6.0));
  const LocateResult res = locate_2d(m, Vec2(1.1, 0.3));
  CHECK(res.status == LocateStatus::DegenerateJacobian);
}

TEST_CASE("locate_2d finds both coercive-quartic singularities from a grid scan") {
  const EnergyModel m = make_model(ModelSpec::coercive_quartic());

  // oracle: scan gap(x) minima on a coarse grid to produce guesses
  double best_up = 1e9, best_dn = 1e9;
  Vec2 up, dn;
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    for (double y = -1.0; y <= 1.0; y += 0.05) {
      Vec p(2);
      p << x, y;
      const SpectralInfo si = lowest_pairs(m.hessian(p));
      if (y > 0 && si.gap < best_up) {
        best_up = si.gap;
        up = Vec2(x, y);
      }
      if (y < 0 && si.gap < best_dn) {
        best_dn = si.gap;
        dn = Vec2(x, y);
      }
    }
  }

  const LocateResult s1 = locate_2d(m, up);
  REQUIRE(s1.ok());
  CHECK((s1.report.z - Vec(Vec2(0.0, 1.0 / std::sqrt(2.0)))).norm() < 1e-9);
  CHECK(s1.report.cls == SingClass::StableSpiral);

  const LocateResult s2 = locate_2d(m, dn);
  REQUIRE(s2.ok());
  CHECK((s2.report.z - Vec(Vec2(0.0, -1.0 / std::sqrt(2.0)))).norm() < 1e-9);
  CHECK(s2.report.cls == SingClass::UnstableSpiral);

  // report invariants
  for (const auto* r : {&s1.report, &s2.report}) {
    CHECK(std::abs(r->A.determinant() - 0.5 * r->delta_disc) < 1e-10);
    CHECK((r->frame.transpose() * r->frame - Mat::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("locate_nd at delta = 0 recovers the constructed origin") {
  const EnergyModel m = make_model(ModelSpec::cycling_example_3d());
  Vec guess(3);
  guess << 0.02, -0.03, 0.01;
  const LocateResult res = locate_nd(m, guess);
  REQUIRE(res.ok());
  CHECK(res.report.z.norm() < 1e-9);
  CHECK(res.report.lambda == doctest::Approx(1.0));
  CHECK(res.report.grad_norm == doctest::Approx(1.0));
  // the x^2 y + y^3 in-plane cubic is the canonical one rotated by pi/2:
  // effective angle alpha = 3pi/4 - pi/2 = pi/4
  CHECK(res.report.alpha == doctest::Approx(pi / 4).epsilon(1e-9));
  CHECK(res.report.coeffs.e111 == doctest::Approx(3.0));
  CHECK(res.report.coeffs.e122 == doctest::Approx(1.0));
  CHECK(res.report.cls == SingClass::StableSpiral);
  // frame: plane spanned by e1, e2 is the (x1, x2) plane
  CHECK(std::abs(res.report.frame(2, 0)) < 1e-9);
  CHECK(std::abs(res.report.frame(2, 1)) < 1e-9);
}

TEST_CASE("locate_nd under perturbation stays O(delta)") {
  Mat Hp(3, 3);
  Hp << 0.3, 0.1, 0.2, 0.1, -0.2, 0.15, 0.2, 0.15, 0.1;
  Vec bp(3);
  bp << 0.05, -0.1, 0.2;
  const auto pert =
      std::make_shared<const ModelSpec>(ModelSpec::quadratic(Hp, bp));

  std::vector<double> ratios;
  for (double delta : {0.04, 0.02, 0.01}) {
    const EnergyModel m =
        make_model(ModelSpec::perturbed(ModelSpec::cycling_example_3d(), delta, pert));
    const LocateResult res = locate_nd(m, Vec::Zero(3));
    REQUIRE(res.ok());
    CHECK(res.report.residual < 1e-11);
    // report invariants: degenerate pair, in-plane gradient
    const Mat H = m.hessian(res.report.z);
    const SpectralInfo si = lowest_pairs(H);
    CHECK(si.gap < 1e-8);
    const Vec g = m.gradient(res.report.z);
    CHECK(std::abs(res.report.frame.col(2).dot(g)) < 1e-8);
    CHECK(res.report.cls == classify(res.report.A, res.report.alpha));
    ratios.push_back(res.report.z.norm() / delta);
  }
  // |z(delta)| / delta approaches the first-order sensitivity constant
  CHECK(ratios[0] == doctest::Approx(ratios[2]).epsilon(0.1));
  CHECK(ratios[1] == doctest::Approx(ratios[2]).epsilon(0.05));

  // independent oracle: dz/ddelta = -(dF/dz)^-1 dF/ddelta at delta -> 0
  const double fd_delta = 1e-5;
  const EnergyModel m0 =
      make_model(ModelSpec::perturbed(ModelSpec::cycling_example_3d(), 0.0, pert));
  const EnergyModel mp =
      make_model(ModelSpec::perturbed(ModelSpec::cycling_example_3d(), fd_delta, pert));
  const NdResidual F0(m0, Vec::Zero(3));
  const NdResidual Fp(mp, Vec::Zero(3));
  Mat J(3, 3);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    Vec dp = Vec::Zero(3), dm = Vec::Zero(3);
    dp[j] += h;
    dm[j] -= h;
    J.col(j) = (F0(dp) - F0(dm)) / (2 * h);
  }
  const Vec dFddelta = (Fp(Vec::Zero(3)) - F0(Vec::Zero(3))) / fd_delta;
  const Vec sens = Vec(-J.fullPivLu().solve(dFddelta));
  CHECK(ratios[2] == doctest::Approx(sens.norm()).epsilon(0.05));
}

TEST_CASE("locate_nd rejects windows that do not isolate two eigenvalues") {
  // lowest two eigenvalues 1 and 2 with the next at 2.5: the window radius
  // (2.5 - 1.5)/2 = 0.5 cannot hold the pair split 1.0
  Mat H = Mat::Zero(3, 3);
  H.diagonal() << 1.0, 2.0, 2.5;
  const EnergyModel m = make_model(ModelSpec::quadratic(H, Vec::Zero(3)));
  const LocateResult res = locate_nd(m, Vec::Zero(3));
  CHECK(res.status == LocateStatus::RankMismatch);
}

TEST_SUITE_END();
