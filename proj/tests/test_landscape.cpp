#include <doctest.h>

#include <numbers>
#include <random>

#include "saddledyn/landscape.hpp"

using namespace sdyn;
using std::numbers::pi;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<ModelSpec> builtin_catalog() {
  Mat H(2, 2);
  H << -1, 0, 0, 2;
  Mat Hp(3, 3);
  Hp << 0.3, 0.1, 0.2, 0.1, -0.2, 0.15, 0.2, 0.15, 0.1;
  Vec bp(3);
  bp << 0.05, -0.1, 0.2;
  return {
      ModelSpec::double_well_1d(),
      ModelSpec::double_well_2d(2.0),
      ModelSpec::double_well_2d(6.0),
      ModelSpec::coercive_quartic(),
      ModelSpec::cubic_singularity(pi / 4, 1.0, 1.0),
      ModelSpec::cubic_singularity(pi, 0.5, -1.0),
      ModelSpec::isotropic_canonical(pi / 4, 1.0),
      ModelSpec::quadratic(H, Vec::Zero(2)),
      ModelSpec::cycling_example_3d(),
      ModelSpec::bump(3),
      ModelSpec::perturbed(ModelSpec::cycling_example_3d(), 0.05,
                           std::make_shared<const ModelSpec>(
                               ModelSpec::quadratic(Hp, bp))),
      ModelSpec::perturbed(ModelSpec::cycling_example_3d(), 0.05),  // default bump
  };
}

}  // namespace

TEST_SUITE_BEGIN("landscape");

TEST_CASE("double well 1d energies") {
  const EnergyModel m = make_model(ModelSpec::double_well_1d());
  CHECK(m.energy(Vec::Zero(1)) == doctest::Approx(1.0));
  CHECK(m.energy(Vec::Ones(1)) == doctest::Approx(0.0));
  CHECK(m.energy(-Vec::Ones(1)) == doctest::Approx(0.0));
}

TEST_CASE("double well 2d hessian at origin") {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(6.0));
  const Mat h = m.hessian(vec2(0, 0));
  CHECK(h(0, 0) == doctest::Approx(-4.0));
  CHECK(h(1, 1) == doctest::Approx(12.0));
  CHECK(h(0, 1) == 0.0);
  // cross-check against the finite-difference oracle
  CHECK(check_derivatives(m, vec2(0, 0), 1e-5).hess_err < 1e-8);
}

TEST_CASE("isotropic canonical third derivatives at 0") {
  const EnergyModel m = make_model(ModelSpec::isotropic_canonical(pi / 4, 1.0));
  const ThirdTensor t = m.third(vec2(0, 0));
  CHECK(t(0, 0, 0) == doctest::Approx(3.0));
  CHECK(t(0, 0, 1) == doctest::Approx(0.0));
  CHECK(t(0, 1, 1) == doctest::Approx(1.0));
  CHECK(t(1, 1, 1) == doctest::Approx(0.0));
}

TEST_CASE("eval dispatch and critical points") {
  const EnergyModel dw = make_model(ModelSpec::double_well_2d(2.0));
  CHECK(std::get<Vec>(eval(dw, vec2(1, 0), 1)).norm() == doctest::Approx(0.0));
  CHECK(std::get<Vec>(eval(dw, vec2(-1, 0), 1)).norm() == doctest::Approx(0.0));

  Mat H(2, 2);
  H << 3, 1, 1, -2;
  const EnergyModel q = make_model(ModelSpec::quadratic(H, Vec::Ones(2)));
  const Mat got = std::get<Mat>(eval(q, vec2(0.7, -0.3), 2));
  CHECK((got - H).cwiseAbs().maxCoeff() == 0.0);

  const EnergyModel cq = make_model(ModelSpec::coercive_quartic());
  const Vec g = cq.gradient(vec2(0, 0));
  CHECK(g[0] == doctest::Approx(-1.0));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(check_derivatives(cq, vec2(0, 0), 1e-5).grad_err < 1e-9);

  CHECK_THROWS_AS(eval(dw, vec2(0, 0), 4), std::invalid_argument);
  Vec bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eval(dw, bad, 0), std::invalid_argument);
}

TEST_CASE("check_derivatives examples") {
  Mat H(2, 2);
  H << 1, 0.5, 0.5, -3;
  const EnergyModel q = make_model(ModelSpec::quadratic(H, Vec::Ones(2)));
  CHECK(check_derivatives(q, vec2(0.4, -1.1), 1e-5).third_err == doctest::Approx(0.0));

  const EnergyModel iso = make_model(ModelSpec::isotropic_canonical(pi / 4, 1.0));
  const auto rep = check_derivatives(iso, vec2(0.3, -0.2), 1e-5);
  CHECK(rep.max_err() < 1e-6);

  const EnergyModel ex3d = make_model(ModelSpec::cycling_example_3d());
  CHECK(check_derivatives(ex3d, Vec::Zero(3), 1e-5).max_err() < 1e-6);

  CHECK_THROWS_AS(check_derivatives(q, vec2(0, 0), 0.0), std::invalid_argument);
}

TEST_CASE("finite differences agree for every builtin at random points") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const ModelSpec& spec : builtin_catalog()) {
    const EnergyModel m = make_model(spec);
    const int n = m.dimension();
    for (int p = 0; p < 100; ++p) {
      Vec x(n);
      do {
        for (int i = 0; i < n; ++i) x[i] = 2.0 * u(rng);
      } while (x.norm() > 2.0);
      const auto rep = check_derivatives(m, x, 1e-5);
      CAPTURE(spec.kind_name());
      CHECK(rep.max_err() < 1e-5);
    }
  }
}

TEST_CASE("third tensor permutation symmetry is exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const ModelSpec& spec : builtin_catalog()) {
    const EnergyModel m = make_model(spec);
    Vec x(m.dimension());
    for (int i = 0; i < x.size(); ++i) x[i] = u(rng);
    CHECK(m.third(x).symmetry_defect() == 0.0);
  }
}

TEST_CASE("multid_e0 restricted to the plane matches the canonical 2D model") {
  Mat H0(1, 1);
  H0 << 2.5;
  const double a0 = pi / 3, l0 = 0.8;
  const EnergyModel big = make_model(ModelSpec::multid_e0(a0, l0, H0));
  const EnergyModel flat = make_model(ModelSpec::isotropic_canonical(a0, l0));

  // identical third-order Taylor data on the x_c = 0 slice
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int p = 0; p < 20; ++p) {
    Vec x3 = Vec::Zero(3);
    x3[0] = u(rng);
    x3[1] = u(rng);
    const Vec x2 = x3.head(2);
    CHECK(big.energy(x3) == doctest::Approx(flat.energy(x2)).epsilon(1e-12));
    CHECK((big.gradient(x3).head(2) - flat.gradient(x2)).norm() ==
          doctest::Approx(0.0));
    CHECK((big.hessian(x3).topLeftCorner(2, 2) - flat.hessian(x2))
              .cwiseAbs()
              .maxCoeff() == doctest::Approx(0.0));
    const ThirdTensor t3 = big.third(x3);
    const ThirdTensor t2 = flat.third(x2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) CHECK(t3(i, j, k) == t2(i, j, k));
  }
}

TEST_CASE("spec invariants are enforced at construction") {
  CHECK_THROWS_WITH_AS(make_model(ModelSpec::double_well_2d(0.0)),
                       "DoubleWell2D requires alpha > 0", std::invalid_argument);
  CHECK_THROWS_AS(make_model(ModelSpec::double_well_2d(-2.0)), std::invalid_argument);

  // H0 must dominate max(lambda0, 0)
  Mat H0(1, 1);
  H0 << 1.0;
  CHECK_THROWS_AS(make_model(ModelSpec::multid_e0(pi / 4, 1.0, H0)),
                  std::invalid_argument);
  H0 << 1.2;
  CHECK_NOTHROW(make_model(ModelSpec::multid_e0(pi / 4, 1.0, H0)));

  CHECK_THROWS_AS(make_model(ModelSpec::perturbed(ModelSpec::cycling_example_3d(), -0.1)),
                  std::invalid_argument);

  Mat bad(2, 2);
  bad << 1, 2, 3, 4;  // not symmetric
  CHECK_THROWS_AS(make_model(ModelSpec::quadratic(bad, Vec::Zero(2))),
                  std::invalid_argument);
}

TEST_CASE("custom energy-only model differentiates by finite differences") {
  const EnergyModel m = make_custom_model(
      2, [](const Vec& x) { return std::sin(x[0]) * std::cos(x[1]); }, 1e-5);
  const Vec x = vec2(0.3, -0.7);
  const Vec g = m.gradient(x);
  CHECK(g[0] == doctest::Approx(std::cos(0.3) * std::cos(-0.7)).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(-std::sin(0.3) * std::sin(-0.7)).epsilon(1e-8));
  const Mat h = m.hessian(x);
  CHECK(h(0, 1) == doctest::Approx(-std::cos(0.3) * std::sin(-0.7)).epsilon(1e-5));
}

TEST_SUITE_END();
