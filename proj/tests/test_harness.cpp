#include <doctest.h>

#include <cmath>
#include <random>

#include "richards4/harness.hpp"
#include "richards4/initial_conditions.hpp"

using namespace richards4;

namespace {

const SoilModel& soil() {
  static const SoilModel s;
  return s;
}

}  // namespace

TEST_CASE("quadrature oracle") {
  CHECK(quadrature_oracle([](double) { return 1.0; }, 0.0, 1.0, 1e-14) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(quadrature_oracle([](double x) { return x * x; }, 0.0, 1.0, 1e-14) - 1.0 / 3.0) <=
        1e-14);
  CHECK(quadrature_oracle([](double x) { return std::exp(x); }, 0.0, 0.0, 1e-14) == 0.0);
  CHECK_THROWS_AS(quadrature_oracle([](double x) { return x; }, 0.0, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(
      quadrature_oracle([](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; }, 0.0, 1.0, 1e-14),
      ConvergenceError);

  // Independent check of the tabulated Kirchhoff map.
  const auto& m = soil().constitutive();
  const auto& pts = soil().table().p_samples();
  for (std::size_t j = 0; j + 1 < pts.size(); j += 7) {
    const double q = quadrature_oracle([&](double p) { return m.kirchhoff_integrand(p); },
                                       pts[j], pts[j + 1], 1e-13);
    REQUIRE(std::abs(soil().kirchhoff(pts[j + 1]) - soil().kirchhoff(pts[j]) - q) <=
            10 * soil().table().tol_q());
  }
  const double q = quadrature_oracle([&](double p) { return m.kirchhoff_integrand(p); }, -2.0, 0.0,
                                     1e-13);
  CHECK(std::abs(soil().kirchhoff(-2.0) + q) <= 10 * soil().table().tol_q());
}

TEST_CASE("manufactured solution and source") {
  ManufacturedSolution ms;
  const Column c(1.0, 40);
  CHECK(ms.shape(0.0) == 0.0);
  CHECK(ms.shape_dz(1.0) == 0.0);
  CHECK(ms.shape(0.5) == doctest::Approx(1.0));
  const double d = 1e-5;
  CHECK(ms.envelope_dt(0.3) ==
        doctest::Approx((ms.envelope(0.3 + d) - ms.envelope(0.3 - d)) / (2 * d)).epsilon(1e-8));
  CHECK(ms.shape_dzz(0.3) ==
        doctest::Approx((ms.shape_dz(0.3 + d) - ms.shape_dz(0.3 - d)) / (2 * d)).epsilon(1e-8));

  ManufacturedSolution zero;
  zero.amplitude = 0.0;
  CHECK(mms_source(zero, 0.2, c, 0.1, soil()).cwiseAbs().maxCoeff() == 0.0);

  ManufacturedSolution still;
  still.variation = 0.0;
  const Eigen::VectorXd f1 = mms_source(still, 0.1, c, 0.1, soil());
  const Eigen::VectorXd f2 = mms_source(still, 0.37, c, 0.1, soil());
  CHECK((f1 - f2).cwiseAbs().maxCoeff() == 0.0);

  // Spatial consistency on the stationary solution: the time difference
  // vanishes exactly and the residual is O(dz^2) on z in [L/4, 3L/4]. Near the
  // walls u -> 0- crosses the saturated end of K, which is not smooth.
  std::vector<double> e;
  for (int n : {39, 79, 159, 319}) {
    const Column ci(1.0, n);
    StepConfig cfg;
    const double t = 0.3;
    const Eigen::VectorXd f = mms_source(still, t, ci, cfg.gamma, soil());
    const auto r = residual(still.sample(ci, t), still.sample(ci, t), cfg, soil(), &f);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      if (ci.z(i) >= 0.25 && ci.z(i) <= 0.75) worst = std::max(worst, std::abs(r.values[i]));
    e.push_back(worst);
  }
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(std::log2(e[k - 1] / e[k]) >= 1.9);
}

TEST_CASE("convergence study: linear control") {
  ManufacturedSolution ms;
  const LinearCoefficients lin(1.0, 1.0);
  StudySettings st;
  st.levels = 3;
  st.t_end = 0.01;
  st.gamma = 0.0;
  const auto spatial = convergence_study(st, ms, lin);
  REQUIRE(spatial.size() == 3);
  CHECK(std::isnan(spatial[0].observed_order));
  for (std::size_t k = 1; k < spatial.size(); ++k) {
    CHECK(spatial[k].l2_error < spatial[k - 1].l2_error);
    CHECK(spatial[k].observed_order >= 1.9);
    CHECK(spatial[k].dz == doctest::Approx(0.5 * spatial[k - 1].dz).epsilon(0.05));
  }

  StudySettings tt = StudySettings::temporal();
  tt.levels = 3;
  tt.fixed_cells = 199;
  tt.gamma = 0.0;
  const auto temporal = convergence_study(tt, ms, lin);
  for (std::size_t k = 1; k < temporal.size(); ++k) {
    CHECK(temporal[k].h == doctest::Approx(0.5 * temporal[k - 1].h));
    CHECK(temporal[k].observed_order >= 0.9);
  }
}

TEST_CASE("dense reference step") {
  StepConfig cfg;
  const Column c(1.0, 40);
  CHECK(dense_reference_step(Field(c), cfg, soil()).values.cwiseAbs().maxCoeff() == 0.0);

  const Column bench(1.0, 200);
  const auto u0 =
      project_initial_condition(InitialCondition::gaussian_lens(0.5, 0.25, 0.1), bench);
  const auto banded = step(u0, cfg, soil());
  const auto dense = dense_reference_step(u0, cfg, soil());
  CHECK((banded.u.values - dense.values).cwiseAbs().maxCoeff() <= 100 * cfg.newton_tol);

  std::mt19937_64 rng(21);
  for (int t = 0; t < 3; ++t) {
    const Column ct(1.0, 30 + 20 * t, t == 1 ? -1 : 1);
    const auto u = project_initial_condition(InitialCondition::random_smooth(0.15), ct, rng());
    const auto a = step(u, cfg, soil());
    const auto b = dense_reference_step(u, cfg, soil());
    CHECK((a.u.values - b.values).cwiseAbs().maxCoeff() <= 100 * cfg.newton_tol);
  }
}

TEST_CASE("linear coefficients") {
  CHECK_THROWS_AS(LinearCoefficients(0.0), InvalidParameter);
  CHECK_THROWS_AS(LinearCoefficients(1.0, 1.5), InvalidParameter);
  const LinearCoefficients lin(2.0, 0.5);
  CHECK(lin.b(0.25) == 0.5);
  CHECK(lin.legendre(3.0) == 9.0);
  CHECK(lin.evaluate(-4.0).k == 0.5);
  CHECK(lin.admissible(-1e300));
}
