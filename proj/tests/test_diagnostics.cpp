#include <doctest.h>

#include <cmath>

#include "richards4/diagnostics.hpp"
#include "richards4/harness.hpp"
#include "richards4/initial_conditions.hpp"

using namespace richards4;

namespace {

const SoilModel& soil() {
  static const SoilModel s;
  return s;
}

Trajectory bench_run(double h, double gamma = 0.1, int n_cells = 200) {
  const Column c(1.0, n_cells);
  StepConfig cfg;
  cfg.h = h;
  cfg.gamma = gamma;
  return run(project_initial_condition(InitialCondition::gaussian_lens(0.5, 0.25, 0.1), c), cfg,
             soil());
}

Trajectory constant_trajectory(const Field& u, int steps, double h) {
  Trajectory t;
  t.config.h = h;
  t.config.t_end = steps * h;
  for (int n = 0; n <= steps; ++n) {
    t.times.push_back(n * h);
    t.states.push_back(u);
  }
  t.newton_iters.assign(steps, 0);
  t.residual_norms.assign(steps, 0.0);
  return t;
}

}  // namespace

TEST_CASE("zero trajectory") {
  const Column c(1.0, 20);
  const auto t = constant_trajectory(Field(c), 4, 0.1);
  const auto rep = energy_report(t, soil(), 1.0);
  for (const auto& r : rep.rows) {
    CHECK(r.B_int == 0.0);
    CHECK(r.grad_sq == 0.0);
    CHECK(r.lap_sq == 0.0);
    CHECK(r.cum_dissipation == 0.0);
  }
  CHECK(rep.holds(0.0));
  CHECK(regularity_monitor(t) == 0.0);
  CHECK(max_principle_check(t) == 0.0);
  CHECK(min_principle_violation(t) == 0.0);
  CHECK(initial_condition_check(t, Field(c), soil()) == 0.0);
  CHECK(time_quotient_check(t, 0.1, soil()) == 0.0);
}

TEST_CASE("constant nonzero trajectory") {
  const Column c(1.0, 20);
  const auto u = Field::sample(c, [](double z) { return -0.1 * std::sin(3.14159 * z); });
  const auto t = constant_trajectory(u, 5, 0.1);
  CHECK(regularity_monitor(t) == 0.0);
  CHECK(time_quotient_check(t, 0.2, soil()) == 0.0);
  CHECK_THROWS_AS(time_quotient_check(t, 0.15, soil()), InvalidParameter);
  CHECK_THROWS_AS(time_quotient_check(t, 0.0, soil()), InvalidParameter);
}

TEST_CASE("hand-built two-step energy report") {
  const Column c(1.0, 9);
  const LinearCoefficients lin(2.0, 1.0);  // B(z) = z^2
  Trajectory t;
  t.config.h = 0.5;
  t.config.gamma = 0.3;
  t.config.t_end = 1.0;
  t.times = {0.0, 0.5, 1.0};
  t.states = {Field::sample(c, [](double z) { return z * (1 - z); }),
              Field::sample(c, [](double z) { return 0.5 * z * (1 - z); }),
              Field::sample(c, [](double z) { return 0.25 * z * z * (1 - z); })};
  t.newton_iters = {1, 1};
  t.residual_norms = {0.0, 0.0};
  const double dz = c.dz();

  auto B = [&](const Field& u) { return dz * u.values.squaredNorm(); };
  auto grad = [&](const Field& u) {
    double s = u[0] * u[0] + u[8] * u[8];
    for (int i = 1; i < 9; ++i) s += (u[i] - u[i - 1]) * (u[i] - u[i - 1]);
    return s / dz;
  };
  auto lap = [&](const Field& u) {
    auto at = [&](int i) { return i < 0 || i > 8 ? 0.0 : u[i]; };
    double s = 0.5 * (std::pow(2 * u[0] / (dz * dz), 2) + std::pow(2 * u[8] / (dz * dz), 2));
    for (int i = 0; i < 9; ++i) s += std::pow((at(i - 1) - 2 * u[i] + at(i + 1)) / (dz * dz), 2);
    return 0.3 * dz * s;
  };

  const auto rep = energy_report(t, lin, 1.0);
  REQUIRE(rep.rows.size() == 3);
  double cum = 0.0, cum_b = 0.0;
  for (int n = 0; n < 3; ++n) {
    const auto& r = rep.rows[n];
    CHECK(r.B_int == doctest::Approx(B(t.states[n])).epsilon(1e-12));
    CHECK(r.grad_sq == doctest::Approx(grad(t.states[n])).epsilon(1e-12));
    CHECK(r.lap_sq == doctest::Approx(lap(t.states[n])).epsilon(1e-12));
    if (n > 0) {
      cum += 0.5 * (0.5 * grad(t.states[n]) + lap(t.states[n]));
      cum_b += 0.5 * B(t.states[n]);
    }
    CHECK(r.cum_dissipation == doctest::Approx(cum).epsilon(1e-12));
    CHECK(r.cum_B == doctest::Approx(cum_b).epsilon(1e-12));
    CHECK(r.pre_gronwall_rhs ==
          doctest::Approx(B(t.states[0]) + 1.0 * 1.0 * r.t + cum_b).epsilon(1e-12));
  }
  CHECK(rep.gronwall_bound == doctest::Approx((B(t.states[0]) + 1.0) * std::exp(1.0)));

  const double reg = (0.5 * dz / 0.25) * ((t.states[1].values - t.states[0].values).squaredNorm() +
                                          (t.states[2].values - t.states[1].values).squaredNorm());
  CHECK(regularity_monitor(t) == doctest::Approx(reg).epsilon(1e-12));
  const double tq = (0.5 / 0.5) * 2.0 * dz *
                    ((t.states[1].values - t.states[0].values).squaredNorm() +
                     (t.states[2].values - t.states[1].values).squaredNorm());
  CHECK(time_quotient_check(t, 0.5, lin) == doctest::Approx(tq).epsilon(1e-12));
}

TEST_CASE("benchmark energy estimates and report invariants") {
  const auto traj = bench_run(0.01);
  const auto rep = energy_report(traj, soil(), soil().beta_bound());
  const double slack = 10 * traj.config.newton_tol * static_cast<double>(traj.steps());
  CHECK(rep.holds(slack));
  CHECK(rep.gronwall_excess() <= slack);
  CHECK(rep.pre_gronwall_excess() <= slack);
  for (std::size_t n = 0; n < rep.rows.size(); ++n) {
    CHECK(rep.rows[n].B_int >= 0.0);
    CHECK(rep.rows[n].B_int <= rep.gronwall_bound);
    CHECK(rep.rows[n].cum_dissipation <= rep.gronwall_bound);
    if (n > 0) {
      CHECK(rep.rows[n].cum_dissipation >= rep.rows[n - 1].cum_dissipation);
      CHECK(rep.rows[n].cum_B >= rep.rows[n - 1].cum_B);
    }
  }
}

TEST_CASE("time quotient is nonnegative and stable under refinement") {
  std::vector<double> q;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto traj = bench_run(h, 0.1, 100);
    q.push_back(time_quotient_check(traj, h, soil()));
    CHECK(q.back() > 0.0);
    CHECK(time_quotient_check(traj, 4 * h, soil()) >= 0.0);
  }
  for (double v : q) CHECK(v <= 2.0 * q.front());
}

TEST_CASE("uniqueness probe") {
  const Column c(1.0, 200);
  StepConfig cfg;
  const Field u0 = project_initial_condition(InitialCondition::gaussian_lens(0.5, 0.25, 0.1), c);
  CHECK(uniqueness_probe(u0, cfg, soil(), 1.0).max_discrepancy == 0.0);
  const auto probe = uniqueness_probe(u0, cfg, soil(), 0.9);
  CHECK(probe.max_discrepancy <= 10 * cfg.newton_tol);
  CHECK(probe.reference.steps() == 100);

  StepConfig classical = cfg;
  classical.gamma = 0.0;
  const auto a = run(u0, cfg, soil());
  const auto b = run(u0, classical, soil());
  CHECK(trajectory_discrepancy(a, b) > 1e3 * cfg.newton_tol);
}

TEST_CASE("maximum principle without the fourth-order term") {
  for (std::uint64_t seed : {1u, 2u}) {
    const Column c(1.0, 100);
    StepConfig cfg;
    cfg.gamma = 0.0;
    cfg.t_end = 0.3;
    const auto traj =
        run(project_initial_condition(InitialCondition::random_smooth(0.12), c, seed), cfg, soil());
    CHECK(max_principle_check(traj) <= 1e-8);
    CHECK(min_principle_violation(traj) <= 1e-8);
  }
}

TEST_CASE("initial condition check") {
  const Column c(1.0, 60);
  StepConfig cfg;
  cfg.t_end = 0.05;
  const Field u0 = project_initial_condition(InitialCondition::gaussian_lens(0.4, 0.2, 0.1), c);
  auto traj = run(u0, cfg, soil());
  CHECK(initial_condition_check(traj, u0, soil()) <= 1e-12);
  traj.states[0][10] -= 0.01;
  CHECK(initial_condition_check(traj, u0, soil()) > 0.0);
  const auto zero = run(Field(c), cfg, soil());
  CHECK(initial_condition_check(zero, Field(c), soil()) == 0.0);
}

TEST_CASE("integrate_legendre") {
  const Column c(1.0, 30);
  const auto u = Field::sample(c, [](double z) { return -0.15 * z * (1 - z); });
  double ref = 0.0;
  for (int i = 0; i < c.n_cells(); ++i) ref += c.dz() * soil().legendre_B(u[i]);
  CHECK(integrate_legendre(u, soil()) == doctest::Approx(ref).epsilon(1e-14));
}
