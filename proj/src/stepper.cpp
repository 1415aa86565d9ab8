#include "richards4/stepper.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace richards4 {

namespace {

struct Nodal {
  Eigen::VectorXd b, db, k, dk;
  double k_wall = 1.0;
};

Nodal evaluate_nodes(const Field& u, const TransformedCoefficients& c) {
  const auto n = u.size();
  Nodal out{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  out.k_wall = c.evaluate(0.0).k;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(u[i]) || !c.admissible(u[i]))
      throw DomainError("iterate outside the Kirchhoff domain", static_cast<long>(i));
    const auto pc = c.evaluate(u[i]);
    out.b[i] = pc.b;
    out.db[i] = pc.db;
    out.k[i] = pc.k;
    out.dk[i] = pc.dk;
  }
  return out;
}

Eigen::VectorXd b_values(const Field& u, const TransformedCoefficients& c) {
  Eigen::VectorXd b(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !c.admissible(u[i]))
      throw DomainError("previous state outside the Kirchhoff domain", static_cast<long>(i));
    b[i] = c.b(u[i]);
  }
  return b;
}

Eigen::VectorXd assemble_residual(const Field& u, const Nodal& nodal, const Eigen::VectorXd& b_old,
                                  const StepConfig& cfg, const Eigen::VectorXd* source) {
  const auto n = u.size();
  const double dz = u.column.dz();
  const double s = u.column.gravity_sign();
  Eigen::VectorXd r = (nodal.b - b_old) / cfg.h;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k_right = i + 1 < n ? nodal.k[i + 1] : nodal.k_wall;
    const double k_left = i > 0 ? nodal.k[i - 1] : nodal.k_wall;
    r[i] += s * (k_right - k_left) / (2.0 * dz);
  }
  r -= laplacian_clamped(u).values;
  if (cfg.gamma != 0.0) r += cfg.gamma * biharmonic_clamped(u).values;
  if (source) r -= *source;
  return r;
}

BandedMatrix assemble_jacobian(const Column& col, const Nodal& nodal, const StepConfig& cfg) {
  const int n = col.n_cells();
  const double dz = col.dz();
  const double dz2 = dz * dz;
  const double dz4 = dz2 * dz2;
  const double s = col.gravity_sign();
  BandedMatrix j(n, 2, 2);
  for (int i = 0; i < n; ++i) {
    j(i, i) += nodal.db[i] / cfg.h + 2.0 / dz2;
    if (i > 0) j(i, i - 1) -= 1.0 / dz2;
    if (i + 1 < n) j(i, i + 1) -= 1.0 / dz2;
    if (!cfg.lag_gravity) {
      if (i > 0) j(i, i - 1) -= s * nodal.dk[i - 1] / (2.0 * dz);
      if (i + 1 < n) j(i, i + 1) += s * nodal.dk[i + 1] / (2.0 * dz);
    }
    if (cfg.gamma != 0.0) {
      const double g = cfg.gamma / dz4;
      const bool wall_row = (i == 0 || i == n - 1);
      j(i, i) += g * (wall_row ? 7.0 : 6.0);
      if (i > 0) j(i, i - 1) -= 4.0 * g;
      if (i + 1 < n) j(i, i + 1) -= 4.0 * g;
      if (i > 1) j(i, i - 2) += g;
      if (i + 2 < n) j(i, i + 2) += g;
    }
  }
  return j;
}

// Size of the rounding error in the assembled residual: eps times the sum of
// the magnitudes of the terms that cancel in each row.
double roundoff_floor(const Field& u, const Nodal& nodal, const Eigen::VectorXd& b_old,
                      const StepConfig& cfg, const Eigen::VectorXd* source) {
  const auto n = u.size();
  const double dz = u.column.dz();
  const double dz2 = dz * dz;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto at = [&](Eigen::Index j) { return j >= 0 && j < n ? std::abs(u[j]) : 0.0; };
    double m = (std::abs(nodal.b[i]) + std::abs(b_old[i])) / cfg.h;
    m += 2.0 * std::max(nodal.k.maxCoeff(), nodal.k_wall) / (2.0 * dz);
    m += (at(i - 1) + 2.0 * at(i) + at(i + 1)) / dz2;
    m += cfg.gamma * (at(i - 2) + 4.0 * at(i - 1) + 7.0 * at(i) + 4.0 * at(i + 1) + at(i + 2)) /
         (dz2 * dz2);
    if (source) m += std::abs((*source)[i]);
    worst = std::max(worst, m);
  }
  return 8.0 * std::numeric_limits<double>::epsilon() * worst;
}

bool all_admissible(const Eigen::VectorXd& u, const TransformedCoefficients& c) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i]) || !c.admissible(u[i])) return false;
  return true;
}

}  // namespace

void StepConfig::validate(double beta) const {
  auto fail = [](const std::string& msg) { throw InvalidParameter(msg); };
  if (!(h > 0.0) || !std::isfinite(h)) fail("stepping.h must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail("stepping.gamma must be >= 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("stepping.t_end must be positive");
  if (!(newton_tol > 0.0)) fail("stepping.newton_tol must be positive");
  if (newton_max_iter < 1) fail("stepping.newton_max_iter must be >= 1");
  if (!(damping > 0.0 && damping < 1.0)) fail("stepping.damping must lie in (0, 1)");
  if (!check_timestep(h, beta)) {
    std::ostringstream os;
    os << "stepping.h = " << h << " violates the stability condition h <= 1/beta (beta = " << beta
       << ", 1/beta = " << 1.0 / beta << ")";
    fail(os.str());
  }
}

int StepConfig::steps() const {
  return static_cast<int>(std::ceil(t_end / h - 1e-9));
}

bool check_timestep(double h, double beta) { return h <= 1.0 / beta; }

Field residual(const Field& u_new, const Field& u_old, const StepConfig& cfg,
               const TransformedCoefficients& coeffs, const Eigen::VectorXd* source) {
  const auto nodal = evaluate_nodes(u_new, coeffs);
  return {u_new.column, assemble_residual(u_new, nodal, b_values(u_old, coeffs), cfg, source)};
}

BandedMatrix jacobian(const Field& u_new, const StepConfig& cfg,
                      const TransformedCoefficients& coeffs) {
  return assemble_jacobian(u_new.column, evaluate_nodes(u_new, coeffs), cfg);
}

StepResult step(const Field& u_old, const StepConfig& cfg, const TransformedCoefficients& coeffs,
                const StepOptions& options) {
  const Eigen::VectorXd b_old = b_values(u_old, coeffs);
  Field u = options.initial_guess ? Field(u_old.column, *options.initial_guess) : u_old;
  if (!all_admissible(u.values, coeffs))
    throw DomainError("Newton initial guess outside the Kirchhoff domain");

  Nodal nodal = evaluate_nodes(u, coeffs);
  Eigen::VectorXd r = assemble_residual(u, nodal, b_old, cfg, options.source);
  double rnorm = r.lpNorm<Eigen::Infinity>();
  if (rnorm <= cfg.newton_tol) return {u, 0, rnorm};

  for (int iter = 1; iter <= cfg.newton_max_iter; ++iter) {
    const BandedLU lu(assemble_jacobian(u.column, nodal, cfg));
    const Eigen::VectorXd delta = lu.solve(-r);
    const double merit = r.norm();

    double lambda = 1.0;
    bool accepted = false;
    bool ever_admissible = false;
    Field trial = u;
    for (int backtrack = 0; backtrack < 60; ++backtrack, lambda *= cfg.damping) {
      trial.values = u.values + lambda * delta;
      if (!all_admissible(trial.values, coeffs)) continue;
      ever_admissible = true;
      Nodal trial_nodal = evaluate_nodes(trial, coeffs);
      Eigen::VectorXd trial_r = assemble_residual(trial, trial_nodal, b_old, cfg, options.source);
      const double trial_inf = trial_r.lpNorm<Eigen::Infinity>();
      if (trial_r.norm() <= (1.0 - 1e-4 * lambda) * merit || trial_inf <= cfg.newton_tol) {
        u = std::move(trial);
        nodal = std::move(trial_nodal);
        r = std::move(trial_r);
        rnorm = trial_inf;
        accepted = true;
        break;
      }
    }
    if (!ever_admissible) {
      throw DomainError("damping could not keep the Newton iterate in the Kirchhoff domain" +
                        (options.step_index >= 0 ? " (step " + std::to_string(options.step_index) + ")"
                                                 : std::string()));
    }
    if (accepted && rnorm <= cfg.newton_tol) return {u, iter, rnorm};
    if (rnorm <= roundoff_floor(u, nodal, b_old, cfg, options.source)) return {u, iter, rnorm, true};
    if (!accepted) throw ConvergenceError("Newton line search stalled", rnorm, options.step_index);
  }
  throw ConvergenceError("Newton did not converge in " + std::to_string(cfg.newton_max_iter) +
                             " iterations",
                         rnorm, options.step_index);
}

Trajectory run(const Field& u0, const StepConfig& cfg, const TransformedCoefficients& coeffs,
               const RunOptions& options) {
  cfg.validate(coeffs.beta());
  if (!u0.all_finite()) throw DomainError("initial condition has non-finite values");
  const int n_steps = cfg.steps();
  Trajectory traj;
  traj.config = cfg;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  for (int n = 1; n <= n_steps; ++n) {
    const double t = n * cfg.h;
    Eigen::VectorXd source;
    Eigen::VectorXd guess;
    StepOptions opts;
    opts.step_index = n;
    if (options.source) {
      source = options.source(t);
      opts.source = &source;
    }
    if (options.guess_scale != 1.0) {
      guess = options.guess_scale * traj.states.back().values;
      opts.initial_guess = &guess;
    }
    std::optional<StepResult> res;
    try {
      res = step(traj.states.back(), cfg, coeffs, opts);
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at step " + std::to_string(n), e.node());
    }
    traj.times.push_back(t);
    traj.states.push_back(std::move(res->u));
    traj.newton_iters.push_back(res->iterations);
    traj.residual_norms.push_back(res->residual_norm);
    if (res->roundoff_limited) ++traj.roundoff_limited_steps;
  }
  return traj;
}

}  // namespace richards4
