#pragma once

/**
 * @file stepper.hpp
 * @brief Backward-Euler stepping of the transformed fourth-order equation.
 *
 * Each step solves, for u = u^n given u^{n-1},
 *
 *     (b(u) - b(u^{n-1}))/h + d/dz(K_f(b(u)) e3) - lap(u) + gamma lap^2(u) = f^n
 *
 * by damped Newton iteration with a pentadiagonal Jacobian. f^n is an
 * optional additive source (zero for the physical problem).
 */

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "richards4/banded.hpp"
#include "richards4/constitutive.hpp"
#include "richards4/grid.hpp"

namespace richards4 {

struct StepConfig {
  double h = 0.01;            ///< time step (s)
  double gamma = 0.1;         ///< gamma = epsilon/g (m^2)
  double t_end = 1.0;         ///< final time T (s)
  double newton_tol = 1e-6;   ///< max-norm residual tolerance
  int newton_max_iter = 30;
  double damping = 0.5;       ///< backtracking factor in (0, 1)
  bool lag_gravity = false;   ///< drop d(K_f)/du from the Jacobian (Picard-style)

  /// Throws InvalidParameter on any violated constraint, including h <= 1/beta.
  void validate(double beta) const;
  /// Number of steps N = ceil(t_end / h).
  int steps() const;
};

/// Accept iff h <= 1/beta (the boundary value is admissible).
bool check_timestep(double h, double beta);

struct Trajectory {
  StepConfig config;
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<int> newton_iters;       ///< per accepted step (size N)
  std::vector<double> residual_norms;  ///< per accepted step (size N)
  int roundoff_limited_steps = 0;      ///< steps accepted at the rounding floor

  std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
  const Column& column() const { return states.front().column; }
};

struct StepOptions {
  const Eigen::VectorXd* source = nullptr;         ///< f^n, nodal
  const Eigen::VectorXd* initial_guess = nullptr;  ///< Newton start; defaults to u_old
  long step_index = -1;                            ///< for error messages only
};

struct StepResult {
  Field u;
  int iterations = 0;
  double residual_norm = 0.0;
  /// Accepted above newton_tol because the residual reached its rounding
  /// floor (large gamma / dz^4); see step().
  bool roundoff_limited = false;
};

using SourceFunction = std::function<Eigen::VectorXd(double t)>;

struct RunOptions {
  SourceFunction source;     ///< evaluated at t_n for step n, if set
  double guess_scale = 1.0;  ///< Newton starts from guess_scale * u^{n-1}
};

/// Nodal value of the step equation's left side minus the source.
Field residual(const Field& u_new, const Field& u_old, const StepConfig& cfg,
               const TransformedCoefficients& coeffs, const Eigen::VectorXd* source = nullptr);

/// Newton Jacobian of residual() with respect to u_new; bandwidth 2.
BandedMatrix jacobian(const Field& u_new, const StepConfig& cfg,
                      const TransformedCoefficients& coeffs);

/// Damped Newton. Converged when the max-norm residual is <= newton_tol;
/// a stalled iteration is still accepted (and flagged) if the residual is
/// within rounding of the assembled terms, which happens once gamma/dz^4 is
/// large enough that newton_tol is below machine precision.
StepResult step(const Field& u_old, const StepConfig& cfg, const TransformedCoefficients& coeffs,
                const StepOptions& options = {});

Trajectory run(const Field& u0, const StepConfig& cfg, const TransformedCoefficients& coeffs,
               const RunOptions& options = {});

}  // namespace richards4
