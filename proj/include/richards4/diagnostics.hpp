#pragma once

/**
 * @file diagnostics.hpp
 * @brief Discrete a priori estimates, difference-quotient bounds, uniqueness
 *        and maximum-principle monitors evaluated on trajectories.
 */

#include <vector>

#include "richards4/constitutive.hpp"
#include "richards4/grid.hpp"
#include "richards4/stepper.hpp"

namespace richards4 {

struct EnergyRow {
  double t = 0.0;
  double B_int = 0.0;             ///< int B(u^n)
  double grad_sq = 0.0;           ///< int |grad u^n|^2
  double lap_sq = 0.0;            ///< gamma int (lap u^n)^2
  double cum_dissipation = 0.0;   ///< sum_{k<=n} h (grad_sq_k / 2 + lap_sq_k)
  double cum_B = 0.0;             ///< sum_{k<=n} h B_int_k
  double pre_gronwall_rhs = 0.0;  ///< int B(u^0) + beta |Omega| t_n + beta cum_B
};

struct EnergyReport {
  double beta = 1.0;
  double gronwall_bound = 0.0;  ///< (int B(u^0) + beta |Omega| T) exp(beta T)
  std::vector<EnergyRow> rows;  ///< one per stored state, rows[0] is t = 0

  /// Largest value of B_int + cum_dissipation - gronwall_bound over all rows.
  double gronwall_excess() const;
  /// Largest value of B_int + cum_dissipation - pre_gronwall_rhs over all rows.
  double pre_gronwall_excess() const;
  bool holds(double slack) const {
    return gronwall_excess() <= slack && pre_gronwall_excess() <= slack;
  }
};

EnergyReport energy_report(const Trajectory& traj, const TransformedCoefficients& coeffs,
                           double beta);

/// sum_{n>=k} h (1/delta) int (b(u^n) - b(u^{n-k})) (u^n - u^{n-k}), delta = k h.
/// Throws InvalidParameter unless delta is a positive integer multiple of h.
double time_quotient_check(const Trajectory& traj, double delta,
                           const TransformedCoefficients& coeffs);

/// sum_n h int ((u^n - u^{n-1}) / h)^2.
double regularity_monitor(const Trajectory& traj);

struct UniquenessProbe {
  double max_discrepancy = 0.0;  ///< max_n l2_norm(u1^n - u2^n)
  Trajectory reference;
  Trajectory perturbed;
};

/// Runs the same problem twice, the second time starting every Newton solve
/// from guess_scale * u^{n-1}.
UniquenessProbe uniqueness_probe(const Field& u0, const StepConfig& cfg,
                                 const TransformedCoefficients& coeffs, double guess_scale = 0.9);

/// max_n l2_norm(a^n - b^n) for two trajectories of equal length.
double trajectory_discrepancy(const Trajectory& a, const Trajectory& b);

/// max(0, max_n max_z u^n - max(max u^0, 0)).
double max_principle_check(const Trajectory& traj);
/// max(0, min(min u^0, 0) - min_n min_z u^n).
double min_principle_violation(const Trajectory& traj);

/// l2_norm(b(states[0]) - b(u0)).
double initial_condition_check(const Trajectory& traj, const Field& u0,
                               const TransformedCoefficients& coeffs);

/// Nodewise B(u) integrated over the column.
double integrate_legendre(const Field& u, const TransformedCoefficients& coeffs);

}  // namespace richards4
