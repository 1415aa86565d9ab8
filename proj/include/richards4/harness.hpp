#pragma once

/**
 * @file harness.hpp
 * @brief Verification oracles: manufactured solutions, convergence studies,
 *        an independent quadrature rule and a dense reference step.
 */

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

#include "richards4/constitutive.hpp"
#include "richards4/grid.hpp"
#include "richards4/stepper.hpp"

namespace richards4 {

/**
 * u*(z, t) = A(t) * 16 z^2 (L - z)^2 / L^4 with
 * A(t) = -amplitude * (1 + variation * sin(omega t)).
 * Satisfies the clamped conditions exactly.
 */
struct ManufacturedSolution {
  double length = 1.0;
  double amplitude = 0.1;
  double variation = 0.5;
  double omega = 2.0 * 3.14159265358979323846;

  double envelope(double t) const;
  double envelope_dt(double t) const;
  double shape(double z) const;
  double shape_dz(double z) const;
  double shape_dzz(double z) const;
  double shape_dzzzz() const;

  double value(double z, double t) const { return envelope(t) * shape(z); }
  Field sample(const Column& column, double t) const;
};

/// f = d_t b(u*) + d_z(gravity_sign K_f(b(u*))) - u*_zz + gamma u*_zzzz at the nodes.
Eigen::VectorXd mms_source(const ManufacturedSolution& ms, double t, const Column& column,
                           double gamma, const TransformedCoefficients& coeffs);

enum class RefinementMode { Spatial, Temporal };

struct StudySettings {
  RefinementMode mode = RefinementMode::Spatial;
  int levels = 4;          ///< number of grids (levels - 1 halvings)
  int coarse_cells = 19;   ///< spatial mode: n_cells of the coarsest grid
  double coarse_h = 0.025; ///< temporal mode: h of the coarsest level
  int fixed_cells = 799;   ///< temporal mode: n_cells
  double fixed_h = 1e-4;   ///< spatial mode: h
  double t_end = 0.05;
  double gamma = 0.1;
  int gravity_sign = 1;
  double newton_tol = 1e-10;

  /// dz halved from 1/20 with h = 1e-4 to T = 0.05.
  static StudySettings spatial() { return {}; }
  /// h halved from 0.025 on 799 cells to T = 0.5.
  static StudySettings temporal() {
    StudySettings s;
    s.mode = RefinementMode::Temporal;
    s.t_end = 0.5;
    return s;
  }
};

struct ConvergenceLevel {
  int level = 0;
  double dz = 0.0;
  double h = 0.0;
  double l2_error = 0.0;
  double observed_order = std::numeric_limits<double>::quiet_NaN();  ///< NaN on level 0
};

/// Solves the manufactured problem on successively halved dz (or h) and
/// reports the final-time L2 error and log2 error ratios. Levels run
/// concurrently.
std::vector<ConvergenceLevel> convergence_study(const StudySettings& settings,
                                                const ManufacturedSolution& ms,
                                                const TransformedCoefficients& coeffs);

/// Adaptive Simpson with Richardson correction; independent of the
/// Gauss-Kronrod rule used by the Kirchhoff tables. Throws ConvergenceError
/// when the recursion depth is exhausted.
double quadrature_oracle(const std::function<double(double)>& f, double a, double b, double tol);

/// One backward-Euler step with dense assembly and Eigen's LU, written
/// independently of the banded stepper (biharmonic assembled as the second
/// difference of the wall-augmented Laplacian).
Field dense_reference_step(const Field& u_old, const StepConfig& cfg,
                           const TransformedCoefficients& coeffs,
                           const Eigen::VectorXd* source = nullptr);

/// b(u) = a u, K_f = k0: the linear heat/plate limit used as a control.
class LinearCoefficients final : public TransformedCoefficients {
 public:
  explicit LinearCoefficients(double a = 1.0, double k0 = 1.0) : a_(a), k0_(k0) {
    if (!(a > 0.0)) throw InvalidParameter("linear storage coefficient must be positive");
    if (!(k0 > 0.0 && k0 <= 1.0)) throw InvalidParameter("linear conductivity must lie in (0, 1]");
  }
  PointCoefficients evaluate(double u) const override { return {a_ * u, a_, k0_, 0.0}; }
  double b(double u) const override { return a_ * u; }
  double legendre(double z) const override { return 0.5 * a_ * z * z; }
  double lower_bound() const override { return -std::numeric_limits<double>::infinity(); }
  double beta() const override { return 1.0; }

 private:
  double a_;
  double k0_;
};

}  // namespace richards4
