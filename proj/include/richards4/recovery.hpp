#pragma once

/**
 * @file recovery.hpp
 * @brief Back-transformation of u to pressure, saturation and the Darcy flux
 *        of the fourth-order model.
 */

#include <Eigen/Dense>

#include "richards4/constitutive.hpp"
#include "richards4/grid.hpp"
#include "richards4/stepper.hpp"

namespace richards4 {

/// p = psi^{-1}(u) nodewise; DomainError carries the offending node.
Field pressure_field(const Field& u, const SoilModel& model);

/// S = b(u) nodewise.
Field saturation_field(const Field& u, const SoilModel& model);

/// L2 norm over interior faces of grad p - grad u / K_f(b(u_face)), where
/// u_face is the face average. Vanishes at O(dz^2) on smooth fields.
double gradient_consistency(const Field& u, const SoilModel& model);

/**
 * Darcy flux on the n+1 faces, walls included:
 *
 *     v = gravity_sign K_f(b(u)) - grad u + gamma grad(lap u),
 *
 * with the same face conductivities as the stepper. Its face difference
 * reproduces the flux part of the step residual, so
 * (b(u^n) - b(u^{n-1}))/h + div v = residual.
 */
Eigen::VectorXd darcy_flux(const Field& u, double gamma, const TransformedCoefficients& coeffs);

/// Node values of the Darcy flux (average of the two adjacent faces).
Field darcy_velocity(const Field& u, const StepConfig& cfg, const TransformedCoefficients& coeffs);

/// Face differences (v_{i+1/2} - v_{i-1/2}) / dz of a face vector.
Field flux_divergence(const Column& column, const Eigen::VectorXd& faces);

}  // namespace richards4
