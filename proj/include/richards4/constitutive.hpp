#pragma once

/**
 * @file constitutive.hpp
 * @brief Saturation and conductivity laws, Kirchhoff's transformation and
 *        the transformed coefficients b(u), b'(u), B(z) of the fourth-order
 *        Richards model.
 *
 * Pressure p is the head-like variable p = -p_c/g. The Kirchhoff map
 *
 *     u = psi(p) = int_0^p K_f(S(tau)) dtau
 *
 * is the identity for p >= 0 and bounded below by u_l on the admissible
 * range p > p_min. In u the model reads
 *
 *     d_t b(u) + div(K_f(b(u)) e3) - lap(u) + gamma lap^2(u) = 0,
 *
 * with b(u) = S(psi^{-1}(u)).
 *
 * Regularization: van Genuchten S'(p) vanishes at p = 0 and p -> -inf, so
 * a slope floor a_min is added on (p_reg, inf) and S is continued linearly
 * (C1) below p_reg until it meets s_res at p_min. Consequently S'(p) >= a_min
 * on the whole admissible range and S(p) = 1 + a_min p on the saturated
 * branch.
 */

#include <cmath>
#include <vector>

#include "richards4/error.hpp"
#include "richards4/quadrature.hpp"

namespace richards4 {

struct VanGenuchtenParams {
  double alpha_vg = 2.0;   ///< inverse pressure scale (1/m)
  double n_vg = 2.0;       ///< shape exponent, > 1
  double s_res = 0.05;     ///< residual saturation in (0, 1)
  double p_reg = -40.0;    ///< below this S is continued linearly (m)
  double a_min = 1e-4;     ///< floor on dS/dp (1/m)
  double k_floor = 1e-4;   ///< K_f(s_res), the conductivity floor
};

/// Regularized van Genuchten saturation S(p) and Mualem conductivity K_f(S).
class ConstitutiveModel {
 public:
  explicit ConstitutiveModel(const VanGenuchtenParams& params = {});

  const VanGenuchtenParams& params() const noexcept { return params_; }
  double m_vg() const noexcept { return m_; }
  /// Pressure at which the linear tail reaches s_res; the admissible range is p > p_min.
  double p_min() const noexcept { return p_min_; }
  double k_floor() const noexcept { return params_.k_floor; }

  double saturation(double p) const noexcept;
  double saturation_derivative(double p) const noexcept;

  /// K_f(s) for s in [s_res, 1]; throws DomainError outside (tolerance 1e-12).
  double conductivity(double s) const;
  /// dK_f/ds on [s_res, 1). Unbounded as s -> 1 when m_vg < 1 (Mualem).
  double conductivity_derivative(double s) const;

  /// K_f(min(s, 1)): the conductivity seen by the transformed equation,
  /// where the storage floor lets b exceed 1 on the saturated branch.
  double conductivity_saturated(double s) const noexcept;
  double conductivity_saturated_derivative(double s) const noexcept;

  /// K_f(S(p)), the Kirchhoff integrand.
  double kirchhoff_integrand(double p) const noexcept {
    return conductivity_saturated(saturation(p));
  }

 private:
  double effective_vg(double p) const noexcept;             // raw S_e(p), p < 0
  double effective_vg_derivative(double p) const noexcept;  // dS_e/dp, p < 0
  double mualem(double se) const noexcept;
  double mualem_derivative(double se) const noexcept;

  VanGenuchtenParams params_;
  double m_;
  double s_at_reg_;
  double slope_at_reg_;
  double p_min_;
};

/**
 * @brief Tabulated Kirchhoff transformation u = psi(p) and its inverse.
 *
 * Node values are integrated by adaptive Gauss-Kronrod to tol_q. Between
 * nodes psi is evaluated as node value plus a local adaptive quadrature, so
 * the tabulation never adds interpolation error. The inverse uses a cubic
 * Hermite guess followed by bracketed Newton steps on the exact psi.
 */
class KirchhoffTable {
 public:
  explicit KirchhoffTable(const ConstitutiveModel& model, double tol_q = 1e-12);

  double kirchhoff(double p) const;
  /// psi^{-1}(u); throws DomainError when u <= u_lower + margin.
  double inverse(double u) const;

  /// Phi(p) = int_0^p S(tau) K_f(S(tau)) dtau, used for the Legendre transform.
  double storage_flux_integral(double p) const;

  double u_lower() const noexcept { return u_lower_; }
  double margin() const noexcept { return 1e-9 * std::abs(u_lower_); }
  bool admissible(double u) const noexcept { return u > u_lower_ + margin(); }
  double tol_q() const noexcept { return tol_q_; }
  int interp_order() const noexcept { return 3; }

  const std::vector<double>& p_samples() const noexcept { return p_; }
  const std::vector<double>& u_samples() const noexcept { return u_; }
  const ConstitutiveModel& model() const noexcept { return model_; }

 private:
  std::size_t bracket_p(double p) const;
  double psi_from_node(std::size_t j, double p) const;

  ConstitutiveModel model_;
  double tol_q_;
  std::vector<double> p_;    // ascending, p_.front() = p_min, p_.back() = 0
  std::vector<double> u_;    // psi(p_)
  std::vector<double> k_;    // K_f(S(p_))
  std::vector<double> phi_;  // Phi(p_)
  double u_lower_;
};

/// Coefficients of the transformed equation at one value of u.
struct PointCoefficients {
  double b;   ///< b(u)
  double db;  ///< b'(u)
  double k;   ///< K_f(b(u))
  double dk;  ///< d/du K_f(b(u))
};

/**
 * Abstract coefficient set for the transformed equation. The soil model is
 * the production implementation; tests substitute simpler laws (e.g. a
 * frozen linear b) without touching the stepper.
 */
class TransformedCoefficients {
 public:
  virtual ~TransformedCoefficients() = default;

  virtual PointCoefficients evaluate(double u) const = 0;
  virtual double b(double u) const = 0;
  /// Legendre transform B(z) = int_0^z (b(z) - b(s)) ds.
  virtual double legendre(double z) const = 0;
  /// Values u must stay strictly above this bound.
  virtual double lower_bound() const = 0;
  /// Growth constant: K_f(b(z))^2 <= beta (1 + B(z)).
  virtual double beta() const = 0;

  bool admissible(double u) const { return u > lower_bound(); }
};

/// Kirchhoff-transformed soil: b, b', B, K_f(b) as functions of u.
class SoilModel final : public TransformedCoefficients {
 public:
  explicit SoilModel(const VanGenuchtenParams& params = {}, double tol_q = 1e-12);

  const ConstitutiveModel& constitutive() const noexcept { return table_.model(); }
  const KirchhoffTable& table() const noexcept { return table_; }

  double kirchhoff(double p) const { return table_.kirchhoff(p); }
  double kirchhoff_inverse(double u) const { return table_.inverse(u); }
  double b_of_u(double u) const;
  double b_prime(double u) const;
  double legendre_B(double z) const;
  /// beta = 1 certifies the growth condition since K_f <= 1 and B >= 0.
  double beta_bound() const noexcept { return 1.0; }

  PointCoefficients evaluate(double u) const override;
  double b(double u) const override { return b_of_u(u); }
  double legendre(double z) const override { return legendre_B(z); }
  double lower_bound() const override { return table_.u_lower() + table_.margin(); }
  double beta() const override { return beta_bound(); }

 private:
  KirchhoffTable table_;
};

/**
 * Legendre transform B(z) = int_0^z (b(z) - b(s)) ds of an arbitrary
 * monotone b, by adaptive quadrature. Used as a test hook and as the
 * independent route against SoilModel::legendre_B.
 */
template <typename BFunction>
double legendre_transform(BFunction&& b, double z, double tol = 1e-12) {
  if (z == 0.0) return 0.0;
  const double bz = b(z);
  return integrate_adaptive([&](double s) { return bz - b(s); }, 0.0, z, tol).value;
}

}  // namespace richards4
