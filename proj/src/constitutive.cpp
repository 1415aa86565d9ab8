#include "richards4/constitutive.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace richards4 {

namespace {

std::string format_value(const char* name, double v) {
  std::ostringstream os;
  os.precision(17);
  os << name << " = " << v;
  return os.str();
}

}  // namespace

ConstitutiveModel::ConstitutiveModel(const VanGenuchtenParams& params) : params_(params) {
  const auto& q = params_;
  if (!(q.alpha_vg > 0.0) || !std::isfinite(q.alpha_vg))
    throw InvalidParameter(format_value("alpha_vg must be positive and finite; got alpha_vg", q.alpha_vg));
  if (!(q.n_vg > 1.0) || !std::isfinite(q.n_vg))
    throw InvalidParameter(format_value("n_vg must exceed 1; got n_vg", q.n_vg));
  if (!(q.s_res > 0.0 && q.s_res < 1.0))
    throw InvalidParameter(format_value("s_res must lie in (0, 1); got s_res", q.s_res));
  if (!(q.p_reg < 0.0) || !std::isfinite(q.p_reg))
    throw InvalidParameter(format_value("p_reg must be negative; got p_reg", q.p_reg));
  if (!(q.a_min > 0.0) || !std::isfinite(q.a_min))
    throw InvalidParameter(format_value("a_min must be positive; got a_min", q.a_min));
  if (!(q.k_floor > 0.0 && q.k_floor < 1.0))
    throw InvalidParameter(format_value("k_floor must lie in (0, 1); got k_floor", q.k_floor));

  m_ = 1.0 - 1.0 / q.n_vg;
  s_at_reg_ = q.s_res + (1.0 - q.s_res) * effective_vg(q.p_reg) + q.a_min * q.p_reg;
  slope_at_reg_ = (1.0 - q.s_res) * effective_vg_derivative(q.p_reg) + q.a_min;
  if (!(s_at_reg_ > q.s_res)) {
    throw InvalidParameter(
        "a_min * |p_reg| is too large: regularized saturation at p_reg falls below s_res");
  }
  p_min_ = q.p_reg - (s_at_reg_ - q.s_res) / slope_at_reg_;
}

double ConstitutiveModel::effective_vg(double p) const noexcept {
  const double x = params_.alpha_vg * std::abs(p);
  return std::exp(-m_ * std::log1p(std::pow(x, params_.n_vg)));
}

double ConstitutiveModel::effective_vg_derivative(double p) const noexcept {
  const double n = params_.n_vg;
  const double x = params_.alpha_vg * std::abs(p);
  return m_ * n * params_.alpha_vg * std::pow(x, n - 1.0) *
         std::exp((-m_ - 1.0) * std::log1p(std::pow(x, n)));
}

double ConstitutiveModel::saturation(double p) const noexcept {
  const auto& q = params_;
  if (p >= 0.0) return 1.0 + q.a_min * p;
  if (p >= q.p_reg) return q.s_res + (1.0 - q.s_res) * effective_vg(p) + q.a_min * p;
  if (p >= p_min_) return s_at_reg_ + slope_at_reg_ * (p - q.p_reg);
  return q.s_res;
}

double ConstitutiveModel::saturation_derivative(double p) const noexcept {
  const auto& q = params_;
  if (p >= 0.0) return q.a_min;
  if (p >= q.p_reg) return (1.0 - q.s_res) * effective_vg_derivative(p) + q.a_min;
  if (p >= p_min_) return slope_at_reg_;
  return 0.0;
}

namespace {

// Width of the cubic blend that replaces Mualem's infinite slope at se = 1.
// The blend matches value and slope at the joint and reaches K = 1 with zero
// slope, so K_f(b(u)) is C1 across u = 0 and Newton does not cycle there.
constexpr double kSaturatedBlend = 1e-6;

double mualem_raw(double se, double m) noexcept {
  // 1 - (1 - se^{1/m})^m, written to keep accuracy for small se^{1/m}
  const double f = -std::expm1(m * std::log1p(-std::pow(se, 1.0 / m)));
  return std::sqrt(se) * f * f;
}

double mualem_raw_derivative(double se, double m) noexcept {
  const double x = std::pow(se, 1.0 / m);
  const double f = -std::expm1(m * std::log1p(-x));
  const double df = std::pow(1.0 - x, m - 1.0) * std::pow(se, 1.0 / m - 1.0);
  return 0.5 * f * f / std::sqrt(se) + 2.0 * std::sqrt(se) * f * df;
}

// Cubic Hermite on [1 - d, 1]: (m0, d0) at the joint, (1, 0) at se = 1.
double blend_value(double se, double m) noexcept {
  constexpr double d = kSaturatedBlend;
  const double m0 = mualem_raw(1.0 - d, m);
  const double d0 = mualem_raw_derivative(1.0 - d, m);
  const double x = (se - (1.0 - d)) / d;
  const double h00 = (2.0 * x - 3.0) * x * x + 1.0;
  const double h10 = ((x - 2.0) * x + 1.0) * x;
  const double h01 = (3.0 - 2.0 * x) * x * x;
  return h00 * m0 + h10 * d * d0 + h01;
}

double blend_derivative(double se, double m) noexcept {
  constexpr double d = kSaturatedBlend;
  const double m0 = mualem_raw(1.0 - d, m);
  const double d0 = mualem_raw_derivative(1.0 - d, m);
  const double x = (se - (1.0 - d)) / d;
  const double g00 = 6.0 * x * (x - 1.0);
  const double g10 = (3.0 * x - 4.0) * x + 1.0;
  return (g00 * m0 + g10 * d * d0 - g00) / d;
}

}  // namespace

double ConstitutiveModel::mualem(double se) const noexcept {
  if (se <= 0.0) return 0.0;
  if (se >= 1.0) return 1.0;
  if (se > 1.0 - kSaturatedBlend) return blend_value(se, m_);
  return mualem_raw(se, m_);
}

double ConstitutiveModel::mualem_derivative(double se) const noexcept {
  if (se <= 0.0 || se >= 1.0) return 0.0;
  if (se > 1.0 - kSaturatedBlend) return blend_derivative(se, m_);
  return mualem_raw_derivative(se, m_);
}

double ConstitutiveModel::conductivity(double s) const {
  const double s_res = params_.s_res;
  if (s < s_res - 1e-12 || s > 1.0 + 1e-12 || std::isnan(s)) {
    throw DomainError(format_value("conductivity: saturation outside [s_res, 1]: s", s));
  }
  return conductivity_saturated(std::max(s, s_res));
}

double ConstitutiveModel::conductivity_derivative(double s) const {
  const double s_res = params_.s_res;
  if (s < s_res - 1e-12 || s > 1.0 + 1e-12 || std::isnan(s)) {
    throw DomainError(format_value("conductivity_derivative: saturation outside [s_res, 1]: s", s));
  }
  const double se = std::clamp((s - s_res) / (1.0 - s_res), 0.0, 1.0);
  return (1.0 - params_.k_floor) / (1.0 - s_res) * mualem_derivative(se);
}

double ConstitutiveModel::conductivity_saturated(double s) const noexcept {
  const double s_res = params_.s_res;
  const double se = (s - s_res) / (1.0 - s_res);
  return params_.k_floor + (1.0 - params_.k_floor) * mualem(se);
}

double ConstitutiveModel::conductivity_saturated_derivative(double s) const noexcept {
  const double s_res = params_.s_res;
  const double se = (s - s_res) / (1.0 - s_res);
  if (se >= 1.0 || se <= 0.0) return 0.0;
  return (1.0 - params_.k_floor) / (1.0 - s_res) * mualem_derivative(se);
}

// ---------------------------------------------------------------------------

KirchhoffTable::KirchhoffTable(const ConstitutiveModel& model, double tol_q)
    : model_(model), tol_q_(tol_q) {
  if (!(tol_q > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
  const double p_min = model_.p_min();
  const double p_reg = model_.params().p_reg;

  // Geometric in |p| from 1e-10 down to p_min: dense near 0, sparse toward the dry end.
  constexpr double kSmallest = 1e-10;
  constexpr int kPerDecade = 40;
  const int count = static_cast<int>(std::ceil(kPerDecade * std::log10(-p_min / kSmallest)));
  p_.reserve(count + 4);
  p_.push_back(p_min);
  for (int i = count - 1; i >= 0; --i) {
    const double p = -kSmallest * std::pow(10.0, static_cast<double>(i) / kPerDecade);
    if (p > p_min) p_.push_back(p);
  }
  p_.push_back(0.0);
  p_.push_back(p_reg);
  std::sort(p_.begin(), p_.end());
  p_.erase(std::unique(p_.begin(), p_.end()), p_.end());

  const std::size_t n = p_.size();
  u_.assign(n, 0.0);
  phi_.assign(n, 0.0);
  k_.assign(n, 0.0);
  const double panel_tol = tol_q_ / static_cast<double>(n);
  auto integrand = [this](double p) { return model_.kirchhoff_integrand(p); };
  auto storage = [this](double p) {
    const double s = model_.saturation(p);
    return s * model_.conductivity_saturated(s);
  };
  for (std::size_t j = n - 1; j-- > 0;) {
    u_[j] = u_[j + 1] - integrate_adaptive(integrand, p_[j], p_[j + 1], panel_tol).value;
    phi_[j] = phi_[j + 1] - integrate_adaptive(storage, p_[j], p_[j + 1], panel_tol).value;
  }
  for (std::size_t j = 0; j < n; ++j) k_[j] = model_.kirchhoff_integrand(p_[j]);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!(u_[j] < u_[j + 1])) throw InvalidParameter("Kirchhoff table is not strictly increasing");
  }
  u_lower_ = u_.front();
}

std::size_t KirchhoffTable::bracket_p(double p) const {
  const auto it = std::upper_bound(p_.begin(), p_.end(), p);
  const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - p_.begin() - 1, 0));
  return std::min(j, p_.size() - 2);
}

double KirchhoffTable::psi_from_node(std::size_t j, double p) const {
  auto integrand = [this](double t) { return model_.kirchhoff_integrand(t); };
  const double tol = 0.1 * tol_q_;
  if (p - p_[j] <= p_[j + 1] - p) {
    return u_[j] + integrate_adaptive(integrand, p_[j], p, tol).value;
  }
  return u_[j + 1] - integrate_adaptive(integrand, p, p_[j + 1], tol).value;
}

double KirchhoffTable::kirchhoff(double p) const {
  if (p >= 0.0) return p;
  if (p < p_.front()) return u_lower_ + model_.k_floor() * (p - p_.front());
  return psi_from_node(bracket_p(p), p);
}

double KirchhoffTable::inverse(double u) const {
  if (u >= 0.0) return u;
  if (!admissible(u) || std::isnan(u)) {
    std::ostringstream os;
    os.precision(17);
    os << "Kirchhoff inverse: u = " << u << " is at or below u_lower + margin = "
       << u_lower_ + margin();
    throw DomainError(os.str());
  }
  const auto it = std::upper_bound(u_.begin(), u_.end(), u);
  const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - u_.begin()) - 1,
                                              u_.size() - 2);
  double lo = p_[j];
  double hi = p_[j + 1];

  // Cubic Hermite guess for p(u) using dp/du = 1/K_f at both nodes.
  const double du = u_[j + 1] - u_[j];
  const double t = (u - u_[j]) / du;
  const double t2 = t * t;
  const double t3 = t2 * t;
  double p = (2 * t3 - 3 * t2 + 1) * lo + (t3 - 2 * t2 + t) * du / k_[j] +
             (-2 * t3 + 3 * t2) * hi + (t3 - t2) * du / k_[j + 1];
  if (!(p > lo && p < hi)) p = 0.5 * (lo + hi);

  for (int iter = 0; iter < 60; ++iter) {
    const double f = psi_from_node(j, p) - u;
    if (f == 0.0) return p;
    if (f > 0.0) hi = p; else lo = p;
    double next = p - f / model_.kirchhoff_integrand(p);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - p) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(p) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(p)) {
      return next;
    }
    p = next;
  }
  return p;
}

double KirchhoffTable::storage_flux_integral(double p) const {
  if (p >= 0.0) return p + 0.5 * model_.params().a_min * p * p;
  if (p < p_.front()) {
    return phi_.front() + model_.params().s_res * model_.k_floor() * (p - p_.front());
  }
  const std::size_t j = bracket_p(p);
  auto storage = [this](double t) {
    const double s = model_.saturation(t);
    return s * model_.conductivity_saturated(s);
  };
  const double tol = 0.1 * tol_q_;
  if (p - p_[j] <= p_[j + 1] - p) {
    return phi_[j] + integrate_adaptive(storage, p_[j], p, tol).value;
  }
  return phi_[j + 1] - integrate_adaptive(storage, p, p_[j + 1], tol).value;
}

// ---------------------------------------------------------------------------

SoilModel::SoilModel(const VanGenuchtenParams& params, double tol_q)
    : table_(ConstitutiveModel(params), tol_q) {}

double SoilModel::b_of_u(double u) const {
  if (u >= 0.0) return 1.0 + constitutive().params().a_min * u;
  return constitutive().saturation(table_.inverse(u));
}

double SoilModel::b_prime(double u) const {
  if (u >= 0.0) return constitutive().params().a_min;
  const double p = table_.inverse(u);
  const auto& m = constitutive();
  return m.saturation_derivative(p) / m.kirchhoff_integrand(p);
}

double SoilModel::legendre_B(double z) const {
  if (z >= 0.0) return 0.5 * constitutive().params().a_min * z * z;
  const double p = table_.inverse(z);
  return z * constitutive().saturation(p) - table_.storage_flux_integral(p);
}

PointCoefficients SoilModel::evaluate(double u) const {
  const auto& m = constitutive();
  if (u >= 0.0) return {1.0 + m.params().a_min * u, m.params().a_min, 1.0, 0.0};
  const double p = table_.inverse(u);
  const double s = m.saturation(p);
  const double ds = m.saturation_derivative(p);
  const double k = m.conductivity_saturated(s);
  return {s, ds / k, k, m.conductivity_saturated_derivative(s) * ds / k};
}

}  // namespace richards4
