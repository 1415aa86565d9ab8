#include "richards4/recovery.hpp"

namespace richards4 {

Field pressure_field(const Field& u, const SoilModel& model) {
  Field p(u.column);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    try {
      p[i] = model.kirchhoff_inverse(u[i]);
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at node " + std::to_string(i),
                        static_cast<long>(i));
    }
  }
  return p;
}

Field saturation_field(const Field& u, const SoilModel& model) {
  Field s(u.column);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!model.admissible(u[i]))
      throw DomainError("value outside the Kirchhoff domain at node " + std::to_string(i),
                        static_cast<long>(i));
    s[i] = model.b_of_u(u[i]);
  }
  return s;
}

double gradient_consistency(const Field& u, const SoilModel& model) {
  const Field p = pressure_field(u, model);
  const auto n = u.size();
  const double dz = u.column.dz();
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double k = model.evaluate(0.5 * (u[i] + u[i + 1])).k;
    const double d = (p[i + 1] - p[i]) / dz - (u[i + 1] - u[i]) / (dz * k);
    sum += dz * d * d;
  }
  return std::sqrt(sum);
}

Eigen::VectorXd darcy_flux(const Field& u, double gamma, const TransformedCoefficients& coeffs) {
  const auto n = u.size();
  const double dz = u.column.dz();
  Eigen::VectorXd v = u.column.gravity_sign() * face_conductivity(u, coeffs) - face_gradient(u);
  if (gamma != 0.0) {
    const auto lap = laplacian_with_walls(u);
    v += gamma * (lap.tail(n + 1) - lap.head(n + 1)) / dz;
  }
  return v;
}

Field darcy_velocity(const Field& u, const StepConfig& cfg, const TransformedCoefficients& coeffs) {
  const auto faces = darcy_flux(u, cfg.gamma, coeffs);
  const auto n = u.size();
  return {u.column, 0.5 * (faces.head(n) + faces.tail(n))};
}

Field flux_divergence(const Column& column, const Eigen::VectorXd& faces) {
  const auto n = column.n_cells();
  if (faces.size() != n + 1) throw InvalidParameter("face vector must have n_cells + 1 entries");
  return {column, (faces.tail(n) - faces.head(n)) / column.dz()};
}

}  // namespace richards4
