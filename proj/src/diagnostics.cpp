#include "richards4/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace richards4 {

namespace {

Field map_nodes(const Field& u, const TransformedCoefficients& c, double (TransformedCoefficients::*fn)(double) const) {
  Field out(u.column);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!c.admissible(u[i])) throw DomainError("value outside the Kirchhoff domain", static_cast<long>(i));
    out[i] = (c.*fn)(u[i]);
  }
  return out;
}

void require_states(const Trajectory& traj) {
  if (traj.states.empty()) throw InvalidParameter("trajectory has no states");
}

}  // namespace

double integrate_legendre(const Field& u, const TransformedCoefficients& coeffs) {
  return integrate(map_nodes(u, coeffs, &TransformedCoefficients::legendre));
}

double EnergyReport::gronwall_excess() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) worst = std::max(worst, r.B_int + r.cum_dissipation - gronwall_bound);
  return worst;
}

double EnergyReport::pre_gronwall_excess() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) worst = std::max(worst, r.B_int + r.cum_dissipation - r.pre_gronwall_rhs);
  return worst;
}

EnergyReport energy_report(const Trajectory& traj, const TransformedCoefficients& coeffs,
                           double beta) {
  require_states(traj);
  const double h = traj.config.h;
  const double gamma = traj.config.gamma;
  const double length = traj.column().length();
  const double t_end = traj.times.back();

  EnergyReport rep;
  rep.beta = beta;
  rep.rows.reserve(traj.states.size());
  double cum_diss = 0.0;
  double cum_b = 0.0;
  double b0 = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const Field& u = traj.states[n];
    EnergyRow row;
    row.t = traj.times[n];
    row.B_int = integrate_legendre(u, coeffs);
    const double grad = h1_seminorm(u);
    row.grad_sq = grad * grad;
    row.lap_sq = gamma * laplacian_energy(u);
    if (n == 0) {
      b0 = row.B_int;
    } else {
      cum_diss += h * (0.5 * row.grad_sq + row.lap_sq);
      cum_b += h * row.B_int;
    }
    row.cum_dissipation = cum_diss;
    row.cum_B = cum_b;
    row.pre_gronwall_rhs = b0 + beta * length * row.t + beta * cum_b;
    rep.rows.push_back(row);
  }
  rep.gronwall_bound = (b0 + beta * length * t_end) * std::exp(beta * t_end);
  return rep;
}

double time_quotient_check(const Trajectory& traj, double delta,
                           const TransformedCoefficients& coeffs) {
  require_states(traj);
  const double h = traj.config.h;
  const double ratio = delta / h;
  const long k = std::lround(ratio);
  if (!(delta > 0.0) || k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio)
    throw InvalidParameter("delta must be a positive integer multiple of h");
  std::vector<Field> b;
  b.reserve(traj.states.size());
  for (const auto& u : traj.states) b.push_back(map_nodes(u, coeffs, &TransformedCoefficients::b));
  double sum = 0.0;
  for (std::size_t n = static_cast<std::size_t>(k); n < traj.states.size(); ++n) {
    const Eigen::VectorXd db = b[n].values - b[n - k].values;
    const Eigen::VectorXd du = traj.states[n].values - traj.states[n - k].values;
    sum += h / delta * traj.column().dz() * db.dot(du);
  }
  return sum;
}

double regularity_monitor(const Trajectory& traj) {
  require_states(traj);
  const double h = traj.config.h;
  double sum = 0.0;
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const Field dudt(traj.column(), (traj.states[n].values - traj.states[n - 1].values) / h);
    const double norm = l2_norm(dudt);
    sum += h * norm * norm;
  }
  return sum;
}

double trajectory_discrepancy(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size())
    throw InvalidParameter("trajectories have different lengths");
  double worst = 0.0;
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    const Field d(a.column(), a.states[n].values - b.states[n].values);
    worst = std::max(worst, l2_norm(d));
  }
  return worst;
}

UniquenessProbe uniqueness_probe(const Field& u0, const StepConfig& cfg,
                                 const TransformedCoefficients& coeffs, double guess_scale) {
  UniquenessProbe probe;
  probe.reference = run(u0, cfg, coeffs);
  RunOptions opts;
  opts.guess_scale = guess_scale;
  probe.perturbed = run(u0, cfg, coeffs, opts);
  probe.max_discrepancy = trajectory_discrepancy(probe.reference, probe.perturbed);
  return probe;
}

double max_principle_check(const Trajectory& traj) {
  require_states(traj);
  const double bound = std::max(traj.states.front().values.maxCoeff(), 0.0);
  double worst = 0.0;
  for (const auto& u : traj.states) worst = std::max(worst, u.values.maxCoeff() - bound);
  return worst;
}

double min_principle_violation(const Trajectory& traj) {
  require_states(traj);
  const double bound = std::min(traj.states.front().values.minCoeff(), 0.0);
  double worst = 0.0;
  for (const auto& u : traj.states) worst = std::max(worst, bound - u.values.minCoeff());
  return worst;
}

double initial_condition_check(const Trajectory& traj, const Field& u0,
                               const TransformedCoefficients& coeffs) {
  require_states(traj);
  const Field b_state = map_nodes(traj.states.front(), coeffs, &TransformedCoefficients::b);
  const Field b_ic = map_nodes(u0, coeffs, &TransformedCoefficients::b);
  return l2_norm(Field(u0.column, b_state.values - b_ic.values));
}

}  // namespace richards4
