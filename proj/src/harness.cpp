#include "richards4/harness.hpp"

#include <cmath>
#include <future>

namespace richards4 {

double ManufacturedSolution::envelope(double t) const {
  return -amplitude * (1.0 + variation * std::sin(omega * t));
}

double ManufacturedSolution::envelope_dt(double t) const {
  return -amplitude * variation * omega * std::cos(omega * t);
}

double ManufacturedSolution::shape(double z) const {
  const double x = z / length;
  return 16.0 * x * x * (1.0 - x) * (1.0 - x);
}

double ManufacturedSolution::shape_dz(double z) const {
  const double x = z / length;
  return 16.0 * (2.0 * x - 6.0 * x * x + 4.0 * x * x * x) / length;
}

double ManufacturedSolution::shape_dzz(double z) const {
  const double x = z / length;
  return 16.0 * (2.0 - 12.0 * x + 12.0 * x * x) / (length * length);
}

double ManufacturedSolution::shape_dzzzz() const {
  const double l2 = length * length;
  return 16.0 * 24.0 / (l2 * l2);
}

Field ManufacturedSolution::sample(const Column& column, double t) const {
  return Field::sample(column, [&](double z) { return value(z, t); });
}

Eigen::VectorXd mms_source(const ManufacturedSolution& ms, double t, const Column& column,
                           double gamma, const TransformedCoefficients& coeffs) {
  const double a = ms.envelope(t);
  const double a_t = ms.envelope_dt(t);
  const double s = column.gravity_sign();
  Eigen::VectorXd f(column.n_cells());
  for (int i = 0; i < column.n_cells(); ++i) {
    const double z = column.z(i);
    const double u = a * ms.shape(z);
    if (!coeffs.admissible(u))
      throw DomainError("manufactured solution leaves the Kirchhoff domain", i);
    const auto pc = coeffs.evaluate(u);
    f[i] = pc.db * a_t * ms.shape(z) + s * pc.dk * a * ms.shape_dz(z) - a * ms.shape_dzz(z) +
           gamma * a * ms.shape_dzzzz();
  }
  return f;
}

namespace {

ConvergenceLevel solve_level(const StudySettings& st, int level, const ManufacturedSolution& ms,
                             const TransformedCoefficients& coeffs) {
  const bool spatial = st.mode == RefinementMode::Spatial;
  const int cells = spatial ? (st.coarse_cells + 1) * (1 << level) - 1 : st.fixed_cells;
  const double h = spatial ? st.fixed_h : st.coarse_h / (1 << level);
  const Column column(ms.length, cells, st.gravity_sign);

  StepConfig cfg;
  cfg.h = h;
  cfg.gamma = st.gamma;
  cfg.t_end = st.t_end;
  cfg.newton_tol = st.newton_tol;
  RunOptions opts;
  opts.source = [&](double t) { return mms_source(ms, t, column, st.gamma, coeffs); };
  const Trajectory traj = run(ms.sample(column, 0.0), cfg, coeffs, opts);

  const Field exact = ms.sample(column, traj.times.back());
  ConvergenceLevel out;
  out.level = level;
  out.dz = column.dz();
  out.h = h;
  out.l2_error = l2_norm(Field(column, traj.states.back().values - exact.values));
  return out;
}

}  // namespace

std::vector<ConvergenceLevel> convergence_study(const StudySettings& settings,
                                                const ManufacturedSolution& ms,
                                                const TransformedCoefficients& coeffs) {
  if (settings.levels < 3) throw InvalidParameter("convergence_study needs at least 3 levels");
  std::vector<std::future<ConvergenceLevel>> jobs;
  for (int level = 0; level < settings.levels; ++level)
    jobs.push_back(std::async(std::launch::async, solve_level, std::cref(settings), level,
                              std::cref(ms), std::cref(coeffs)));
  std::vector<ConvergenceLevel> out;
  for (auto& job : jobs) out.push_back(job.get());
  for (std::size_t k = 1; k < out.size(); ++k)
    out[k].observed_order = std::log2(out[k - 1].l2_error / out[k].l2_error);
  return out;
}

namespace {

struct SimpsonPanel {
  double a, m, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, const SimpsonPanel& p, double tol,
                        int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw ConvergenceError("quadrature_oracle: recursion depth exhausted", std::abs(delta));
  return adaptive_simpson(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double quadrature_oracle(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("quadrature_oracle: tolerance must be positive");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, {a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, tol, 50);
}

namespace {

struct DenseOperators {
  Eigen::MatrixXd lap;    // n x n, clamped walls
  Eigen::MatrixXd bihar;  // n x n
};

DenseOperators dense_operators(const Column& col) {
  const int n = col.n_cells();
  const double dz2 = col.dz() * col.dz();
  Eigen::MatrixXd second(n, n + 2);  // second difference of an (n+2)-vector, centred on 1..n
  second.setZero();
  for (int i = 0; i < n; ++i) {
    second(i, i) = 1.0 / dz2;
    second(i, i + 1) = -2.0 / dz2;
    second(i, i + 2) = 1.0 / dz2;
  }
  Eigen::MatrixXd embed = Eigen::MatrixXd::Zero(n + 2, n);  // walls at zero
  embed.block(1, 0, n, n).setIdentity();
  Eigen::MatrixXd lap_ext = Eigen::MatrixXd::Zero(n + 2, n);
  lap_ext.block(1, 0, n, n) = second * embed;
  lap_ext(0, 0) = 2.0 / dz2;
  lap_ext(n + 1, n - 1) = 2.0 / dz2;
  return {second * embed, second * lap_ext};
}

}  // namespace

Field dense_reference_step(const Field& u_old, const StepConfig& cfg,
                           const TransformedCoefficients& coeffs, const Eigen::VectorXd* source) {
  const Column& col = u_old.column;
  const int n = col.n_cells();
  const double dz = col.dz();
  const double s = col.gravity_sign();
  const auto ops = dense_operators(col);
  const double k_wall = coeffs.evaluate(0.0).k;

  Eigen::VectorXd b_old(n);
  for (int i = 0; i < n; ++i) b_old[i] = coeffs.b(u_old[i]);

  auto admissible = [&](const Eigen::VectorXd& u) {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(u[i]) || !coeffs.admissible(u[i])) return false;
    return true;
  };

  auto residual_and_jacobian = [&](const Eigen::VectorXd& u, Eigen::MatrixXd* jac) {
    Eigen::VectorXd b(n), db(n), k(n + 2), dk(n + 2);
    k[0] = k[n + 1] = k_wall;
    dk[0] = dk[n + 1] = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto pc = coeffs.evaluate(u[i]);
      b[i] = pc.b;
      db[i] = pc.db;
      k[i + 1] = pc.k;
      dk[i + 1] = pc.dk;
    }
    Eigen::VectorXd r = (b - b_old) / cfg.h - ops.lap * u + cfg.gamma * (ops.bihar * u);
    for (int i = 0; i < n; ++i) r[i] += s * (k[i + 2] - k[i]) / (2.0 * dz);
    if (source) r -= *source;
    if (jac) {
      *jac = -ops.lap + cfg.gamma * ops.bihar;
      jac->diagonal() += db / cfg.h;
      if (!cfg.lag_gravity) {
        for (int i = 0; i < n; ++i) {
          if (i + 1 < n) (*jac)(i, i + 1) += s * dk[i + 2] / (2.0 * dz);
          if (i > 0) (*jac)(i, i - 1) -= s * dk[i] / (2.0 * dz);
        }
      }
    }
    return r;
  };

  Eigen::VectorXd u = u_old.values;
  Eigen::MatrixXd jac;
  Eigen::VectorXd r = residual_and_jacobian(u, &jac);
  for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
    if (r.lpNorm<Eigen::Infinity>() <= cfg.newton_tol) return {col, u};
    const Eigen::VectorXd delta = jac.partialPivLu().solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt, lambda *= cfg.damping) {
      const Eigen::VectorXd trial = u + lambda * delta;
      if (!admissible(trial)) continue;
      Eigen::MatrixXd trial_jac;
      Eigen::VectorXd trial_r = residual_and_jacobian(trial, &trial_jac);
      if (trial_r.norm() <= (1.0 - 1e-4 * lambda) * r.norm() ||
          trial_r.lpNorm<Eigen::Infinity>() <= cfg.newton_tol) {
        u = trial;
        r = std::move(trial_r);
        jac = std::move(trial_jac);
        accepted = true;
      }
    }
    if (!accepted) throw ConvergenceError("dense reference: line search stalled", r.lpNorm<Eigen::Infinity>());
  }
  if (r.lpNorm<Eigen::Infinity>() <= cfg.newton_tol) return {col, u};
  throw ConvergenceError("dense reference: Newton did not converge", r.lpNorm<Eigen::Infinity>());
}

}  // namespace richards4
