#pragma once

/**
 * @file grid.hpp
 * @brief Vertical 1-D column with clamped walls and its finite-difference
 *        operators.
 *
 * Interior nodes z_i = i*dz, i = 1..n, dz = L/(n+1). Walls z_0 = 0 and
 * z_{n+1} = L carry u = 0; du/dn = 0 is imposed through the mirror ghost
 * u_{-1} = u_1 (and u_{n+2} = u_n). With that closure
 *
 *     sum_i dz * u_i (biharmonic u)_i = trapezoid integral of (lap u)^2
 *
 * over the closed grid, where the wall Laplacian is 2 u_1 / dz^2. The energy
 * functionals below use exactly these discrete forms so that the a priori
 * estimates hold as algebraic identities.
 */

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>

#include "richards4/constitutive.hpp"
#include "richards4/error.hpp"

namespace richards4 {

class Column {
 public:
  Column(double length, int n_cells, int gravity_sign = 1)
      : length_(length), n_cells_(n_cells), gravity_sign_(gravity_sign) {
    if (!(length > 0.0) || !std::isfinite(length))
      throw InvalidParameter("column length must be positive");
    if (n_cells < 5)
      throw InvalidParameter("n_cells must be at least 5 for the biharmonic stencil; got " +
                             std::to_string(n_cells));
    if (gravity_sign != 1 && gravity_sign != -1)
      throw InvalidParameter("gravity_sign must be +1 or -1");
    dz_ = length / (n_cells + 1);
  }

  double length() const noexcept { return length_; }
  int n_cells() const noexcept { return n_cells_; }
  double dz() const noexcept { return dz_; }
  int gravity_sign() const noexcept { return gravity_sign_; }
  /// Coordinate of interior node i (0-based).
  double z(int i) const noexcept { return (i + 1) * dz_; }
  Eigen::VectorXd nodes() const {
    return Eigen::VectorXd::LinSpaced(n_cells_, dz_, n_cells_ * dz_);
  }

  bool operator==(const Column& o) const noexcept {
    return length_ == o.length_ && n_cells_ == o.n_cells_ && gravity_sign_ == o.gravity_sign_;
  }

 private:
  double length_;
  int n_cells_;
  int gravity_sign_;
  double dz_;
};

/// Nodal values on the interior of a Column; walls are implicitly clamped.
template <typename Scalar>
struct BasicField {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Column column;
  Vector values;

  explicit BasicField(const Column& c) : column(c), values(Vector::Zero(c.n_cells())) {}
  BasicField(const Column& c, Vector v) : column(c), values(std::move(v)) {
    if (values.size() != c.n_cells())
      throw InvalidParameter("field size " + std::to_string(values.size()) +
                             " does not match column n_cells " + std::to_string(c.n_cells()));
  }

  Eigen::Index size() const noexcept { return values.size(); }
  Scalar& operator[](Eigen::Index i) { return values[i]; }
  const Scalar& operator[](Eigen::Index i) const { return values[i]; }

  bool all_finite() const { return values.allFinite(); }

  template <typename F>
  static BasicField sample(const Column& c, F&& fn) {
    Vector v(c.n_cells());
    for (int i = 0; i < c.n_cells(); ++i) v[i] = static_cast<Scalar>(fn(c.z(i)));
    return BasicField(c, std::move(v));
  }
};

using Field = BasicField<double>;

/// 3-point second difference with u = 0 at both walls.
template <typename Scalar>
BasicField<Scalar> laplacian_clamped(const BasicField<Scalar>& f) {
  const auto n = f.size();
  const Scalar inv = Scalar(1) / (f.column.dz() * f.column.dz());
  typename BasicField<Scalar>::Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar left = i > 0 ? f[i - 1] : Scalar(0);
    const Scalar right = i + 1 < n ? f[i + 1] : Scalar(0);
    out[i] = (left - Scalar(2) * f[i] + right) * inv;
  }
  return {f.column, std::move(out)};
}

/// Discrete Laplacian on the closed grid, n+2 entries: walls use the mirror
/// ghost, (lap u)_0 = 2 u_1 / dz^2.
template <typename Scalar>
typename BasicField<Scalar>::Vector laplacian_with_walls(const BasicField<Scalar>& f) {
  const auto n = f.size();
  const Scalar inv = Scalar(1) / (f.column.dz() * f.column.dz());
  typename BasicField<Scalar>::Vector out(n + 2);
  out[0] = Scalar(2) * f[0] * inv;
  out.segment(1, n) = laplacian_clamped(f).values;
  out[n + 1] = Scalar(2) * f[n - 1] * inv;
  return out;
}

/// 5-point fourth difference with the clamped ghost closure. The wall-adjacent
/// rows are [7, -4, 1] and [-4, 6, -4, 1] (scaled by 1/dz^4).
template <typename Scalar>
BasicField<Scalar> biharmonic_clamped(const BasicField<Scalar>& f) {
  const auto n = f.size();
  const Scalar dz2 = f.column.dz() * f.column.dz();
  const Scalar inv = Scalar(1) / (dz2 * dz2);
  // Index -1 and n are the walls (zero); -2 and n+1 are the mirror ghosts.
  auto ext = [&](Eigen::Index j) -> Scalar {
    if (j == -1 || j == n) return Scalar(0);
    if (j == -2) return f[0];
    if (j == n + 1) return f[n - 1];
    return f[j];
  };
  typename BasicField<Scalar>::Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = (ext(i - 2) - Scalar(4) * ext(i - 1) + Scalar(6) * f[i] - Scalar(4) * ext(i + 1) +
              ext(i + 2)) *
             inv;
  }
  return {f.column, std::move(out)};
}

/// One-sided differences on the n+1 cell faces, walls included.
template <typename Scalar>
typename BasicField<Scalar>::Vector face_gradient(const BasicField<Scalar>& f) {
  const auto n = f.size();
  typename BasicField<Scalar>::Vector g(n + 1);
  const Scalar inv = Scalar(1) / f.column.dz();
  g[0] = f[0] * inv;
  for (Eigen::Index i = 1; i < n; ++i) g[i] = (f[i] - f[i - 1]) * inv;
  g[n] = -f[n - 1] * inv;
  return g;
}

/// Trapezoid rule over the closed grid with both walls set to wall_value.
/// With the default (clamped) wall value this is dz * sum_i f_i.
template <typename Scalar>
Scalar integrate(const BasicField<Scalar>& f, Scalar wall_value = Scalar(0)) {
  return f.column.dz() * (f.values.sum() + wall_value);
}

template <typename Scalar>
Scalar l2_norm(const BasicField<Scalar>& f) {
  using std::sqrt;
  return sqrt(f.column.dz() * f.values.squaredNorm());
}

/// sqrt of sum over faces of dz * (du/dz)^2; equals sqrt(integrate(u * -lap u)).
template <typename Scalar>
Scalar h1_seminorm(const BasicField<Scalar>& f) {
  using std::sqrt;
  return sqrt(f.column.dz() * face_gradient(f).squaredNorm());
}

/// Trapezoid integral of (lap u)^2 on the closed grid; equals integrate(u * biharmonic u).
template <typename Scalar>
Scalar laplacian_energy(const BasicField<Scalar>& f) {
  const auto lap = laplacian_with_walls(f);
  const auto n = f.size();
  const Scalar interior = lap.segment(1, n).squaredNorm();
  const Scalar walls = Scalar(0.5) * (lap[0] * lap[0] + lap[n + 1] * lap[n + 1]);
  return f.column.dz() * (interior + walls);
}

/// Face conductivities K_f(b(u)) by arithmetic averaging of nodal values;
/// wall nodes carry K_f(b(0)).
inline Eigen::VectorXd face_conductivity(const Field& u, const TransformedCoefficients& c) {
  const auto n = u.size();
  Eigen::VectorXd k(n + 2);
  k[0] = k[n + 1] = c.evaluate(0.0).k;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!c.admissible(u[i]) || !std::isfinite(u[i]))
      throw DomainError("value outside the Kirchhoff domain", static_cast<long>(i));
    k[i + 1] = c.evaluate(u[i]).k;
  }
  return 0.5 * (k.head(n + 1) + k.tail(n + 1));
}

/// d/dz [gravity_sign * K_f(b(u))] from face-averaged conductivities.
/// Telescopes: integrate(result) = face flux at L minus face flux at 0.
inline Field gravity_divergence(const Field& u, const TransformedCoefficients& c) {
  const auto faces = face_conductivity(u, c);
  const auto n = u.size();
  const double s = u.column.gravity_sign() / u.column.dz();
  return {u.column, s * (faces.tail(n) - faces.head(n))};
}

/// Dense matrix of a linear field operator, column by column.
template <typename Op>
Eigen::MatrixXd assemble_dense(const Column& c, Op&& op) {
  const int n = c.n_cells();
  Eigen::MatrixXd a(n, n);
  Field e(c);
  for (int j = 0; j < n; ++j) {
    e.values.setZero();
    e[j] = 1.0;
    a.col(j) = op(e).values;
  }
  return a;
}

}  // namespace richards4
