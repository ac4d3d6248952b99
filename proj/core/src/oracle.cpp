#include "potlab/oracle.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "potlab/constants.hpp"
#include "potlab/errors.hpp"

namespace potlab::oracle {

namespace {

using boost::math::quadrature::gauss_kronrod;

void require_axes(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw DomainError("ellipsoid semi-axes must be positive");
}

template <class F>
double integrate(F f, double lo, double hi, double* error) {
  // Adaptive Gauss-Kronrod to 1e-13 relative; *error is absolute.
  return gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, 1e-13, error);
}

// Mean curvature (trace) at a surface point of the ellipsoid.
double implicit_h(const Vec3& axes, const Vec3& p) {
  const Vec3 hess = 2.0 * axes.cwiseProduct(axes).cwiseInverse();
  const Vec3 grad = p.cwiseProduct(hess);
  const double g2 = grad.squaredNorm();
  return (g2 * hess.sum() - grad.cwiseProduct(grad).dot(hess)) / (g2 * std::sqrt(g2));
}

// Integral over the ellipsoid surface of f(point) via the sphere
// parametrization, theta in (0, pi), phi in (0, 2 pi).
template <class F>
double surface_integral(const Vec3& axes, F f, double* error) {
  const double a = axes.x(), b = axes.y(), c = axes.z();
  double outer_error = 0.0;
  double inner_error_max = 0.0;
  const double value = integrate(
      [&](double theta) {
        const double st = std::sin(theta), ct = std::cos(theta);
        double inner_error = 0.0;
        const double inner = integrate(
            [&](double phi) {
              const double sp = std::sin(phi), cp = std::cos(phi);
              // |r_theta x r_phi| for r = (a st cp, b st sp, c ct).
              const Vec3 n(b * c * st * st * cp, a * c * st * st * sp, a * b * st * ct);
              const Vec3 point(a * st * cp, b * st * sp, c * ct);
              return n.norm() * f(point);
            },
            0.0, 2.0 * std::numbers::pi, &inner_error);
        inner_error_max = std::max(inner_error_max, inner_error);
        return inner;
      },
      0.0, std::numbers::pi, &outer_error);
  *error = outer_error + inner_error_max * std::numbers::pi;
  return value;
}

}  // namespace

OracleValue ellipsoid_capacity(double a, double b, double c) {
  require_axes(a, b, c);
  const double m = std::max({a, b, c});
  const double a2 = a * a, b2 = b * b, c2 = c * c, m2 = m * m;
  // s = m^2 tan^2(theta): ds = 2 m^2 tan(theta) sec^2(theta) dtheta; the
  // transformed integrand stays bounded at theta = pi/2.
  auto integrand = [&](double theta) {
    const double t = std::tan(theta);
    const double sec2 = 1.0 + t * t;
    const double s = m2 * t * t;
    return 2.0 * m2 * t * sec2 / std::sqrt((s + a2) * (s + b2) * (s + c2));
  };
  // Evaluate the endpoint limit analytically to avoid tan(pi/2).
  auto safe = [&](double theta) {
    const double end = std::numbers::pi / 2.0;
    if (end - theta < 1e-9) {
      // integrand -> 2 m^2 tan sec^2 / (m^3 tan^3) -> 2 / m as theta -> pi/2
      return 2.0 / m;
    }
    return integrand(theta);
  };
  double abs_error = 0.0;
  const double integral = integrate(safe, 0.0, std::numbers::pi / 2.0, &abs_error);
  const double value = 2.0 / integral;
  return {"capacity", value, "adaptive Gauss-Kronrod of the elliptic integral",
          std::max(abs_error / integral, 1e-15) * value};
}

OracleValue prolate_capacity(double a, double b) {
  require_axes(a, b, b);
  if (!(a > b)) throw DomainError("prolate capacity needs a > b");
  const double e = std::sqrt(a * a - b * b);
  const double value = 2.0 * e / std::log((a + e) / (a - e));
  return {"capacity", value, "prolate closed form", 1e-15 * value};
}

OracleValue ball_Up(double radius, double p) {
  if (!(radius > 0.0) || !(p >= 0.0)) throw DomainError("ball_Up needs R > 0 and p >= 0");
  const double value =
      std::pow(radius, p) * std::pow(dim::n_minus_2, p) * dim::sphere_area;
  return {"U_p", value, "closed form on the ball", 1e-15 * value};
}

OracleValue ellipsoid_mean_curvature(double a, double b, double c, const Vec3& point) {
  require_axes(a, b, c);
  const Vec3 axes(a, b, c);
  const double f = point.cwiseQuotient(axes).squaredNorm() - 1.0;
  const Vec3 grad = 2.0 * point.cwiseQuotient(axes.cwiseProduct(axes));
  if (std::abs(f) / grad.norm() > 1e-9 * axes.maxCoeff()) {
    throw DomainError("point is not on the ellipsoid");
  }
  const double value = implicit_h(axes, point);
  return {"mean_curvature", value, "implicit-surface divergence formula",
          1e-14 * std::abs(value) + 1e-300};
}

OracleValue ellipsoid_area(double a, double b, double c) {
  require_axes(a, b, c);
  double error = 0.0;
  const double value = surface_integral(Vec3(a, b, c), [](const Vec3&) { return 1.0; }, &error);
  return {"area", value, "nested adaptive Gauss-Kronrod", std::max(error, 1e-15 * value)};
}

OracleValue prolate_area(double a, double b) {
  require_axes(a, b, b);
  if (!(a > b)) throw DomainError("prolate area needs a > b");
  const double e = std::sqrt(1.0 - b * b / (a * a));
  const double value = 2.0 * std::numbers::pi * b * b * (1.0 + a / (b * e) * std::asin(e));
  return {"area", value, "prolate closed form", 1e-15 * value};
}

OracleValue ellipsoid_willmore(double a, double b, double c) {
  require_axes(a, b, c);
  const Vec3 axes(a, b, c);
  double error = 0.0;
  const double value = surface_integral(
      axes,
      [&](const Vec3& p) {
        const double h = implicit_h(axes, p) / dim::n_minus_1;
        return std::pow(std::abs(h), dim::n_minus_1);
      },
      &error);
  return {"willmore", value, "nested adaptive Gauss-Kronrod", std::max(error, 1e-15 * value)};
}

}  // namespace potlab::oracle
