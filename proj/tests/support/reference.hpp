#pragma once

// Reference values computed independently of the library: closed forms,
// Carlson integrals and tensor Gauss-Legendre quadrature.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>

#include "potlab/types.hpp"

namespace ref {

using potlab::Mat3;
using potlab::Vec3;

inline constexpr double four_pi = 4.0 * std::numbers::pi;

/// Cap = 2 / int_0^inf ds / sqrt(...) = 1 / R_F(a^2, b^2, c^2).
inline double ellipsoid_capacity(double a, double b, double c) {
  return 1.0 / boost::math::ellint_rf(a * a, b * b, c * c);
}

inline double prolate_capacity(double a, double b) {
  const double e = std::sqrt(a * a - b * b);
  return 2.0 * e / std::log((a + e) / (a - e));
}

/// Point of the ellipsoid at spherical angles (theta from +z, phi).
inline Vec3 ellipsoid_point(const Vec3& axes, double theta, double phi) {
  return {axes.x() * std::sin(theta) * std::cos(phi), axes.y() * std::sin(theta) * std::sin(phi),
          axes.z() * std::cos(theta)};
}

/// Mean curvature (sum of principal curvatures) from the closed form of the
/// implicit gradient n = (x/a^2, y/b^2, z/c^2):
/// H = (|n|^2 tr(A) - n^T A n) / |n|^3 with A = diag(1/a^2, 1/b^2, 1/c^2).
inline double ellipsoid_mean_curvature(const Vec3& axes, const Vec3& x) {
  const Vec3 inv = axes.cwiseProduct(axes).cwiseInverse();
  const Vec3 n = x.cwiseProduct(inv);
  const double n2 = n.squaredNorm();
  return (n2 * inv.sum() - n.dot(inv.cwiseProduct(n))) / std::pow(n2, 1.5);
}

/// Integral of f over the ellipsoid surface, Gauss-Legendre in theta and phi.
template <class F>
double ellipsoid_surface_integral(const Vec3& axes, F&& f) {
  using boost::math::quadrature::gauss;
  const double pi = std::numbers::pi;
  return gauss<double, 50>::integrate(
      [&](double theta) {
        return gauss<double, 50>::integrate(
            [&](double phi) {
              const double st = std::sin(theta), ct = std::cos(theta);
              const double sp = std::sin(phi), cp = std::cos(phi);
              const Vec3 dt(axes.x() * ct * cp, axes.y() * ct * sp, -axes.z() * st);
              const Vec3 dp(-axes.x() * st * sp, axes.y() * st * cp, 0.0);
              return f(ellipsoid_point(axes, theta, phi)) * dt.cross(dp).norm();
            },
            0.0, 2.0 * pi);
      },
      0.0, pi);
}

inline double ellipsoid_area(const Vec3& axes) {
  return ellipsoid_surface_integral(axes, [](const Vec3&) { return 1.0; });
}

struct BallSample {
  double u;
  Vec3 grad;
  Mat3 hess;
};

/// u = R / |x| and its derivatives.
inline BallSample ball(double radius, const Vec3& x) {
  const double r = x.norm();
  return {radius / r, -radius * x / (r * r * r),
          radius * (3.0 * x * x.transpose() - r * r * Mat3::Identity()) / std::pow(r, 5)};
}

/// Uniform random directions scaled into [r_lo, r_hi] around center.
inline std::vector<Vec3> shell_points(const Vec3& center, double r_lo, double r_hi, int count,
                                      unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(r_lo, r_hi);
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) {
    Vec3 d(normal(rng), normal(rng), normal(rng));
    out.push_back(center + radius(rng) * d.normalized());
  }
  return out;
}

/// Three-point derivative on a nonuniform grid at interior index i.
inline double central_difference(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
  const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
  return (-h1 / (h0 * (h0 + h1))) * y[i - 1] + ((h1 - h0) / (h0 * h1)) * y[i] +
         (h0 / (h1 * (h0 + h1))) * y[i + 1];
}

}  // namespace ref
