#pragma once

#include <string>

#include "potlab/types.hpp"

// Closed-form and quadrature reference values, independent of the boundary
// element pipeline.
namespace potlab::oracle {

struct OracleValue {
  std::string quantity;
  double value = 0.0;
  std::string method;
  /// Estimated absolute error; always finite and positive.
  double error = 0.0;
};

/// Cap = 2 / int_0^inf ds / sqrt((s + a^2)(s + b^2)(s + c^2)), integrated
/// after the substitution s = tan(theta)^2 max(a,b,c)^2.
[[nodiscard]] OracleValue ellipsoid_capacity(double a, double b, double c);

/// Prolate spheroid (a > b = c): Cap = 2e / ln((a + e)/(a - e)), e = sqrt(a^2 - b^2).
[[nodiscard]] OracleValue prolate_capacity(double a, double b);

/// lim_{t->0} U_p on the ball of radius R, which is also U_p(t) for all t:
/// Cap^p (n-2)^p |S^{n-1}| = 4 pi R^p.
[[nodiscard]] OracleValue ball_Up(double radius, double p);

/// H = div(DF/|DF|), F = x^2/a^2 + y^2/b^2 + z^2/c^2 - 1, at a surface point.
[[nodiscard]] OracleValue ellipsoid_mean_curvature(double a, double b, double c, const Vec3& point);

/// Surface area by adaptive quadrature of |r_theta x r_phi| over the sphere
/// parametrization.
[[nodiscard]] OracleValue ellipsoid_area(double a, double b, double c);

/// Prolate spheroid area 2 pi b^2 (1 + a/(b e) asin e), e = sqrt(1 - b^2/a^2).
[[nodiscard]] OracleValue prolate_area(double a, double b);

/// Integral over the ellipsoid of (H/2)^2 by the same parametrization.
[[nodiscard]] OracleValue ellipsoid_willmore(double a, double b, double c);

}  // namespace potlab::oracle
