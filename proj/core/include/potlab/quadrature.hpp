#pragma once

#include "potlab/types.hpp"

namespace potlab {

/// Which derivatives of the Newtonian potential to accumulate.
enum class Derivatives { value = 0, gradient = 1, hessian = 2 };

/// Accumulated potential u, gradient Du and Hessian D^2u.
struct KernelSum {
  double u = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();

  /// Adds q * G(x, y), G = 1/(4 pi |x - y|), and its x-derivatives.
  void add_point(const Vec3& x, const Vec3& y, double q, Derivatives order);
};

/// Distance thresholds of the panel quadrature, as multiples of the panel
/// diameter (longest edge), measured from the evaluation point to the panel
/// centroid.
struct QuadratureTiers {
  /// At or beyond this ratio a panel is a point charge at its centroid.
  double far_ratio = 4.0;
  /// Below this ratio the panel is split 4-fold recursively; between
  /// near_ratio and far_ratio a 6-point degree-4 rule is used.
  double near_ratio = 2.0;
  /// Each switch at ratio r is a C2 blend of the two rules over
  /// [r, (1 + blend) r], so u and its derivatives are continuous in x.
  double blend = 1.0;
  int max_depth = 12;

  /// Ratio beyond which the centroid rule is used alone.
  [[nodiscard]] double point_ratio() const { return far_ratio * (1.0 + blend); }
};

/// Exact integral of 1/|p - y| over the planar triangle, p in its plane.
[[nodiscard]] double planar_inverse_distance_integral(const Triangle& tri, const Vec3& p);

/// Adds density * integral over the panel of G(x, y) dy (and derivatives)
/// using the tiered rules; x must not lie on the panel.
void integrate_panel(const Vec3& x, const Triangle& tri, double area, double diameter,
                     double density, const QuadratureTiers& tiers, Derivatives order,
                     KernelSum& sum);

/// Integral of G(x, y) over the panel with unit density, value only.
[[nodiscard]] double panel_potential(const Vec3& x, const Triangle& tri, double area,
                                     double diameter, const QuadratureTiers& tiers);

}  // namespace potlab
