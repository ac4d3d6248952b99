#pragma once

#include <numbers>

// Dimension-dependent exponents of the exterior problem, instantiated for
// n = 3. Formulas elsewhere use these names rather than literal 1, 2 or 4*pi
// so that they can be read against the general-n expressions.
namespace potlab::dim {

inline constexpr int n = 3;

/// n - 1: number of principal curvatures; H / (n - 1) is the averaged curvature.
inline constexpr double n_minus_1 = n - 1;

/// n - 2: the exponent of the fundamental solution |x|^{2-n}.
inline constexpr double n_minus_2 = n - 2;

/// (n - 1) / (n - 2): exponent in u^{(n-1)/(n-2)} and |Du| / u^{(n-1)/(n-2)}.
inline constexpr double conformal_exponent = n_minus_1 / n_minus_2;

/// 1 / (n - 2): exponent of the conformal factor of g = u^{2/(n-2)} g_eucl.
inline constexpr double inverse_n_minus_2 = 1.0 / n_minus_2;

/// |S^{n-1}|, the area of the unit sphere.
inline constexpr double sphere_area = 4.0 * std::numbers::pi;

/// Smallest p for which the derivative formula of U_p holds: 2 - 1/(n-1).
inline constexpr double derivative_p_min = 2.0 - 1.0 / n_minus_1;

/// Normalization of the Newtonian kernel G(x, y) = 1 / (4 pi |x - y|).
inline constexpr double kernel_factor = 1.0 / (n_minus_2 * sphere_area);

}  // namespace potlab::dim
