#include "potlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "potlab/constants.hpp"

namespace potlab {

void KernelSum::add_point(const Vec3& x, const Vec3& y, double q, Derivatives order) {
  const Vec3 r = x - y;
  const double r2 = r.squaredNorm();
  const double inv_r = 1.0 / std::sqrt(r2);
  const double qk = q * dim::kernel_factor * inv_r;
  u += qk;
  if (order == Derivatives::value) return;
  const double inv_r2 = inv_r * inv_r;
  grad -= (qk * inv_r2) * r;
  if (order == Derivatives::gradient) return;
  const double c = qk * inv_r2 * inv_r2;
  hess.noalias() += (3.0 * c) * (r * r.transpose());
  hess.diagonal().array() -= c * r2;
}

double planar_inverse_distance_integral(const Triangle& tri, const Vec3& p) {
  const Vec3 normal = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3& a = tri[k];
    const Vec3& b = tri[(k + 1) % 3];
    const Vec3 s = (b - a).normalized();
    // In-plane outward edge normal; h > 0 when p is on the interior side.
    const Vec3 m = s.cross(normal);
    const double h = (a - p).dot(m);
    if (std::abs(h) < 1e-300) continue;
    const double la = (a - p).dot(s);
    const double lb = (b - p).dot(s);
    const double ra = (a - p).norm();
    const double rb = (b - p).norm();
    total += h * std::log((rb + lb) / (ra + la));
  }
  return total;
}

namespace {

// Dunavant degree-4 rule: 6 points, barycentric (l0, l1, l2) and weight.
struct BaryPoint {
  double l0, l1, l2, w;
};
constexpr double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * a1, w1 = 0.223381589678011;
constexpr double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * a2, w2 = 0.109951743655322;
constexpr std::array<BaryPoint, 6> degree4 = {{{b1, a1, a1, w1},
                                               {a1, b1, a1, w1},
                                               {a1, a1, b1, w1},
                                               {b2, a2, a2, w2},
                                               {a2, b2, a2, w2},
                                               {a2, a2, b2, w2}}};

void apply_rule(const Vec3& x, const Triangle& t, double q, Derivatives order, KernelSum& sum) {
  for (const auto& bp : degree4) {
    sum.add_point(x, bp.l0 * t[0] + bp.l1 * t[1] + bp.l2 * t[2], q * bp.w, order);
  }
}

// sum += w A + (1 - w) B for the smooth weight w = S((rho - lo) / (lo blend)),
// rho = |x - c| / diam, including the derivatives of w.
template <class RuleA, class RuleB>
void blend_rules(const Vec3& x, const Vec3& c, double diam, double lo, double width, Derivatives order,
                 RuleA&& rule_a, RuleB&& rule_b, KernelSum& sum) {
  KernelSum a, b;
  rule_a(a);
  rule_b(b);
  const Vec3 r = x - c;
  const double d = r.norm();
  const double span = lo * width * diam;
  const double s = std::clamp((d - lo * diam) / span, 0.0, 1.0);
  const double w = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  sum.u += w * a.u + (1.0 - w) * b.u;
  if (order == Derivatives::value) return;
  const double dw = 30.0 * s * s * (1.0 - s) * (1.0 - s);
  const Vec3 e = r / d;
  const Vec3 grad_s = e / span;
  const Vec3 grad_w = dw * grad_s;
  const double du = a.u - b.u;
  const Vec3 dg = a.grad - b.grad;
  sum.grad += w * a.grad + (1.0 - w) * b.grad + du * grad_w;
  if (order == Derivatives::gradient) return;
  const double ddw = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  const Mat3 hess_s = (Mat3::Identity() - e * e.transpose()) / (d * span);
  const Mat3 hess_w = ddw * grad_s * grad_s.transpose() + dw * hess_s;
  sum.hess += w * a.hess + (1.0 - w) * b.hess + grad_w * dg.transpose() + dg * grad_w.transpose() + du * hess_w;
}

void subdivide(const Vec3& x, const Triangle& t, double q, double diam, int depth,
               const QuadratureTiers& tiers, Derivatives order, KernelSum& sum) {
  const Vec3 ab = 0.5 * (t[0] + t[1]);
  const Vec3 bc = 0.5 * (t[1] + t[2]);
  const Vec3 ca = 0.5 * (t[2] + t[0]);
  const std::array<Triangle, 4> children = {
      {{t[0], ab, ca}, {t[1], bc, ab}, {t[2], ca, bc}, {ab, bc, ca}}};
  const double child_q = 0.25 * q;
  const double child_diam = 0.5 * diam;
  const double lo = tiers.near_ratio * child_diam;
  const double hi = lo * (1.0 + tiers.blend);
  for (const auto& c : children) {
    const Vec3 centroid = (c[0] + c[1] + c[2]) / 3.0;
    const double d2 = (x - centroid).squaredNorm();
    if (depth + 1 >= tiers.max_depth || d2 >= hi * hi) {
      apply_rule(x, c, child_q, order, sum);
    } else if (d2 >= lo * lo) {
      blend_rules(
          x, centroid, child_diam, tiers.near_ratio, tiers.blend, order,
          [&](KernelSum& k) { apply_rule(x, c, child_q, order, k); },
          [&](KernelSum& k) { subdivide(x, c, child_q, child_diam, depth + 1, tiers, order, k); }, sum);
    } else {
      subdivide(x, c, child_q, child_diam, depth + 1, tiers, order, sum);
    }
  }
}

}  // namespace

void integrate_panel(const Vec3& x, const Triangle& tri, double area, double diameter,
                     double density, const QuadratureTiers& tiers, Derivatives order,
                     KernelSum& sum) {
  const Vec3 centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
  const double d2 = (x - centroid).squaredNorm();
  const double q = density * area;
  const double far = tiers.far_ratio * diameter;
  const double near = tiers.near_ratio * diameter;
  const double near_hi = near * (1.0 + tiers.blend);
  const double point = tiers.point_ratio() * diameter;
  if (d2 >= point * point) {
    sum.add_point(x, centroid, q, order);
  } else if (d2 >= far * far) {
    blend_rules(
        x, centroid, diameter, tiers.far_ratio, tiers.blend, order,
        [&](KernelSum& k) { k.add_point(x, centroid, q, order); },
        [&](KernelSum& k) { apply_rule(x, tri, q, order, k); }, sum);
  } else if (d2 >= near_hi * near_hi) {
    apply_rule(x, tri, q, order, sum);
  } else if (d2 >= near * near) {
    blend_rules(
        x, centroid, diameter, tiers.near_ratio, tiers.blend, order,
        [&](KernelSum& k) { apply_rule(x, tri, q, order, k); },
        [&](KernelSum& k) { subdivide(x, tri, q, diameter, 0, tiers, order, k); }, sum);
  } else {
    subdivide(x, tri, q, diameter, 0, tiers, order, sum);
  }
}

double panel_potential(const Vec3& x, const Triangle& tri, double area, double diameter,
                       const QuadratureTiers& tiers) {
  KernelSum sum;
  integrate_panel(x, tri, area, diameter, 1.0, tiers, Derivatives::value, sum);
  return sum.u;
}

}  // namespace potlab
