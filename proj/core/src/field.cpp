#include "potlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

#include "potlab/constants.hpp"
#include "potlab/errors.hpp"

namespace potlab {

namespace {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection).
Vec3 closest_point(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

// Faces binned by their xy footprint; parity queries cast a ray along +z.
struct PotentialField::RayIndex {
  Vec3 lo, hi;
  int bins = 1;
  double jitter_x = 0.0, jitter_y = 0.0;
  std::vector<std::vector<std::uint32_t>> cells;

  explicit RayIndex(const TriMesh& mesh) {
    lo = mesh.bbox_min();
    hi = mesh.bbox_max();
    const double diam = mesh.diameter();
    // Irrational offsets keep rays off the exact symmetry planes of
    // generated shapes and grids.
    jitter_x = 1.2345678901e-7 * diam;
    jitter_y = 2.7182818285e-7 * diam;
    bins = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(mesh.face_count()))), 1, 256);
    cells.resize(static_cast<std::size_t>(bins) * bins);
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      const auto t = mesh.triangle(f);
      const Vec3 tmin = t[0].cwiseMin(t[1]).cwiseMin(t[2]);
      const Vec3 tmax = t[0].cwiseMax(t[1]).cwiseMax(t[2]);
      const int x0 = bin(tmin.x(), 0), x1 = bin(tmax.x(), 0);
      const int y0 = bin(tmin.y(), 1), y1 = bin(tmax.y(), 1);
      for (int ix = x0; ix <= x1; ++ix) {
        for (int iy = y0; iy <= y1; ++iy) cells[ix * bins + iy].push_back(static_cast<std::uint32_t>(f));
      }
    }
  }

  [[nodiscard]] int bin(double v, int axis) const {
    const double span = hi[axis] - lo[axis];
    if (!(span > 0.0)) return 0;
    const int b = static_cast<int>(std::floor((v - lo[axis]) / span * bins));
    return std::clamp(b, 0, bins - 1);
  }

  [[nodiscard]] bool inside(const TriMesh& mesh, const Vec3& p) const {
    if ((p.array() < lo.array()).any() || (p.array() > hi.array()).any()) return false;
    // A ray that grazes an edge or vertex is recast with other offsets.
    constexpr double kGraze = 1e-9;
    bool parity = false;
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double scale = 1.0 + 0.7548776662 * attempt;
      const double px = p.x() + scale * jitter_x, py = p.y() - (attempt % 2 ? 1.0 : -1.0) * scale * jitter_y;
      int crossings = 0;
      bool grazed = false;
      for (const auto f : cells[bin(px, 0) * bins + bin(py, 1)]) {
        const auto [a, b, c] = mesh.triangle(f);
        const double e1x = b.x() - a.x(), e1y = b.y() - a.y();
        const double e2x = c.x() - a.x(), e2y = c.y() - a.y();
        const double det = e1x * e2y - e1y * e2x;
        if (det == 0.0) continue;
        const double qx = px - a.x(), qy = py - a.y();
        const double s = (qx * e2y - qy * e2x) / det;
        const double r = (e1x * qy - e1y * qx) / det;
        if (s < -kGraze || r < -kGraze || s + r > 1.0 + kGraze) continue;
        if (s < kGraze || r < kGraze || s + r > 1.0 - kGraze) grazed = true;
        const double z = a.z() + s * (b.z() - a.z()) + r * (c.z() - a.z());
        if (z > p.z()) ++crossings;
      }
      parity = (crossings % 2) == 1;
      if (!grazed) break;
    }
    return parity;
  }
};

FieldSample make_sample(const Vec3& x, double u, const Vec3& grad, const Mat3& hess,
                        double grad_cutoff) {
  FieldSample s;
  s.x = x;
  s.u = u;
  s.grad = grad;
  s.hess = hess;
  s.speed = grad.norm();
  s.phi = -std::log(u);
  s.conf_speed = s.speed / std::pow(u, dim::conformal_exponent);
  s.P = s.conf_speed * s.conf_speed;
  s.curvature_defined = s.speed >= grad_cutoff && s.speed > 0.0;
  if (s.curvature_defined) {
    s.H = s.hess_along_grad() / (s.speed * s.speed * s.speed);
    s.H_conf = std::pow(u, -dim::inverse_n_minus_2) * (s.H - dim::conformal_exponent * s.speed / u);
  } else {
    s.H = std::numeric_limits<double>::quiet_NaN();
    s.H_conf = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

PotentialField::PotentialField(SurfaceDensity density)
    : density_(std::move(density)), capacity_(potlab::capacity(density_)) {
  const auto& mesh = density_.mesh;
  const std::size_t n = mesh.face_count();
  cx_.resize(n);
  cy_.resize(n);
  cz_.resize(n);
  charge_.resize(n);
  far2_.resize(n);
  const double far = density_.tiers.point_ratio();
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3& c = mesh.centroid(j);
    cx_[j] = c.x();
    cy_[j] = c.y();
    cz_[j] = c.z();
    charge_[j] = density_.sigma[j] * mesh.area(j) * dim::kernel_factor;
    far2_[j] = far * far * mesh.diameter(j) * mesh.diameter(j);
  }
  const double diam = mesh.diameter();
  grad_cutoff_ = 1e-8 * capacity_.value / (diam * diam);
  rays_ = std::make_shared<const RayIndex>(mesh);
}

namespace {

struct PanelArrays {
  const double* cx;
  const double* cy;
  const double* cz;
  const double* q;
  const double* far2;
  std::size_t n;
};

#if defined(__AVX512F__)

// 1/sqrt from the 14-bit estimate and two Newton steps (about 1 ulp).
inline __m512d inv_sqrt(__m512d r2) {
  const __m512d half = _mm512_set1_pd(0.5);
  const __m512d three_halves = _mm512_set1_pd(1.5);
  const __m512d h = _mm512_mul_pd(half, r2);
  __m512d y = _mm512_rsqrt14_pd(r2);
  y = _mm512_mul_pd(y, _mm512_fnmadd_pd(h, _mm512_mul_pd(y, y), three_halves));
  y = _mm512_mul_pd(y, _mm512_fnmadd_pd(h, _mm512_mul_pd(y, y), three_halves));
  return y;
}

template <Derivatives Order>
void far_pass(const PanelArrays& a, const Vec3& x, KernelSum& sum, std::vector<std::uint32_t>& near) {
  const __m512d px = _mm512_set1_pd(x.x()), py = _mm512_set1_pd(x.y()), pz = _mm512_set1_pd(x.z());
  __m512d u = _mm512_setzero_pd();
  __m512d gx = u, gy = u, gz = u;
  __m512d hxx = u, hxy = u, hxz = u, hyy = u, hyz = u, hzz = u;
  const __m512d three = _mm512_set1_pd(3.0);
  for (std::size_t j = 0; j < a.n; j += 8) {
    const std::size_t left = a.n - j;
    const __mmask8 live = left >= 8 ? __mmask8(0xFF) : __mmask8((1u << left) - 1u);
    const __m512d dx = _mm512_sub_pd(px, _mm512_maskz_loadu_pd(live, a.cx + j));
    const __m512d dy = _mm512_sub_pd(py, _mm512_maskz_loadu_pd(live, a.cy + j));
    const __m512d dz = _mm512_sub_pd(pz, _mm512_maskz_loadu_pd(live, a.cz + j));
    const __m512d r2 = _mm512_fmadd_pd(dx, dx, _mm512_fmadd_pd(dy, dy, _mm512_mul_pd(dz, dz)));
    const __m512d f2 = _mm512_maskz_loadu_pd(live, a.far2 + j);
    const __mmask8 far = _mm512_mask_cmp_pd_mask(live, r2, f2, _CMP_GE_OQ);
    __mmask8 close = live & ~far;
    while (close) {
      const int bit = __builtin_ctz(close);
      near.push_back(static_cast<std::uint32_t>(j + bit));
      close &= close - 1;
    }
    if (!far) continue;
    const __m512d safe = _mm512_mask_blend_pd(far, _mm512_set1_pd(1.0), r2);
    const __m512d inv_r = inv_sqrt(safe);
    const __m512d c1 = _mm512_mul_pd(_mm512_maskz_loadu_pd(far, a.q + j), inv_r);
    u = _mm512_add_pd(u, c1);
    if constexpr (Order != Derivatives::value) {
      const __m512d inv_r2 = _mm512_mul_pd(inv_r, inv_r);
      const __m512d c3 = _mm512_mul_pd(c1, inv_r2);
      gx = _mm512_fnmadd_pd(c3, dx, gx);
      gy = _mm512_fnmadd_pd(c3, dy, gy);
      gz = _mm512_fnmadd_pd(c3, dz, gz);
      if constexpr (Order == Derivatives::hessian) {
        const __m512d c5 = _mm512_mul_pd(three, _mm512_mul_pd(c3, inv_r2));
        const __m512d c5x = _mm512_mul_pd(c5, dx);
        const __m512d c5y = _mm512_mul_pd(c5, dy);
        hxx = _mm512_add_pd(hxx, _mm512_fmsub_pd(c5x, dx, c3));
        hyy = _mm512_add_pd(hyy, _mm512_fmsub_pd(c5y, dy, c3));
        hzz = _mm512_add_pd(hzz, _mm512_fmsub_pd(_mm512_mul_pd(c5, dz), dz, c3));
        hxy = _mm512_fmadd_pd(c5x, dy, hxy);
        hxz = _mm512_fmadd_pd(c5x, dz, hxz);
        hyz = _mm512_fmadd_pd(c5y, dz, hyz);
      }
    }
  }
  sum.u += _mm512_reduce_add_pd(u);
  if constexpr (Order != Derivatives::value) {
    sum.grad += Vec3(_mm512_reduce_add_pd(gx), _mm512_reduce_add_pd(gy), _mm512_reduce_add_pd(gz));
  }
  if constexpr (Order == Derivatives::hessian) {
    const double xx = _mm512_reduce_add_pd(hxx), yy = _mm512_reduce_add_pd(hyy);
    const double zz = _mm512_reduce_add_pd(hzz), xy = _mm512_reduce_add_pd(hxy);
    const double xz = _mm512_reduce_add_pd(hxz), yz = _mm512_reduce_add_pd(hyz);
    Mat3 h;
    h << xx, xy, xz, xy, yy, yz, xz, yz, zz;
    sum.hess += h;
  }
}

#else

template <Derivatives Order>
void far_pass(const PanelArrays& a, const Vec3& x, KernelSum& sum, std::vector<std::uint32_t>& near) {
  const double px = x.x(), py = x.y(), pz = x.z();
  double u = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
  double hxx = 0.0, hxy = 0.0, hxz = 0.0, hyy = 0.0, hyz = 0.0, hzz = 0.0;
  for (std::size_t j = 0; j < a.n; ++j) {
    const double dx = px - a.cx[j], dy = py - a.cy[j], dz = pz - a.cz[j];
    const double r2 = dx * dx + dy * dy + dz * dz;
    if (r2 < a.far2[j]) {
      near.push_back(static_cast<std::uint32_t>(j));
      continue;
    }
    const double inv_r = 1.0 / std::sqrt(r2);
    const double c1 = a.q[j] * inv_r;
    u += c1;
    if constexpr (Order != Derivatives::value) {
      const double inv_r2 = inv_r * inv_r;
      const double c3 = c1 * inv_r2;
      gx -= c3 * dx;
      gy -= c3 * dy;
      gz -= c3 * dz;
      if constexpr (Order == Derivatives::hessian) {
        const double c5 = 3.0 * c3 * inv_r2;
        hxx += c5 * dx * dx - c3;
        hyy += c5 * dy * dy - c3;
        hzz += c5 * dz * dz - c3;
        hxy += c5 * dx * dy;
        hxz += c5 * dx * dz;
        hyz += c5 * dy * dz;
      }
    }
  }
  sum.u += u;
  sum.grad += Vec3(gx, gy, gz);
  Mat3 h;
  h << hxx, hxy, hxz, hxy, hyy, hyz, hxz, hyz, hzz;
  sum.hess += h;
}

#endif

}  // namespace

KernelSum PotentialField::evaluate(const Vec3& x, Derivatives order) const {
  const PanelArrays arrays{cx_.data(), cy_.data(), cz_.data(), charge_.data(), far2_.data(), charge_.size()};
  thread_local std::vector<std::uint32_t> near;
  near.clear();
  KernelSum sum;
  switch (order) {
    case Derivatives::value: far_pass<Derivatives::value>(arrays, x, sum, near); break;
    case Derivatives::gradient: far_pass<Derivatives::gradient>(arrays, x, sum, near); break;
    case Derivatives::hessian: far_pass<Derivatives::hessian>(arrays, x, sum, near); break;
  }
  const auto& mesh = density_.mesh;
  for (const auto j : near) {
    integrate_panel(x, mesh.triangle(j), mesh.area(j), mesh.diameter(j), density_.sigma[j],
                    density_.tiers, order, sum);
  }
  return sum;
}

bool PotentialField::inside_body(const Vec3& x) const { return rays_->inside(mesh(), x); }

bool PotentialField::is_exterior(const Vec3& x) const {
  const auto& mesh = density_.mesh;
  const double margin = 1e-9 * mesh.diameter();
  const Vec3 lo = mesh.bbox_min().array() - margin;
  const Vec3 hi = mesh.bbox_max().array() + margin;
  if ((x.array() < lo.array()).any() || (x.array() > hi.array()).any()) return true;
  if (rays_->inside(mesh, x)) return false;
  // Points within the margin are closer to a face than its own diameter,
  // so only faces whose centroid is that close need the exact distance.
  for (std::size_t j = 0; j < mesh.face_count(); ++j) {
    const double reach = mesh.diameter(j) + margin;
    if ((x - mesh.centroid(j)).squaredNorm() > reach * reach) continue;
    const auto [a, b, c] = mesh.triangle(j);
    if ((x - closest_point(x, a, b, c)).norm() <= margin) return false;
  }
  return true;
}

FieldSample sample_field(const PotentialField& field, const Vec3& x) {
  if (!field.is_exterior(x)) {
    std::ostringstream msg;
    msg << "point (" << x.transpose() << ") is not in the exterior of the body";
    throw DomainError(msg.str());
  }
  return sample_field(field, x, field.evaluate(x, Derivatives::hessian));
}

FieldSample sample_field(const PotentialField& field, const Vec3& x, const KernelSum& k) {
  if (!std::isfinite(k.u) || !k.grad.allFinite() || !k.hess.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite field value at (" << x.transpose() << ")";
    throw ComputationError(msg.str());
  }
  if (!(k.u > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive potential " << k.u << " at (" << x.transpose() << ")";
    throw ComputationError(msg.str());
  }
  return make_sample(x, k.u, k.grad, k.hess, field.grad_cutoff());
}

FieldSample ball_oracle_sample(double radius, const Vec3& x) {
  const double r = x.norm();
  if (!(radius > 0.0) || !(r > radius)) {
    throw DomainError("ball oracle needs |x| > R > 0");
  }
  const double r2 = r * r;
  const double u = radius / r;
  const Vec3 grad = -radius * x / (r2 * r);
  const Mat3 hess = radius * (3.0 * x * x.transpose() - r2 * Mat3::Identity()) / (r2 * r2 * r);
  return make_sample(x, u, grad, hess, 1e-8 * radius / (4.0 * radius * radius));
}

double asymptotic_fit(const PotentialField& field) {
  const double g = std::numbers::phi;
  const std::array<Vec3, 12> dirs = {Vec3{-1, g, 0}, {1, g, 0},  {-1, -g, 0}, {1, -g, 0},
                                     {0, -1, g},     {0, 1, g},  {0, -1, -g}, {0, 1, -g},
                                     {g, 0, -1},     {g, 0, 1},  {-g, 0, -1}, {-g, 0, 1}};
  const Vec3 center = field.mesh().center();
  const double radius = 50.0 * field.mesh().diameter();
  double sum = 0.0;
  for (const auto& d : dirs) {
    const Vec3 x = center + radius * d.normalized();
    sum += field.evaluate(x, Derivatives::value).u * radius;
  }
  return sum / static_cast<double>(dirs.size());
}

}  // namespace potlab
