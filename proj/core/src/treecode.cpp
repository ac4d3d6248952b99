#include "potlab/treecode.hpp"

#include <algorithm>
#include <cmath>

#include "potlab/constants.hpp"

namespace potlab {

FarFieldTree::FarFieldTree(const PotentialField& field, double opening_angle,
                           std::size_t leaf_size)
    : field_(&field), theta_(opening_angle), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  const auto& mesh = field.mesh();
  const auto n = static_cast<std::uint32_t>(mesh.face_count());
  order_.resize(n);
  charge_.resize(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    order_[j] = j;
    charge_[j] = field.density().sigma[j] * mesh.area(j) * dim::kernel_factor;
  }
  nodes_.reserve(2 * n / leaf_size_ + 16);
  nodes_.emplace_back();
  build(0, 0, n, 0);
}

void FarFieldTree::build(std::int32_t self, std::uint32_t first, std::uint32_t count, int depth) {
  const auto& mesh = field_->mesh();

  Vec3 lo = mesh.centroid(order_[first]);
  Vec3 hi = lo;
  double half_panel = 0.0;
  for (std::uint32_t k = first; k < first + count; ++k) {
    const Vec3& c = mesh.centroid(order_[k]);
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
    half_panel = std::max(half_panel, 0.5 * mesh.diameter(order_[k]));
  }
  Node node;
  node.center = 0.5 * (lo + hi);
  node.first = first;
  node.count = count;
  double radius = 0.0;
  for (std::uint32_t k = first; k < first + count; ++k) {
    const std::uint32_t j = order_[k];
    const Vec3 d = mesh.centroid(j) - node.center;
    const double q = charge_[j];
    radius = std::max(radius, d.norm());
    node.m0 += q;
    node.m1 += q * d;
    node.m2.noalias() += q * (d * d.transpose());
    const double x = d.x(), y = d.y(), z = d.z();
    const std::array<double, 10> cubic = {x * x * x, x * x * y, x * x * z, x * y * y, x * y * z,
                                          x * z * z, y * y * y, y * y * z, y * z * z, z * z * z};
    for (int m = 0; m < 10; ++m) node.m3[m] += q * cubic[m];
  }
  node.radius = radius + half_panel;
  nodes_[self] = node;

  if (count <= leaf_size_ || (hi - lo).maxCoeff() <= 0.0 || depth > 40) return;

  const Vec3 mid = 0.5 * (lo + hi);
  std::array<std::vector<std::uint32_t>, 8> buckets;
  for (std::uint32_t k = first; k < first + count; ++k) {
    const Vec3& c = mesh.centroid(order_[k]);
    const int oct = (c.x() > mid.x() ? 1 : 0) | (c.y() > mid.y() ? 2 : 0) | (c.z() > mid.z() ? 4 : 0);
    buckets[oct].push_back(order_[k]);
  }
  std::uint32_t cursor = first;
  std::array<std::pair<std::uint32_t, std::uint32_t>, 8> ranges{};
  int used = 0;
  for (const auto& b : buckets) {
    if (b.empty()) continue;
    std::copy(b.begin(), b.end(), order_.begin() + cursor);
    ranges[used++] = {cursor, static_cast<std::uint32_t>(b.size())};
    cursor += static_cast<std::uint32_t>(b.size());
  }
  if (used <= 1) return;

  const auto child_begin = static_cast<std::int32_t>(nodes_.size());
  nodes_.resize(nodes_.size() + used);
  nodes_[self].child_begin = child_begin;
  nodes_[self].child_count = used;
  for (int c = 0; c < used; ++c) build(child_begin + c, ranges[c].first, ranges[c].second, depth + 1);
}

double FarFieldTree::expansion(const Node& node, const Vec3& x) const {
  const Vec3 r = x - node.center;
  const double dist = r.norm();
  const double inv = 1.0 / dist;
  const Vec3 e = r * inv;
  const double l1 = node.m1.dot(e);
  const double l2 = 0.5 * (3.0 * e.dot(node.m2 * e) - node.m2.trace());
  const auto& m = node.m3;
  const double ex = e.x(), ey = e.y(), ez = e.z();
  const double m3eee = m[0] * ex * ex * ex + 3.0 * m[1] * ex * ex * ey + 3.0 * m[2] * ex * ex * ez +
                       3.0 * m[3] * ex * ey * ey + 6.0 * m[4] * ex * ey * ez +
                       3.0 * m[5] * ex * ez * ez + m[6] * ey * ey * ey + 3.0 * m[7] * ey * ey * ez +
                       3.0 * m[8] * ey * ez * ez + m[9] * ez * ez * ez;
  // T_k = sum q |d|^2 d_k.
  const double tx = m[0] + m[3] + m[5];
  const double ty = m[1] + m[6] + m[8];
  const double tz = m[2] + m[7] + m[9];
  const double l3 = 0.5 * (5.0 * m3eee - 3.0 * (tx * ex + ty * ey + tz * ez));
  return inv * (node.m0 + inv * (l1 + inv * (l2 + inv * l3)));
}

double FarFieldTree::potential(const Vec3& x) const {
  const auto& mesh = field_->mesh();
  const auto& sigma = field_->density().sigma;
  const auto& tiers = field_->density().tiers;
  double u = 0.0;
  std::int32_t stack[512];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    const double d2 = (x - node.center).squaredNorm();
    if (node.radius * node.radius < theta_ * theta_ * d2) {
      u += expansion(node, x);
      continue;
    }
    if (node.child_begin < 0 || top + node.child_count > 512) {
      KernelSum sum;
      for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
        const std::uint32_t j = order_[k];
        integrate_panel(x, mesh.triangle(j), mesh.area(j), mesh.diameter(j), sigma[j], tiers,
                        Derivatives::value, sum);
      }
      u += sum.u;
      continue;
    }
    for (int c = 0; c < node.child_count; ++c) stack[top++] = node.child_begin + c;
  }
  return u;
}

}  // namespace potlab
