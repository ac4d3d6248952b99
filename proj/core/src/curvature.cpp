#include "potlab/curvature.hpp"

#include <cmath>
#include <sstream>

#include "potlab/errors.hpp"

namespace potlab {

double mean_curvature(const AnalyticShape& shape, const Vec3& point) {
  const double dist = shape.surface_distance(point);
  if (dist > 1e-9 * shape.scale()) {
    std::ostringstream msg;
    msg << "point (" << point.transpose() << ") is " << dist << " away from " << shape.id();
    throw DomainError(msg.str());
  }
  // F = sum x_i^2/a_i^2 - 1: DF = 2 x_i/a_i^2, D^2F = diag(2/a_i^2).
  // div(DF/|DF|) = (|DF|^2 tr D^2F - D^2F(DF, DF)) / |DF|^3.
  const Vec3 axes = shape.semi_axes();
  const Vec3 hess = 2.0 * axes.cwiseProduct(axes).cwiseInverse();
  const Vec3 grad = point.cwiseProduct(hess);
  const double g2 = grad.squaredNorm();
  const double quad = grad.cwiseProduct(grad).dot(hess);
  return (g2 * hess.sum() - quad) / (g2 * std::sqrt(g2));
}

namespace {

double cot(const Vec3& a, const Vec3& b) { return a.dot(b) / a.cross(b).norm(); }

}  // namespace

std::vector<double> vertex_mixed_areas(const TriMesh& mesh) {
  std::vector<double> area(mesh.vertex_count(), 0.0);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto& face = mesh.faces()[f];
    const auto tri = mesh.triangle(f);
    const double total = mesh.area(f);
    bool obtuse = false;
    for (int k = 0; k < 3; ++k) {
      const Vec3 e1 = tri[(k + 1) % 3] - tri[k];
      const Vec3 e2 = tri[(k + 2) % 3] - tri[k];
      if (e1.dot(e2) < 0.0) obtuse = true;
    }
    if (obtuse) {
      for (int k = 0; k < 3; ++k) area[face[k]] += total / 3.0;
      continue;
    }
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = tri[k];
      const Vec3& q = tri[(k + 1) % 3];
      const Vec3& r = tri[(k + 2) % 3];
      const double cot_q = cot(p - q, r - q);
      const double cot_r = cot(p - r, q - r);
      area[face[k]] += ((p - r).squaredNorm() * cot_q + (p - q).squaredNorm() * cot_r) / 8.0;
    }
  }
  return area;
}

std::vector<double> vertex_mean_curvatures(const TriMesh& mesh) {
  const std::size_t nv = mesh.vertex_count();
  std::vector<Vec3> laplace(nv, Vec3::Zero());
  std::vector<Vec3> normal(nv, Vec3::Zero());
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto& face = mesh.faces()[f];
    const auto tri = mesh.triangle(f);
    for (int k = 0; k < 3; ++k) {
      // Edge (i, j) opposite corner k.
      const int i = face[(k + 1) % 3];
      const int j = face[(k + 2) % 3];
      const Vec3& pk = tri[k];
      const double w = cot(tri[(k + 1) % 3] - pk, tri[(k + 2) % 3] - pk);
      const Vec3 d = tri[(k + 2) % 3] - tri[(k + 1) % 3];
      laplace[i] += w * d;
      laplace[j] -= w * d;
      normal[face[k]] += mesh.area(f) * mesh.normal(f);
    }
  }
  const auto area = vertex_mixed_areas(mesh);
  std::vector<double> h(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (area[v] <= 0.0 || normal[v].squaredNorm() == 0.0) continue;  // unreferenced vertex
    const Vec3 lb = laplace[v] / (2.0 * area[v]);
    h[v] = -lb.dot(normal[v].normalized());
  }
  return h;
}

double mean_curvature(const TriMesh& mesh, std::size_t vertex) {
  if (vertex >= mesh.vertex_count()) throw DomainError("vertex index out of range");
  return vertex_mean_curvatures(mesh)[vertex];
}

std::vector<double> face_mean_curvatures(const Body& body) {
  const auto& mesh = body.mesh;
  std::vector<double> h(mesh.face_count());
  if (body.shape) {
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      h[f] = mean_curvature(*body.shape, body.shape->project(mesh.centroid(f)));
    }
    return h;
  }
  const auto hv = vertex_mean_curvatures(mesh);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto& face = mesh.faces()[f];
    h[f] = (hv[face[0]] + hv[face[1]] + hv[face[2]]) / 3.0;
  }
  return h;
}

}  // namespace potlab
