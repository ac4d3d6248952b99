#pragma once

#include <vector>

#include "potlab/shapes.hpp"

namespace potlab {

// Mean curvature is the trace of the second fundamental form (sum of the
// principal curvatures) with respect to the outward normal: 2/R on a sphere.

/// Closed-form H = div(DF/|DF|) at a point on the analytic surface. Throws
/// DomainError if the point is farther than 1e-9 * scale from the surface.
[[nodiscard]] double mean_curvature(const AnalyticShape& shape, const Vec3& point);

/// Cotangent-Laplacian estimate at a vertex; see vertex_mean_curvatures.
[[nodiscard]] double mean_curvature(const TriMesh& mesh, std::size_t vertex);

/// Mixed-Voronoi areas per vertex; obtuse triangles split barycentrically.
[[nodiscard]] std::vector<double> vertex_mixed_areas(const TriMesh& mesh);

/// H_i = -(Laplace-Beltrami of position) . n_i with cotangent weights and
/// mixed-Voronoi areas, n_i the area-weighted vertex normal.
[[nodiscard]] std::vector<double> vertex_mean_curvatures(const TriMesh& mesh);

/// One H per face: analytic value at the radially projected centroid when the
/// body carries its shape, otherwise the mean of the three vertex estimates.
[[nodiscard]] std::vector<double> face_mean_curvatures(const Body& body);

}  // namespace potlab
