#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "potlab/types.hpp"

namespace potlab {

/// Closed, consistently outward-oriented triangulated surface.
///
/// Construction validates every invariant: indices in range, no triangle
/// with area below 1e-12 * (bounding-box diagonal)^2, every undirected edge
/// shared by exactly two faces traversing it in opposite directions, and a
/// positive enclosed volume. A negative enclosed volume is repaired by a
/// global flip of all faces; any other violation throws GeometryError with
/// the offending face or edge.
class TriMesh {
 public:
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

  [[nodiscard]] std::span<const Vec3> vertices() const { return vertices_; }
  [[nodiscard]] std::span<const Face> faces() const { return faces_; }
  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] std::size_t face_count() const { return faces_.size(); }

  [[nodiscard]] Triangle triangle(std::size_t f) const;
  [[nodiscard]] const Vec3& normal(std::size_t f) const { return normals_[f]; }
  [[nodiscard]] double area(std::size_t f) const { return areas_[f]; }
  [[nodiscard]] const Vec3& centroid(std::size_t f) const { return centroids_[f]; }
  /// Longest edge of face f.
  [[nodiscard]] double diameter(std::size_t f) const { return diameters_[f]; }

  [[nodiscard]] std::span<const double> areas() const { return areas_; }
  [[nodiscard]] double total_area() const { return total_area_; }
  [[nodiscard]] double enclosed_volume() const { return volume_; }
  [[nodiscard]] double max_panel_diameter() const { return max_diameter_; }

  [[nodiscard]] const Vec3& bbox_min() const { return bbox_min_; }
  [[nodiscard]] const Vec3& bbox_max() const { return bbox_max_; }
  [[nodiscard]] Vec3 center() const { return 0.5 * (bbox_min_ + bbox_max_); }
  /// Length of the bounding-box diagonal; used as the body diameter.
  [[nodiscard]] double diameter() const { return (bbox_max_ - bbox_min_).norm(); }

  /// True when construction flipped every face to make the volume positive.
  [[nodiscard]] bool orientation_repaired() const { return flipped_; }

  /// Copy with every vertex multiplied by factor (about the origin).
  [[nodiscard]] TriMesh scaled(double factor) const;

 private:
  void validate_indices() const;
  void compute_geometry();
  void check_closed() const;

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Vec3> normals_;
  std::vector<Vec3> centroids_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  Vec3 bbox_min_ = Vec3::Zero();
  Vec3 bbox_max_ = Vec3::Zero();
  double total_area_ = 0.0;
  double volume_ = 0.0;
  double max_diameter_ = 0.0;
  bool flipped_ = false;
};

/// Sum over faces of area * outward normal; zero for a closed surface.
[[nodiscard]] Vec3 area_vector_sum(const TriMesh& mesh);

/// Reads a triangle-only OFF or OBJ file (chosen by extension).
[[nodiscard]] TriMesh load_mesh(const std::filesystem::path& path);

/// Writes OFF with 17 significant digits.
void save_off(const std::filesystem::path& path, std::span<const Vec3> vertices,
              std::span<const Face> faces);
void save_off(const std::filesystem::path& path, const TriMesh& mesh);

}  // namespace potlab
