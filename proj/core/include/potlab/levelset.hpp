#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "potlab/field.hpp"

namespace potlab {

/// Axis-aligned sampling box with `resolution` cells per axis.
struct GridSpec {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  int resolution = 96;
};

/// Cube of half-width max(2 diam, 3 Cap / t) around the body center; large
/// enough that {u >= t} fits inside (Cap / |x| ~ u far away).
[[nodiscard]] GridSpec auto_grid(const PotentialField& field, double t, int resolution = 96);

struct LevelOptions {
  std::optional<GridSpec> grid;
  int resolution = 96;
  /// Newton stops when |u - t| <= tolerance * t or after max_iterations.
  double newton_tolerance = 1e-13;
  int newton_max_iterations = 8;
};

/// How |Du| is taken on the body surface (t = 1), where the sum is singular.
enum class BoundaryGradient {
  /// Exterior trace |Du|+ = sigma: the interior potential of the solved
  /// density is the constant 1, so the normal-derivative jump is all exterior.
  jump,
  /// Evaluate at centroid + 0.5 panel diameter along the outward normal.
  offset,
};

/// Triangulated level surface {u = t} with one sample per triangle.
struct LevelSurface {
  double t = 0.0;
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  /// Field sample at the projected centroid of each face.
  std::vector<FieldSample> samples;
  std::vector<double> areas;
  double total_area = 0.0;
  /// Area fraction of faces whose sample has |Du| below the cutoff.
  double skipped_fraction = 0.0;
  bool on_body = false;

  [[nodiscard]] std::size_t size() const { return faces.size(); }
  [[nodiscard]] Triangle triangle(std::size_t i) const {
    return {vertices[faces[i][0]], vertices[faces[i][1]], vertices[faces[i][2]]};
  }
  /// Vector sum of area * outward normal; ~0 for a closed surface.
  [[nodiscard]] Vec3 closure_defect() const;
};

/// Marching-cubes extraction of {u = t} for 0 < t < 1, oriented along -Du,
/// with vertices and sample points Newton-projected onto the level.
[[nodiscard]] LevelSurface extract_level(const PotentialField& field, double t,
                                         const LevelOptions& options = {});

/// The body surface as the t = 1 level; H comes from face_curvature.
[[nodiscard]] LevelSurface boundary_level(const PotentialField& field,
                                          std::span<const double> face_curvature,
                                          BoundaryGradient policy = BoundaryGradient::jump);

/// Pointwise integrand. `surrogate` is used on samples without curvature;
/// when it is empty such samples are skipped (contribute 0).
struct Integrand {
  std::function<double(const FieldSample&)> value;
  std::function<double(const FieldSample&)> surrogate;
  bool needs_curvature = false;
};

/// Centroid-rule integral over the level. A NaN or infinite contribution
/// raises ComputationError naming the offending face.
[[nodiscard]] double surface_integral(const LevelSurface& level, const Integrand& integrand);

/// Cap from the flux identity: Cap = integral of |Du| / ((n-2) |S^{n-1}|).
[[nodiscard]] double capacity_flux(const LevelSurface& level);

/// Writes the level triangulation as OFF.
void save_level_off(const LevelSurface& level, const std::filesystem::path& path);

}  // namespace potlab
