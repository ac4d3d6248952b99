#pragma once

#include <optional>
#include <string>
#include <variant>

#include "potlab/mesh.hpp"

namespace potlab {

struct Ball {
  double radius = 1.0;
};

/// Axis-aligned ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 with a >= b >= c > 0.
struct Ellipsoid {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

/// Tagged choice of the analytic oracle bodies, centered at the origin.
class AnalyticShape {
 public:
  AnalyticShape(Ball ball);            // NOLINT(google-explicit-constructor)
  AnalyticShape(Ellipsoid ellipsoid);  // NOLINT(google-explicit-constructor)

  [[nodiscard]] const std::variant<Ball, Ellipsoid>& value() const { return value_; }
  [[nodiscard]] bool is_ball() const { return std::holds_alternative<Ball>(value_); }
  /// Semi-axes (a, b, c); (R, R, R) for a ball.
  [[nodiscard]] Vec3 semi_axes() const;
  /// Largest semi-axis; the length scale used by on-surface tolerances.
  [[nodiscard]] double scale() const { return semi_axes().maxCoeff(); }

  /// Implicit function F = sum x_i^2 / a_i^2 - 1.
  [[nodiscard]] double implicit(const Vec3& x) const;
  /// Approximate distance |F| / |DF| from the surface.
  [[nodiscard]] double surface_distance(const Vec3& x) const;
  /// Radial projection of x (not the origin) onto the surface.
  [[nodiscard]] Vec3 project(const Vec3& x) const;

  [[nodiscard]] AnalyticShape scaled(double factor) const;
  /// "ball:R" or "ellipsoid:a,b,c".
  [[nodiscard]] std::string id() const;

 private:
  std::variant<Ball, Ellipsoid> value_;
};

/// Parses "ball:R" or "ellipsoid:a,b,c"; throws InputError.
[[nodiscard]] AnalyticShape parse_shape(const std::string& text);

inline constexpr int max_refinement = 7;

/// Icosphere with 20 * 4^refinement faces, vertices radially projected onto
/// the shape; non-spherical shapes then get tangential relaxation sweeps.
[[nodiscard]] TriMesh make_shape(const AnalyticShape& shape, int refinement);

/// The domain Omega: its mesh plus, when generated, the analytic shape the
/// mesh approximates (used for exact boundary curvature).
struct Body {
  TriMesh mesh;
  std::optional<AnalyticShape> shape;
  std::string id;
};

[[nodiscard]] Body make_body(const AnalyticShape& shape, int refinement);
[[nodiscard]] Body load_body(const std::filesystem::path& path);

}  // namespace potlab
