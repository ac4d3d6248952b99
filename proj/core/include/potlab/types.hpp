#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace potlab {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Vertex-index triple of a triangle, counter-clockwise seen from outside.
using Face = std::array<std::int32_t, 3>;

/// Corner positions of a triangle.
using Triangle = std::array<Vec3, 3>;

}  // namespace potlab
