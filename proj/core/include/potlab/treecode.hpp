#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "potlab/field.hpp"

namespace potlab {

/// Barnes-Hut style approximation of u for bulk grid sampling.
///
/// Panels are grouped in an octree over their centroids; a cell whose radius
/// is below opening_angle times its distance is replaced by its multipole
/// expansion through octupole order, and leaf cells are evaluated with the
/// same tiered panel quadrature as PotentialField::evaluate. The result is
/// used only to classify grid nodes against a level; every quantity that is
/// integrated comes from the exact sum.
class FarFieldTree {
 public:
  explicit FarFieldTree(const PotentialField& field, double opening_angle = 0.35,
                        std::size_t leaf_size = 16);

  [[nodiscard]] double potential(const Vec3& x) const;
  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    double m0 = 0.0;
    Vec3 m1 = Vec3::Zero();
    Mat3 m2 = Mat3::Zero();
    // Symmetric third moment, index order xxx xxy xxz xyy xyz xzz yyy yyz yzz zzz.
    std::array<double, 10> m3{};
    std::uint32_t first = 0;
    std::uint32_t count = 0;
    std::int32_t child_begin = -1;
    std::int32_t child_count = 0;
  };

  void build(std::int32_t self, std::uint32_t first, std::uint32_t count, int depth);
  [[nodiscard]] double expansion(const Node& node, const Vec3& x) const;

  const PotentialField* field_;
  double theta_;
  std::size_t leaf_size_;
  std::vector<std::uint32_t> order_;
  std::vector<double> charge_;
  std::vector<Node> nodes_;
};

}  // namespace potlab
