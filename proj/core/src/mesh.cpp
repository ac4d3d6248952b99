#include "potlab/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "potlab/errors.hpp"

namespace potlab {

namespace {

std::uint64_t edge_key(std::int32_t a, std::int32_t b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

struct EdgeUse {
  std::size_t face;
  bool forward;  // traversed from the smaller to the larger index
};

}  // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  if (faces_.empty()) throw GeometryError("mesh has no faces");
  validate_indices();
  compute_geometry();
  check_closed();
  if (volume_ < 0.0) {
    for (auto& f : faces_) std::swap(f[1], f[2]);
    flipped_ = true;
    compute_geometry();
  }
  if (!(volume_ > 0.0)) throw GeometryError("mesh encloses zero volume");
}

void TriMesh::validate_indices() const {
  const auto nv = static_cast<std::int32_t>(vertices_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (const auto idx : faces_[f]) {
      if (idx < 0 || idx >= nv) {
        std::ostringstream msg;
        msg << "face " << f << " references vertex " << idx << " out of range [0, " << nv << ")";
        throw GeometryError(msg.str());
      }
    }
  }
}

void TriMesh::compute_geometry() {
  bbox_min_ = vertices_.front();
  bbox_max_ = vertices_.front();
  for (const auto& v : vertices_) {
    bbox_min_ = bbox_min_.cwiseMin(v);
    bbox_max_ = bbox_max_.cwiseMax(v);
  }
  const double diag2 = (bbox_max_ - bbox_min_).squaredNorm();
  const double min_area = 1e-12 * diag2;

  const std::size_t nf = faces_.size();
  normals_.resize(nf);
  centroids_.resize(nf);
  areas_.resize(nf);
  diameters_.resize(nf);
  total_area_ = 0.0;
  volume_ = 0.0;
  max_diameter_ = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const auto [a, b, c] = triangle(f);
    const Vec3 cross = (b - a).cross(c - a);
    const double area = 0.5 * cross.norm();
    if (!(area > min_area)) {
      std::ostringstream msg;
      msg << "degenerate triangle: face " << f << " has area " << area;
      throw GeometryError(msg.str());
    }
    areas_[f] = area;
    normals_[f] = cross / (2.0 * area);
    centroids_[f] = (a + b + c) / 3.0;
    diameters_[f] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    total_area_ += area;
    volume_ += a.dot(b.cross(c)) / 6.0;
    max_diameter_ = std::max(max_diameter_, diameters_[f]);
  }
}

void TriMesh::check_closed() const {
  std::unordered_map<std::uint64_t, std::vector<EdgeUse>> uses;
  uses.reserve(faces_.size() * 2);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const auto a = faces_[f][k];
      const auto b = faces_[f][(k + 1) % 3];
      uses[edge_key(a, b)].push_back({f, a < b});
    }
  }
  // Deterministic diagnostics: report the smallest offending edge.
  std::vector<std::uint64_t> keys;
  keys.reserve(uses.size());
  for (const auto& [key, list] : uses) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (const auto key : keys) {
    const auto& list = uses.at(key);
    const auto lo = static_cast<std::int32_t>(key >> 32);
    const auto hi = static_cast<std::int32_t>(key & 0xffffffffu);
    std::ostringstream msg;
    if (list.size() != 2) {
      msg << "surface is not closed: edge (" << lo << ", " << hi << ") is shared by "
          << list.size() << " face(s)";
      throw GeometryError(msg.str());
    }
    if (list[0].forward == list[1].forward) {
      msg << "inconsistent orientation: edge (" << lo << ", " << hi
          << ") is traversed in the same direction by faces " << list[0].face << " and "
          << list[1].face;
      throw GeometryError(msg.str());
    }
  }
}

Triangle TriMesh::triangle(std::size_t f) const {
  const auto& face = faces_[f];
  return {vertices_[face[0]], vertices_[face[1]], vertices_[face[2]]};
}

TriMesh TriMesh::scaled(double factor) const {
  std::vector<Vec3> v(vertices_.begin(), vertices_.end());
  for (auto& p : v) p *= factor;
  return TriMesh(std::move(v), faces_);
}

Vec3 area_vector_sum(const TriMesh& mesh) {
  Vec3 sum = Vec3::Zero();
  for (std::size_t f = 0; f < mesh.face_count(); ++f) sum += mesh.area(f) * mesh.normal(f);
  return sum;
}

}  // namespace potlab
