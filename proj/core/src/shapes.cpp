#include "potlab/shapes.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "potlab/errors.hpp"

namespace potlab {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string("shape ") + what + " must be finite and positive");
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

AnalyticShape::AnalyticShape(Ball ball) : value_(ball) { check_positive(ball.radius, "radius"); }

AnalyticShape::AnalyticShape(Ellipsoid e) : value_(e) {
  check_positive(e.a, "semi-axis a");
  check_positive(e.b, "semi-axis b");
  check_positive(e.c, "semi-axis c");
  if (e.a < e.b || e.b < e.c) throw InputError("ellipsoid semi-axes must satisfy a >= b >= c");
}

Vec3 AnalyticShape::semi_axes() const {
  if (const auto* b = std::get_if<Ball>(&value_)) return Vec3::Constant(b->radius);
  const auto& e = std::get<Ellipsoid>(value_);
  return {e.a, e.b, e.c};
}

double AnalyticShape::implicit(const Vec3& x) const {
  return x.cwiseQuotient(semi_axes()).squaredNorm() - 1.0;
}

double AnalyticShape::surface_distance(const Vec3& x) const {
  const Vec3 axes = semi_axes();
  const Vec3 grad = 2.0 * x.cwiseQuotient(axes.cwiseProduct(axes));
  const double g = grad.norm();
  return g > 0.0 ? std::abs(implicit(x)) / g : axes.minCoeff();
}

Vec3 AnalyticShape::project(const Vec3& x) const {
  const double r = x.cwiseQuotient(semi_axes()).norm();
  if (!(r > 0.0)) throw DomainError("cannot project the shape center onto its surface");
  return x / r;
}

AnalyticShape AnalyticShape::scaled(double factor) const {
  const Vec3 axes = factor * semi_axes();
  if (is_ball()) return Ball{axes.x()};
  return Ellipsoid{axes.x(), axes.y(), axes.z()};
}

std::string AnalyticShape::id() const {
  const Vec3 axes = semi_axes();
  if (is_ball()) return "ball:" + format_number(axes.x());
  return "ellipsoid:" + format_number(axes.x()) + "," + format_number(axes.y()) + "," +
         format_number(axes.z());
}

AnalyticShape parse_shape(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InputError("shape '" + text + "' must look like ball:R or ellipsoid:a,b,c");
  }
  const std::string kind = text.substr(0, colon);
  std::vector<double> values;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("shape '" + text + "': '" + item + "' is not a number");
    }
  }
  if (kind == "ball" && values.size() == 1) return Ball{values[0]};
  if (kind == "ellipsoid" && values.size() == 3) return Ellipsoid{values[0], values[1], values[2]};
  throw InputError("shape '" + text + "' must look like ball:R or ellipsoid:a,b,c");
}

namespace {

constexpr int relaxation_sweeps = 50;

// Jacobi sweeps moving each vertex to the tangential part of its one-ring
// mean, re-projected onto the surface. Evens out the triangles of a
// stretched icosphere; without it the cotangent curvature estimate does not
// converge pointwise on elongated shapes.
void relax(const AnalyticShape& shape, const std::vector<Face>& faces, std::vector<Vec3>& vertices, int sweeps) {
  std::vector<std::vector<std::int32_t>> ring(vertices.size());
  for (const auto& f : faces) {
    for (int k = 0; k < 3; ++k) ring[f[k]].push_back(f[(k + 1) % 3]);
  }
  const Vec3 inv2 = shape.semi_axes().cwiseProduct(shape.semi_axes()).cwiseInverse();
  std::vector<Vec3> next(vertices.size());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      Vec3 mean = Vec3::Zero();
      for (const auto j : ring[i]) mean += vertices[j];
      mean /= static_cast<double>(ring[i].size());
      const Vec3 n = vertices[i].cwiseProduct(inv2).normalized();
      Vec3 step = mean - vertices[i];
      step -= step.dot(n) * n;
      next[i] = shape.project(vertices[i] + step);
    }
    vertices.swap(next);
  }
}

}  // namespace

TriMesh make_shape(const AnalyticShape& shape, int refinement) {
  if (refinement < 0 || refinement > max_refinement) {
    throw InputError("refinement " + std::to_string(refinement) + " outside [0, " +
                     std::to_string(max_refinement) + "]");
  }
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> vertices = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : vertices) v.normalize();
  std::vector<Face> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < refinement; ++level) {
    std::unordered_map<std::uint64_t, std::int32_t> midpoint;
    auto mid = [&](std::int32_t a, std::int32_t b) {
      const auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                       static_cast<std::uint64_t>(std::max(a, b));
      if (const auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      vertices.push_back((vertices[a] + vertices[b]).normalized());
      const auto idx = static_cast<std::int32_t>(vertices.size() - 1);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(faces.size() * 4);
    for (const auto& [a, b, c] : faces) {
      const auto ab = mid(a, b);
      const auto bc = mid(b, c);
      const auto ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  for (auto& v : vertices) v = shape.project(v);
  if (!shape.is_ball()) relax(shape, faces, vertices, relaxation_sweeps);
  return TriMesh(std::move(vertices), std::move(faces));
}

Body make_body(const AnalyticShape& shape, int refinement) {
  return Body{make_shape(shape, refinement), shape,
              shape.id() + "@" + std::to_string(refinement)};
}

Body load_body(const std::filesystem::path& path) {
  return Body{load_mesh(path), std::nullopt, path.filename().string()};
}

}  // namespace potlab
