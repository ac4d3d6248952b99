#include "potlab/levelset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "potlab/constants.hpp"
#include "potlab/errors.hpp"
#include "potlab/parallel.hpp"
#include "potlab/treecode.hpp"

namespace potlab {

namespace {

constexpr int kCoarseResolution = 32;

// Node values of u on a grid. Nodes inside the body get the interior value 1
// so that the body always lies in {u >= t}.
struct GridValues {
  GridSpec spec;
  int n = 0;  // nodes per axis
  Vec3 h = Vec3::Zero();
  std::vector<double> value;

  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * n + j) * n + i;
  }
  [[nodiscard]] Vec3 node(int i, int j, int k) const {
    return spec.lo + Vec3(i * h.x(), j * h.y(), k * h.z());
  }
};

double node_value(const PotentialField& field, const FarFieldTree& tree, const Vec3& x,
                  const Vec3& blo, const Vec3& bhi) {
  const bool maybe_inside = (x.array() >= blo.array()).all() && (x.array() <= bhi.array()).all();
  return maybe_inside && field.inside_body(x) ? 1.0 : tree.potential(x);
}

GridValues sample_grid(const PotentialField& field, const FarFieldTree& tree, const GridSpec& spec) {
  GridValues g;
  g.spec = spec;
  g.n = spec.resolution + 1;
  g.h = (spec.hi - spec.lo) / spec.resolution;
  g.value.assign(static_cast<std::size_t>(g.n) * g.n * g.n, 0.0);
  const Vec3 blo = field.mesh().bbox_min();
  const Vec3 bhi = field.mesh().bbox_max();
  parallel_for(static_cast<std::size_t>(g.n) * g.n, [&](std::size_t slab) {
    const int k = static_cast<int>(slab / g.n);
    const int j = static_cast<int>(slab % g.n);
    for (int i = 0; i < g.n; ++i) g.value[g.index(i, j, k)] = node_value(field, tree, g.node(i, j, k), blo, bhi);
  });
  return g;
}

// Exact node values only in blocks of kBlock^3 cells near the level; the
// rest are trilinear from the block corners, which only fixes their side.
constexpr int kBlock = 3;

GridValues sample_band(const PotentialField& field, const FarFieldTree& tree, const GridSpec& spec,
                       double t) {
  GridValues g;
  g.spec = spec;
  g.n = spec.resolution + 1;
  g.h = (spec.hi - spec.lo) / spec.resolution;
  const std::size_t total = static_cast<std::size_t>(g.n) * g.n * g.n;
  g.value.assign(total, std::numeric_limits<double>::quiet_NaN());
  const Vec3 blo = field.mesh().bbox_min();
  const Vec3 bhi = field.mesh().bbox_max();

  const int blocks = (spec.resolution + kBlock - 1) / kBlock;
  auto coarse_coord = [&](int b) { return std::min(b * kBlock, spec.resolution); };
  const int nb = blocks + 1;
  std::vector<double> corner(static_cast<std::size_t>(nb) * nb * nb);
  parallel_for(static_cast<std::size_t>(nb) * nb, [&](std::size_t slab) {
    const int bk = static_cast<int>(slab / nb);
    const int bj = static_cast<int>(slab % nb);
    for (int bi = 0; bi < nb; ++bi) {
      const Vec3 x = g.node(coarse_coord(bi), coarse_coord(bj), coarse_coord(bk));
      corner[(static_cast<std::size_t>(bk) * nb + bj) * nb + bi] = node_value(field, tree, x, blo, bhi);
    }
  });

  std::vector<std::array<int, 3>> active;
  for (int bk = 0; bk < blocks; ++bk) {
    for (int bj = 0; bj < blocks; ++bj) {
      for (int bi = 0; bi < blocks; ++bi) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int c = 0; c < 8; ++c) {
          const double v = corner[(static_cast<std::size_t>(bk + ((c >> 2) & 1)) * nb + bj + ((c >> 1) & 1)) * nb +
                                  bi + (c & 1)];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        const double slack = 0.25 * (hi - lo) + 1e-3 * t;
        if (lo - slack <= t && hi + slack >= t) active.push_back({bi, bj, bk});
      }
    }
  }

  // Exact values: every node of an active block. Each node is written by
  // whichever block reaches it; all writers compute the same value.
  parallel_for(active.size(), [&](std::size_t a) {
    const auto [bi, bj, bk] = active[a];
    for (int k = coarse_coord(bk); k <= coarse_coord(bk + 1); ++k) {
      for (int j = coarse_coord(bj); j <= coarse_coord(bj + 1); ++j) {
        for (int i = coarse_coord(bi); i <= coarse_coord(bi + 1); ++i) {
          double& slot = g.value[g.index(i, j, k)];
          if (std::isnan(slot)) slot = node_value(field, tree, g.node(i, j, k), blo, bhi);
        }
      }
    }
  });

  for (int k = 0; k < g.n; ++k) {
    const int bk = std::min(k / kBlock, blocks - 1);
    const double fk = double(k - coarse_coord(bk)) / (coarse_coord(bk + 1) - coarse_coord(bk));
    for (int j = 0; j < g.n; ++j) {
      const int bj = std::min(j / kBlock, blocks - 1);
      const double fj = double(j - coarse_coord(bj)) / (coarse_coord(bj + 1) - coarse_coord(bj));
      for (int i = 0; i < g.n; ++i) {
        double& slot = g.value[g.index(i, j, k)];
        if (!std::isnan(slot)) continue;
        const int bi = std::min(i / kBlock, blocks - 1);
        const double fi = double(i - coarse_coord(bi)) / (coarse_coord(bi + 1) - coarse_coord(bi));
        double v = 0.0;
        for (int c = 0; c < 8; ++c) {
          const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
          const double w = (di ? fi : 1.0 - fi) * (dj ? fj : 1.0 - fj) * (dk ? fk : 1.0 - fk);
          v += w * corner[(static_cast<std::size_t>(bk + dk) * nb + bj + dj) * nb + bi + di];
        }
        slot = v;
      }
    }
  }
  return g;
}

void require_clear_boundary(const GridValues& g, double t) {
  const int last = g.n - 1;
  for (int k = 0; k < g.n; ++k) {
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        const bool on_face = i == 0 || j == 0 || k == 0 || i == last || j == last || k == last;
        if (!on_face) continue;
        if (g.value[g.index(i, j, k)] >= t) {
          const Vec3& lo = g.spec.lo;
          const Vec3& hi = g.spec.hi;
          std::ostringstream msg;
          msg << "level surface u = " << t << " intersects the grid boundary of box [" << lo.x() << ", " << lo.y()
              << ", " << lo.z() << "] x [" << hi.x() << ", " << hi.y() << ", " << hi.z() << "] at resolution "
              << g.spec.resolution << "; enlarge the box";
          throw ComputationError(msg.str());
        }
      }
    }
  }
}

void validate_grid(const PotentialField& field, const GridSpec& spec) {
  if (spec.resolution < 16) throw InputError("grid resolution must be at least 16");
  const Vec3 blo = field.mesh().bbox_min();
  const Vec3 bhi = field.mesh().bbox_max();
  if (!((spec.lo.array() < blo.array()).all() && (spec.hi.array() > bhi.array()).all())) {
    throw InputError("grid box must strictly contain the body");
  }
}

// Tight box around {u >= t} found on a coarse pass over the containment box.
GridSpec tighten(const PotentialField& field, const GridValues& coarse, double t, int resolution) {
  Vec3 lo = field.mesh().bbox_min();
  Vec3 hi = field.mesh().bbox_max();
  for (int k = 0; k < coarse.n; ++k) {
    for (int j = 0; j < coarse.n; ++j) {
      for (int i = 0; i < coarse.n; ++i) {
        if (coarse.value[coarse.index(i, j, k)] < t) continue;
        const Vec3 x = coarse.node(i, j, k);
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
      }
    }
  }
  const Vec3 margin = 1.5 * coarse.h;
  GridSpec spec;
  spec.lo = (lo - margin).cwiseMax(coarse.spec.lo);
  spec.hi = (hi + margin).cwiseMin(coarse.spec.hi);
  spec.resolution = resolution;
  return spec;
}

// Marching cubes over the cells, resolving each cube by tracing the level
// curve on its six faces. Ambiguous faces are decided by the face-center
// average, which both neighbouring cubes compute identically, so the
// surface is watertight. Polygons are oriented with normals along -Du.
struct Contour {
  std::vector<Vec3> vertices;
  std::vector<std::pair<std::size_t, int>> vertex_edge;  // (node index, axis)
  std::vector<Face> faces;
};

Contour march(const GridValues& g, double t) {
  Contour out;
  std::unordered_map<std::uint64_t, int> edge_vertex;
  const int cells = g.spec.resolution;

  // Cube corner c has offsets (c & 1, (c >> 1) & 1, (c >> 2) & 1).
  auto corner_offset = [](int c, int axis) { return (c >> axis) & 1; };

  std::array<std::array<int, 4>, 6> face_corners{};
  for (int a = 0; a < 3; ++a) {
    const int u = (a + 1) % 3, v = (a + 2) % 3;
    const std::array<std::pair<int, int>, 4> uv = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    for (int s = 0; s < 2; ++s) {
      std::array<int, 4> corners{};
      for (int m = 0; m < 4; ++m) {
        corners[m] = (s << a) | (uv[m].first << u) | (uv[m].second << v);
      }
      if (s == 0) std::reverse(corners.begin(), corners.end());
      face_corners[2 * a + s] = corners;
    }
  }

  std::array<double, 8> val{};
  std::array<std::size_t, 8> idx{};
  for (int k = 0; k < cells; ++k) {
    for (int j = 0; j < cells; ++j) {
      for (int i = 0; i < cells; ++i) {
        int high = 0;
        for (int c = 0; c < 8; ++c) {
          idx[c] = g.index(i + corner_offset(c, 0), j + corner_offset(c, 1), k + corner_offset(c, 2));
          val[c] = g.value[idx[c]];
          high += val[c] > t ? 1 : 0;
        }
        if (high == 0 || high == 8) continue;

        auto vertex_on = [&](int c0, int c1) {
          if (idx[c0] > idx[c1]) std::swap(c0, c1);
          const int axis = (c0 ^ c1) == 1 ? 0 : ((c0 ^ c1) == 2 ? 1 : 2);
          const std::uint64_t key = static_cast<std::uint64_t>(idx[c0]) * 3 + axis;
          auto [it, inserted] = edge_vertex.try_emplace(key, static_cast<int>(out.vertices.size()));
          if (inserted) {
            const double w = (t - val[c0]) / (val[c1] - val[c0]);
            const Vec3 p0 = g.node(i + corner_offset(c0, 0), j + corner_offset(c0, 1), k + corner_offset(c0, 2));
            const Vec3 p1 = g.node(i + corner_offset(c1, 0), j + corner_offset(c1, 1), k + corner_offset(c1, 2));
            out.vertices.push_back(p0 + w * (p1 - p0));
            out.vertex_edge.emplace_back(idx[c0], axis);
          }
          return it->second;
        };

        // next[v] = successor of vertex v along the oriented cube contour.
        std::array<std::pair<int, int>, 12> segments{};
        int nseg = 0;
        for (const auto& fc : face_corners) {
          std::array<int, 4> cross_vertex{};
          std::array<bool, 4> entering{};
          std::array<int, 4> crossing_edge{};
          int ncross = 0;
          for (int m = 0; m < 4; ++m) {
            const int a = fc[m], b = fc[(m + 1) % 4];
            const bool ha = val[a] > t, hb = val[b] > t;
            if (ha == hb) continue;
            cross_vertex[ncross] = vertex_on(a, b);
            entering[ncross] = hb;
            crossing_edge[ncross] = m;
            ++ncross;
          }
          if (ncross == 0) continue;
          // Segments run from a leaving crossing to an entering one, with
          // the high region on the left seen from outside the cube.
          if (ncross == 2) {
            const int leave = entering[0] ? 1 : 0;
            segments[nseg++] = {cross_vertex[leave], cross_vertex[1 - leave]};
            continue;
          }
          const double center = 0.25 * (val[fc[0]] + val[fc[1]] + val[fc[2]] + val[fc[3]]);
          const bool joined = center > t;
          (void)crossing_edge;
          for (int m = 0; m < 4; ++m) {
            if (entering[m]) continue;
            // Separated high corners: close back to the entering point just
            // before; joined: continue to the next entering point.
            const int partner = joined ? (m + 1) % 4 : (m + 3) % 4;
            segments[nseg++] = {cross_vertex[m], cross_vertex[partner]};
          }
        }

        // Chain segments into loops.
        std::array<bool, 12> used{};
        for (int s = 0; s < nseg; ++s) {
          if (used[s]) continue;
          std::vector<int> loop;
          int cur = s;
          while (!used[cur]) {
            used[cur] = true;
            loop.push_back(segments[cur].first);
            const int want = segments[cur].second;
            int found = -1;
            for (int r = 0; r < nseg; ++r) {
              if (!used[r] && segments[r].first == want) {
                found = r;
                break;
              }
            }
            if (found < 0) break;
            cur = found;
          }
          if (loop.size() < 3) continue;
          // Loops circle the high side counter-clockwise; reverse for -Du.
          for (std::size_t m = 1; m + 1 < loop.size(); ++m) {
            out.faces.push_back({loop[0], loop[m + 1], loop[m]});
          }
        }
      }
    }
  }
  return out;
}

struct NewtonSettings {
  double t;
  double tolerance;
  int max_iterations;
  double max_step;
};

struct Projected {
  Vec3 x;
  KernelSum sum;
  bool has_hessian = false;
};

// Newton on 1/u, which is close to linear in the distance for u ~ Cap/|x|;
// the step is the plain Newton step on u scaled by u/t. With want_hessian
// the evaluation expected to converge is done at Hessian order and reused.
Projected project(const PotentialField& field, Vec3 x, const NewtonSettings& s, bool want_hessian) {
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < s.max_iterations; ++it) {
    const bool hessian = want_hessian && last <= 1e-6 * s.t;
    const KernelSum k = field.evaluate(x, hessian ? Derivatives::hessian : Derivatives::gradient);
    const double r = k.u - s.t;
    const double g2 = k.grad.squaredNorm();
    if (std::abs(r) <= s.tolerance * s.t || !(g2 > 0.0) || !std::isfinite(k.u)) {
      if (hessian || !want_hessian) return {x, k, hessian};
      return {x, field.evaluate(x, Derivatives::hessian), true};
    }
    last = std::abs(r);
    Vec3 step = -(k.u / s.t) * r * k.grad / g2;
    const double len = step.norm();
    if (len > s.max_step) step *= s.max_step / len;
    Vec3 next = x + step;
    for (int back = 0; back < 30 && field.inside_body(next); ++back) {
      step *= 0.5;
      next = x + step;
    }
    x = next;
  }
  return {x, field.evaluate(x, want_hessian ? Derivatives::hessian : Derivatives::gradient), want_hessian};
}

void finish(LevelSurface& level) {
  level.total_area = 0.0;
  double skipped = 0.0;
  for (std::size_t f = 0; f < level.size(); ++f) {
    level.total_area += level.areas[f];
    if (!level.samples[f].curvature_defined) skipped += level.areas[f];
  }
  level.skipped_fraction = level.total_area > 0.0 ? skipped / level.total_area : 0.0;
}

}  // namespace

Vec3 LevelSurface::closure_defect() const {
  Vec3 sum = Vec3::Zero();
  for (const auto& f : faces) {
    sum += 0.5 * (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
  }
  return sum;
}

GridSpec auto_grid(const PotentialField& field, double t, int resolution) {
  const double half = std::max(2.0 * field.mesh().diameter(), 3.0 * field.cap() / t);
  const Vec3 c = field.mesh().center();
  GridSpec spec;
  spec.lo = c.array() - half;
  spec.hi = c.array() + half;
  spec.resolution = resolution;
  return spec;
}

LevelSurface extract_level(const PotentialField& field, double t, const LevelOptions& options) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("extract_level needs 0 < t < 1; the t = 1 level is the body surface");
  }
  const FarFieldTree tree(field);
  GridSpec spec;
  if (options.grid) {
    spec = *options.grid;
    validate_grid(field, spec);
  } else {
    if (options.resolution < 16) throw InputError("grid resolution must be at least 16");
    GridSpec outer = auto_grid(field, t, kCoarseResolution);
    const GridValues coarse = sample_grid(field, tree, outer);
    require_clear_boundary(coarse, t);
    spec = tighten(field, coarse, t, options.resolution);
  }
  const GridValues grid = sample_band(field, tree, spec, t);
  require_clear_boundary(grid, t);

  Contour contour = march(grid, t);
  if (contour.faces.empty()) {
    std::ostringstream msg;
    msg << "empty extraction for level u = " << t;
    throw ComputationError(msg.str());
  }

  const NewtonSettings newton{t, options.newton_tolerance, options.newton_max_iterations,
                              grid.h.maxCoeff()};
  // A linearly interpolated vertex can land inside the body when the cell
  // straddles it; such vertices restart from the exterior (low) node.
  parallel_for(contour.vertices.size(), [&](std::size_t v) {
    Vec3 start = contour.vertices[v];
    if (field.inside_body(start)) {
      const auto [node, axis] = contour.vertex_edge[v];
      const std::size_t other = node + (axis == 0 ? 1 : axis == 1 ? grid.n : std::size_t(grid.n) * grid.n);
      const std::size_t low = grid.value[node] < t ? node : other;
      const int i = static_cast<int>(low % grid.n);
      const int j = static_cast<int>((low / grid.n) % grid.n);
      const int k = static_cast<int>(low / (std::size_t(grid.n) * grid.n));
      start = grid.node(i, j, k);
    }
    contour.vertices[v] = project(field, start, newton, false).x;
  });

  LevelSurface level;
  level.t = t;
  level.vertices = std::move(contour.vertices);
  // Drop slivers created where the level passes through grid nodes.
  const double min_area = 1e-14 * grid.h.squaredNorm();
  for (const auto& f : contour.faces) {
    const Vec3& a = level.vertices[f[0]];
    const Vec3 cr = (level.vertices[f[1]] - a).cross(level.vertices[f[2]] - a);
    if (0.5 * cr.norm() > min_area) level.faces.push_back(f);
  }
  level.areas.resize(level.faces.size());
  level.samples.resize(level.faces.size());
  parallel_for(level.faces.size(), [&](std::size_t f) {
    const Triangle tri = level.triangle(f);
    level.areas[f] = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
    // Near the body the flat centroid can fall inside it; push it out
    // along the face normal, which points to decreasing u.
    Vec3 c = (tri[0] + tri[1] + tri[2]) / 3.0;
    const Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
    const double reach = std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});
    for (int k = 1; k <= 8 && field.inside_body(c); ++k) c += 0.125 * reach * n;
    const Projected pr = project(field, c, newton, true);
    level.samples[f] = pr.has_hessian ? sample_field(field, pr.x, pr.sum) : sample_field(field, pr.x);
  });
  finish(level);
  return level;
}

LevelSurface boundary_level(const PotentialField& field, std::span<const double> face_curvature,
                            BoundaryGradient policy) {
  const TriMesh& mesh = field.mesh();
  if (face_curvature.size() != mesh.face_count()) {
    throw InputError("boundary curvature must have one value per face");
  }
  LevelSurface level;
  level.t = 1.0;
  level.on_body = true;
  level.vertices.assign(mesh.vertices().begin(), mesh.vertices().end());
  level.faces.assign(mesh.faces().begin(), mesh.faces().end());
  level.areas.resize(mesh.face_count());
  level.samples.resize(mesh.face_count());
  const auto& sigma = field.density().sigma;
  parallel_for(mesh.face_count(), [&](std::size_t f) {
    const Vec3& n = mesh.normal(f);
    const Vec3 off = mesh.centroid(f) + 0.5 * mesh.diameter(f) * n;
    const KernelSum k = field.evaluate(off, Derivatives::hessian);
    const double speed = policy == BoundaryGradient::jump ? sigma[f] : k.grad.norm();
    // Du is normal to the boundary level; the Hessian is the one-sided
    // offset value and is carried for diagnostics only.
    FieldSample s = make_sample(mesh.centroid(f), 1.0, -speed * n, k.hess, field.grad_cutoff());
    if (s.curvature_defined) {
      s.H = face_curvature[f];
      s.H_conf = s.H - dim::conformal_exponent * s.speed;
    }
    level.areas[f] = mesh.area(f);
    level.samples[f] = s;
  });
  finish(level);
  return level;
}

double surface_integral(const LevelSurface& level, const Integrand& integrand) {
  if (level.size() == 0) throw ComputationError("surface integral over an empty level");
  double sum = 0.0;
  for (std::size_t f = 0; f < level.size(); ++f) {
    const FieldSample& s = level.samples[f];
    double v = 0.0;
    if (!integrand.needs_curvature || s.curvature_defined) {
      v = integrand.value(s);
    } else if (integrand.surrogate) {
      v = integrand.surrogate(s);
    } else {
      continue;
    }
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite integrand on triangle " << f << " of level t = " << level.t;
      throw ComputationError(msg.str());
    }
    sum += v * level.areas[f];
  }
  return sum;
}

double capacity_flux(const LevelSurface& level) {
  const double flux = surface_integral(level, Integrand{[](const FieldSample& s) { return s.speed; }, {}, false});
  return flux / (dim::n_minus_2 * dim::sphere_area);
}

void save_level_off(const LevelSurface& level, const std::filesystem::path& path) {
  save_off(path, level.vertices, level.faces);
}

}  // namespace potlab
