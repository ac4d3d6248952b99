#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "fixtures.hpp"
#include "potlab/errors.hpp"
#include "potlab/levelset.hpp"
#include "reference.hpp"

using namespace potlab;

namespace {

constexpr double pi = std::numbers::pi;

const Integrand one{[](const FieldSample&) { return 1.0; }, {}, false};
const Integrand speed{[](const FieldSample& s) { return s.speed; }, {}, false};

// Extractions are the expensive part; share them between tests.
const LevelSurface& level(const fixtures::Solved& solved, double t, int resolution = 96) {
  static std::map<std::tuple<const void*, double, int>, LevelSurface> cache;
  auto key = std::make_tuple(static_cast<const void*>(&solved), t, resolution);
  auto it = cache.find(key);
  if (it == cache.end()) {
    LevelOptions options;
    options.resolution = resolution;
    it = cache.emplace(key, extract_level(solved.field, t, options)).first;
  }
  return it->second;
}

void expect_well_formed(const LevelSurface& l) {
  ASSERT_GT(l.size(), 0u);
  EXPECT_LE(l.closure_defect().norm(), 1e-6 * l.total_area);
  EXPECT_EQ(l.skipped_fraction, 0.0);
  for (std::size_t f = 0; f < l.size(); ++f) {
    ASSERT_GT(l.areas[f], 0.0);
    ASSERT_LE(std::abs(l.samples[f].u - l.t), 1e-4) << "face " << f;
  }
}

}  // namespace

TEST(ExtractLevel, BallHalfIsRadiusTwoSphere) {
  const auto& l = level(fixtures::ball(4), 0.5);
  expect_well_formed(l);
  EXPECT_NEAR(l.total_area, 16.0 * pi, 0.01 * 16.0 * pi);
  EXPECT_NEAR(surface_integral(l, one), 16.0 * pi, 0.01 * 16.0 * pi);
  for (const Vec3& v : l.vertices) EXPECT_NEAR(v.norm(), 2.0, 0.01);
}

TEST(ExtractLevel, BallTenthIsRadiusTen) {
  const auto& s = fixtures::ball(4);
  const auto& l = level(s, 0.1);
  expect_well_formed(l);
  for (const Vec3& v : l.vertices) EXPECT_NEAR(v.norm(), 10.0, 0.1);
  const GridSpec box = auto_grid(s.field, 0.1);
  EXPECT_GE(-box.lo.maxCoeff(), 10.0 * 1.5);
  EXPECT_GE(box.hi.minCoeff(), 10.0 * 1.5);
  EXPECT_EQ(box.resolution, 96);
}

TEST(ExtractLevel, EllipsoidNearBoundaryHugsBody) {
  const auto& s = fixtures::ellipsoid(3);
  const auto& l = level(s, 0.999, 48);
  EXPECT_LE(l.closure_defect().norm(), 1e-6 * l.total_area);
  EXPECT_NEAR(l.total_area, s.body.mesh.total_area(), 0.02 * s.body.mesh.total_area());
}

TEST(ExtractLevel, WellFormedOnEllipsoid) {
  for (const double t : {0.2, 0.5, 0.9}) {
    SCOPED_TRACE(t);
    expect_well_formed(level(fixtures::ellipsoid(3), t));
  }
}

TEST(ExtractLevel, VerticesProjectedOntoLevel) {
  const auto& s = fixtures::ellipsoid(3);
  const auto& l = level(s, 0.5);
  for (std::size_t v = 0; v < l.vertices.size(); v += 17) {
    EXPECT_NEAR(s.field.evaluate(l.vertices[v], Derivatives::value).u, 0.5, 1e-10);
  }
}

TEST(ExtractLevel, OrientedAlongDecreasingPotential) {
  const auto& l = level(fixtures::ellipsoid(3), 0.5);
  for (std::size_t f = 0; f < l.size(); f += 7) {
    const Triangle tri = l.triangle(f);
    const Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
    EXPECT_LT(n.dot(l.samples[f].grad), 0.0);
  }
}

TEST(ExtractLevel, ResolutionDoublingWithinTolerance) {
  const auto& s = fixtures::ellipsoid(3);
  const double coarse = surface_integral(level(s, 0.5, 48), speed);
  const double fine = surface_integral(level(s, 0.5, 96), speed);
  EXPECT_NEAR(coarse, fine, 0.01 * fine);
  EXPECT_NEAR(level(s, 0.5, 48).total_area, level(s, 0.5, 96).total_area, 0.01 * level(s, 0.5, 96).total_area);
}

TEST(ExtractLevel, RejectsLevelsOutsideOpenInterval) {
  const auto& f = fixtures::ball(3).field;
  for (const double t : {0.0, 1.0, -0.5, 1.5}) EXPECT_THROW((void)extract_level(f, t), DomainError);
}

TEST(ExtractLevel, GridValidation) {
  const auto& f = fixtures::ball(3).field;
  LevelOptions options;
  options.grid = GridSpec{Vec3::Constant(-3), Vec3::Constant(3), 8};
  EXPECT_THROW((void)extract_level(f, 0.5, options), InputError);
  options.grid = GridSpec{Vec3::Constant(-0.5), Vec3::Constant(3), 32};
  EXPECT_THROW((void)extract_level(f, 0.5, options), InputError);
  options.grid.reset();
  options.resolution = 4;
  EXPECT_THROW((void)extract_level(f, 0.5, options), InputError);
}

TEST(ExtractLevel, BoxTooSmallIsComputationError) {
  const auto& f = fixtures::ball(3).field;
  LevelOptions options;
  options.grid = GridSpec{Vec3::Constant(-1.5), Vec3::Constant(1.5), 32};
  try {
    (void)extract_level(f, 0.5, options);
    FAIL() << "expected ComputationError";
  } catch (const ComputationError& e) {
    EXPECT_NE(std::string(e.what()).find("grid boundary"), std::string::npos);
  }
}

TEST(ExtractLevel, ExplicitGridMatchesAutoGrid) {
  const auto& s = fixtures::ball(3);
  LevelOptions options;
  options.grid = GridSpec{Vec3::Constant(-2.5), Vec3::Constant(2.5), 64};
  const LevelSurface l = extract_level(s.field, 0.5, options);
  expect_well_formed(l);
  EXPECT_NEAR(capacity_flux(l), s.field.cap(), 0.01 * s.field.cap());
}

TEST(SurfaceIntegral, SpeedIsLevelIndependent) {
  const auto& s = fixtures::ellipsoid(3);
  const double a = surface_integral(level(s, 0.2), speed);
  const double b = surface_integral(level(s, 0.9), speed);
  EXPECT_NEAR(a, b, 0.01 * b);
  EXPECT_NEAR(a, 4.0 * pi * s.field.cap(), 0.01 * a);
}

TEST(SurfaceIntegral, ConstantPowerOfPotential) {
  const auto& l = level(fixtures::ellipsoid(3), 0.5);
  const Integrand u2{[](const FieldSample& x) { return x.u * x.u; }, {}, false};
  EXPECT_NEAR(surface_integral(l, u2), 0.25 * l.total_area, 1e-4 * l.total_area);
}

TEST(SurfaceIntegral, NonFiniteNamesTriangle) {
  const auto& l = level(fixtures::ball(3), 0.5);
  const Integrand bad{[](const FieldSample&) { return std::nan(""); }, {}, false};
  try {
    (void)surface_integral(l, bad);
    FAIL() << "expected ComputationError";
  } catch (const ComputationError& e) {
    EXPECT_NE(std::string(e.what()).find("triangle 0"), std::string::npos);
  }
}

TEST(SurfaceIntegral, EmptyLevelRejected) {
  EXPECT_THROW((void)surface_integral(LevelSurface{}, one), ComputationError);
}

TEST(SurfaceIntegral, SmallGradientPolicy) {
  PotentialField f(fixtures::ball(3).field.density());
  f.set_grad_cutoff(1e6);
  const LevelSurface l = extract_level(f, 0.5);
  EXPECT_EQ(l.skipped_fraction, 1.0);
  const Integrand curvature{[](const FieldSample& s) { return s.H; }, {}, true};
  EXPECT_EQ(surface_integral(l, curvature), 0.0);
  const Integrand with_surrogate{[](const FieldSample& s) { return s.H; },
                                 [](const FieldSample& s) { return s.hess_along_grad(); }, true};
  EXPECT_GT(surface_integral(l, with_surrogate), 0.0);
}

TEST(CapacityFlux, AgreesWithTotalCharge) {
  for (const auto* s : {&fixtures::ball(4), &fixtures::ellipsoid(3)}) {
    EXPECT_NEAR(capacity_flux(level(*s, 0.5)), s->field.cap(), 0.01 * s->field.cap());
  }
}

TEST(BoundaryLevel, UsesMeshAndJumpTrace) {
  const auto& s = fixtures::ellipsoid(3);
  const LevelSurface b = boundary_level(s.field, s.face_H);
  EXPECT_TRUE(b.on_body);
  EXPECT_EQ(b.t, 1.0);
  EXPECT_EQ(b.size(), s.body.mesh.face_count());
  EXPECT_NEAR(b.total_area, s.body.mesh.total_area(), 1e-12 * b.total_area);
  for (std::size_t f = 0; f < b.size(); ++f) {
    EXPECT_DOUBLE_EQ(b.samples[f].speed, s.field.density().sigma[f]);
    EXPECT_DOUBLE_EQ(b.samples[f].H, s.face_H[f]);
  }
  EXPECT_NEAR(capacity_flux(b), s.field.cap(), 1e-12 * s.field.cap());
}

TEST(BoundaryLevel, OffsetPolicyCloseToJump) {
  const auto& s = fixtures::ball(3);
  const LevelSurface jump = boundary_level(s.field, s.face_H, BoundaryGradient::jump);
  const LevelSurface offset = boundary_level(s.field, s.face_H, BoundaryGradient::offset);
  for (std::size_t f = 0; f < jump.size(); ++f) {
    EXPECT_LT(offset.samples[f].speed, jump.samples[f].speed);
    EXPECT_GT(offset.samples[f].speed, 0.8 * jump.samples[f].speed);
  }
}

TEST(BoundaryLevel, CurvatureLengthChecked) {
  const auto& s = fixtures::ball(3);
  const std::vector<double> wrong(3, 1.0);
  EXPECT_THROW((void)boundary_level(s.field, wrong), InputError);
}

TEST(SaveLevelOff, RoundTrip) {
  const auto& l = level(fixtures::ball(3), 0.5);
  const auto path = std::filesystem::temp_directory_path() / "potlab_level_roundtrip.off";
  save_level_off(l, path);
  const TriMesh back = load_mesh(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.face_count(), l.size());
  EXPECT_NEAR(back.total_area(), l.total_area, 1e-12 * l.total_area);
  EXPECT_FALSE(back.orientation_repaired());
}
