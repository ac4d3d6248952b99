#include <gtest/gtest.h>

#include "potlab/errors.hpp"
#include "potlab/oracle.hpp"
#include "reference.hpp"

using namespace potlab;

TEST(EllipsoidCapacity, SphereNormalization) {
  for (double r : {0.5, 1.0, 3.0}) {
    const auto v = oracle::ellipsoid_capacity(r, r, r);
    EXPECT_NEAR(v.value, r, 1e-10 * r);
    EXPECT_GT(v.error, 0.0);
    EXPECT_TRUE(std::isfinite(v.error));
  }
}

TEST(EllipsoidCapacity, ProlateCrossCheck) {
  for (double a = 1.1; a <= 5.0 + 1e-12; a += 0.3) {
    const double quad = oracle::ellipsoid_capacity(a, 1.0, 1.0).value;
    EXPECT_NEAR(quad, oracle::prolate_capacity(a, 1.0).value, 1e-8 * quad) << "a = " << a;
    EXPECT_NEAR(quad, ref::prolate_capacity(a, 1.0), 1e-8 * quad) << "a = " << a;
  }
}

TEST(EllipsoidCapacity, ReferenceValue) {
  const double v = oracle::ellipsoid_capacity(2.0, 1.0, 1.0).value;
  EXPECT_NEAR(v, 1.315, 1e-3);
  EXPECT_NEAR(v, ref::ellipsoid_capacity(2.0, 1.0, 1.0), 1e-10);
}

TEST(EllipsoidCapacity, TriaxialMatchesCarlson) {
  EXPECT_NEAR(oracle::ellipsoid_capacity(3.0, 2.0, 1.0).value, ref::ellipsoid_capacity(3.0, 2.0, 1.0), 1e-10);
}

TEST(EllipsoidCapacity, RejectsBadAxes) {
  EXPECT_THROW((void)oracle::ellipsoid_capacity(0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW((void)oracle::ellipsoid_capacity(-1.0, 1.0, 1.0), DomainError);
}

TEST(BallUp, ClosedForm) {
  EXPECT_NEAR(oracle::ball_Up(1.0, 3.0).value, ref::four_pi, 1e-14);
  EXPECT_NEAR(oracle::ball_Up(2.0, 0.0).value, ref::four_pi, 1e-14);
  EXPECT_NEAR(oracle::ball_Up(1.7, 1.0).value, ref::four_pi * 1.7, 1e-13);
}

TEST(EllipsoidMeanCurvature, SphereAnywhere) {
  for (const auto& x : ref::shell_points(Vec3::Zero(), 2.5, 2.5, 10, 5)) {
    EXPECT_NEAR(oracle::ellipsoid_mean_curvature(2.5, 2.5, 2.5, x).value, 2.0 / 2.5, 1e-12);
  }
}

TEST(EllipsoidMeanCurvature, EquatorAndPositivity) {
  EXPECT_NEAR(oracle::ellipsoid_mean_curvature(2.0, 1.0, 1.0, Vec3(0, 1, 0)).value, 1.25, 1e-12);
  const Vec3 axes(3.0, 2.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Vec3 x = ref::ellipsoid_point(axes, 0.1 * i + 0.02, 0.9 * i);
    const double h = oracle::ellipsoid_mean_curvature(3.0, 2.0, 1.0, x).value;
    EXPECT_GT(h, 0.0);
    EXPECT_NEAR(h, ref::ellipsoid_mean_curvature(axes, x), 1e-12);
  }
}

TEST(EllipsoidMeanCurvature, OffSurfaceRejected) {
  EXPECT_THROW((void)oracle::ellipsoid_mean_curvature(2.0, 1.0, 1.0, Vec3(2.1, 0, 0)), DomainError);
}

TEST(EllipsoidArea, SphereProlateAndQuadrature) {
  EXPECT_NEAR(oracle::ellipsoid_area(1.0, 1.0, 1.0).value, ref::four_pi, 1e-9);
  EXPECT_NEAR(oracle::ellipsoid_area(2.0, 1.0, 1.0).value, oracle::prolate_area(2.0, 1.0).value, 1e-8);
  EXPECT_NEAR(oracle::ellipsoid_area(3.0, 2.0, 1.0).value, ref::ellipsoid_area(Vec3(3, 2, 1)), 1e-8);
}

TEST(EllipsoidWillmore, SphereAndElongated) {
  EXPECT_NEAR(oracle::ellipsoid_willmore(1.0, 1.0, 1.0).value, ref::four_pi, 1e-9);
  const double expected = ref::ellipsoid_surface_integral(Vec3(2, 1, 1), [](const Vec3& x) {
    const double h = 0.5 * ref::ellipsoid_mean_curvature(Vec3(2, 1, 1), x);
    return h * h;
  });
  EXPECT_NEAR(oracle::ellipsoid_willmore(2.0, 1.0, 1.0).value, expected, 1e-7 * expected);
  EXPECT_GT(expected, ref::four_pi);
}
