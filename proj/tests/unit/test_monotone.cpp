#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fixtures.hpp"
#include "potlab/errors.hpp"
#include "potlab/monotone.hpp"
#include "reference.hpp"

using namespace potlab;

namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

const LevelSurface& level(const fixtures::Solved& solved, double t) {
  static std::map<std::pair<const void*, double>, LevelSurface> cache;
  const auto key = std::make_pair(static_cast<const void*>(&solved), t);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, t == 1.0 ? boundary_level(solved.field, solved.face_H) : extract_level(solved.field, t)).first;
  }
  return it->second;
}

ProfileOptions with_boundary(const fixtures::Solved& solved) {
  ProfileOptions options;
  options.boundary_curvature = solved.face_H;
  return options;
}

}  // namespace

TEST(ComputeUp, BallIsConstant) {
  const auto& s = fixtures::ball(4);
  for (const double t : {0.2, 0.5, 1.0}) {
    for (const double p : {0.0, 1.5, 3.0}) {
      EXPECT_NEAR(compute_Up(s.field, level(s, t), p), four_pi, 0.02 * four_pi) << "t=" << t << " p=" << p;
    }
  }
}

TEST(ComputeUp, ZeroPowerIsScaledArea) {
  const auto& s = fixtures::ball(4);
  const auto& l = level(s, 0.5);
  const double expected = std::pow(s.field.cap() / 0.5, -2.0) * l.total_area;
  EXPECT_NEAR(compute_Up(s.field, l, 0.0), expected, 1e-12 * expected);
  EXPECT_NEAR(compute_Up(s.field, l, 0.0), four_pi, 0.01 * four_pi);
}

TEST(ComputeUp, FirstPowerIsCapacityFlux) {
  for (const auto* s : {&fixtures::ball(4), &fixtures::ellipsoid(3)}) {
    const double expected = four_pi * s->field.cap();
    for (const double t : {0.2, 0.5, 0.9}) {
      EXPECT_NEAR(compute_Up(s->field, level(*s, t), 1.0), expected, 0.01 * expected);
    }
  }
}

TEST(ComputeUp, NegativePowerRejected) {
  EXPECT_THROW((void)compute_Up(fixtures::ball(4).field, level(fixtures::ball(4), 0.5), -1.0), DomainError);
}

TEST(ComputeUpPrime, BallVanishesRelativeToScale) {
  const auto& s = fixtures::ball(4);
  for (const double t : {0.2, 0.5, 1.0}) {
    for (const double p : {1.5, 2.0, 3.0, 5.0}) {
      const double d = compute_Up_prime(s.field, level(s, t), p);
      const double scale = Up_prime_scale(s.field, level(s, t), p);
      EXPECT_GT(scale, 0.0);
      EXPECT_LE(std::abs(d), 0.02 * scale) << "t=" << t << " p=" << p;
    }
  }
}

TEST(ComputeUpPrime, EllipsoidNonnegative) {
  const auto& s = fixtures::ellipsoid(3);
  for (const double t : {0.2, 0.5, 0.9}) {
    const double d = compute_Up_prime(s.field, level(s, t), 3.0);
    EXPECT_GE(d, -0.01 * Up_prime_scale(s.field, level(s, t), 3.0)) << "t=" << t;
  }
}

TEST(ComputeUpPrime, BelowDerivativeRangeRejected) {
  const auto& s = fixtures::ball(4);
  try {
    (void)compute_Up_prime(s.field, level(s, 0.5), 1.2);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("1.5"), std::string::npos);
  }
  EXPECT_THROW((void)compute_Phi_prime(level(s, 0.5), 1.0), DomainError);
  EXPECT_NO_THROW((void)compute_Up_prime(s.field, level(s, 0.5), 1.5));
}

TEST(ComputePhi, BallClosedForm) {
  const auto& s = fixtures::ball(4);
  for (const double t : {0.2, 0.5, 0.9}) {
    for (const double p : {0.0, 1.0, 2.0, 3.0}) {
      // 4 pi R^{2-p} with R = 1.
      EXPECT_NEAR(compute_Phi(level(s, t), p), four_pi, 0.02 * four_pi) << "t=" << t << " p=" << p;
    }
  }
}

TEST(ComputePhi, FirstPowerConstant) {
  const auto& s = fixtures::ellipsoid(3);
  const double a = compute_Phi(level(s, 0.2), 1.0);
  const double b = compute_Phi(level(s, 0.9), 1.0);
  EXPECT_NEAR(a, b, 0.01 * b);
}

TEST(Bridge, PotentialAndConformalFormsAgree) {
  const auto& s = fixtures::ellipsoid(3);
  const double cap = s.field.cap();
  for (const double t : {0.2, 0.5, 0.9}) {
    for (const double p : {0.0, 1.0, 1.5, 3.0, 5.0}) {
      const double u = compute_Up(s.field, level(s, t), p);
      const double phi = std::pow(cap, 2.0 * (p - 1.0)) * compute_Phi(level(s, t), p);
      EXPECT_NEAR(u, phi, 1e-9 * u) << "t=" << t << " p=" << p;
    }
  }
}

TEST(Bridge, DerivativesAgreeRelativeToScale) {
  const auto& s = fixtures::ellipsoid(3);
  const double cap = s.field.cap();
  for (const double t : {0.2, 0.5, 0.9}) {
    for (const double p : {1.5, 2.0, 3.0, 5.0}) {
      const auto& l = level(s, t);
      const double conv = std::pow(cap, -2.0 * (p - 1.0));
      const double expected = -t * compute_Up_prime(s.field, l, p) * conv;
      const double scale = t * Up_prime_scale(s.field, l, p) * conv;
      const double phi_prime = compute_Phi_prime(l, p);
      EXPECT_NEAR(phi_prime, expected, 1e-9 * scale) << "t=" << t << " p=" << p;
      EXPECT_LE(phi_prime, 0.01 * scale);
    }
  }
}

TEST(UpLimit, ClosedForm) {
  EXPECT_DOUBLE_EQ(Up_limit(1.0, 3.0), four_pi);
  EXPECT_NEAR(Up_limit(2.0, 3.0), 8.0 * four_pi, 1e-12);
  EXPECT_NEAR(Up_limit(1.3, 0.0), four_pi, 1e-12);
}

TEST(UpLimit, ApproachedFromAboveOnEllipsoid) {
  const auto& s = fixtures::ellipsoid(3);
  for (const double p : {3.0, 5.0}) {
    const double lim = Up_limit(s.field.cap(), p);
    const double u20 = compute_Up(s.field, level(s, 0.2), p);
    const double u10 = compute_Up(s.field, level(s, 0.1), p);
    const double u05 = compute_Up(s.field, level(s, 0.05), p);
    EXPECT_GE(u20, u10);
    EXPECT_GE(u10, u05);
    EXPECT_NEAR(u05, lim, 1e-3 * lim);
  }
}

TEST(BuildProfile, BallWithBoundary) {
  const auto& s = fixtures::ball(4);
  const std::vector<double> grid{0.2, 0.4, 0.6, 0.8, 1.0};
  const MonotoneProfile prof = build_profile(s.field, 2.0, grid, with_boundary(s));
  EXPECT_EQ(prof.t, grid);
  EXPECT_NEAR(prof.limit, four_pi * std::pow(s.field.cap(), 2.0), 1e-12);
  EXPECT_NEAR(prof.limit, four_pi, 0.01 * four_pi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(prof.U[i], four_pi, 0.02 * four_pi);
    EXPECT_LE(std::abs(prof.U_prime[i]), 0.02 * prof.U_prime_scale[i]);
    EXPECT_NEAR(prof.s[i], -std::log(grid[i]), 1e-15);
    EXPECT_EQ(prof.skipped_fraction[i], 0.0);
  }
  EXPECT_GE(prof.min_U_prime_relative, -0.01);
  EXPECT_TRUE(prof.monotone);
  EXPECT_TRUE(prof.above_limit);
  EXPECT_TRUE(prof.derivative_certified);
}

TEST(BuildProfile, EllipsoidMonotoneAndConsistentWithDifferences) {
  const auto& s = fixtures::ellipsoid(3);
  const std::vector<double> grid{0.3, 0.4, 0.5, 0.6, 0.7};
  for (const auto& prof : build_profiles(s.field, {1.5, 3.0, 5.0}, grid)) {
    SCOPED_TRACE(prof.p);
    EXPECT_TRUE(prof.monotone);
    EXPECT_TRUE(prof.above_limit);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(prof.U[i], prof.limit * 0.98);
      EXPECT_GT(prof.Phi[i], 0.0);
      if (i > 0) {
        EXPECT_GE(prof.U[i], prof.U[i - 1] * (1.0 - 1e-3));
      }
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double bound = 0.05 * std::max(std::abs(prof.U_prime[i]), prof.U_prime_scale[i]);
      EXPECT_NEAR(prof.U_prime[i], prof.U_prime_fd[i], bound) << "t=" << grid[i];
      EXPECT_NEAR(prof.U_prime_fd[i], ref::central_difference(prof.t, prof.U, i), 1e-9 * prof.U_prime_scale[i]);
    }
  }
}

TEST(BuildProfile, FirstPowerHasZeroDerivative) {
  const auto& s = fixtures::ball(3);
  ProfileOptions coarse;
  coarse.level.resolution = 48;
  const MonotoneProfile prof = build_profile(s.field, 1.0, {0.3, 0.4, 0.5, 0.6, 0.7}, coarse);
  for (const double d : prof.U_prime) EXPECT_EQ(d, 0.0);
  EXPECT_FALSE(prof.derivative_certified);
  EXPECT_TRUE(std::isnan(prof.Phi_prime[0]));
}

TEST(BuildProfile, GridValidation) {
  const auto& f = fixtures::ball(3).field;
  EXPECT_THROW((void)build_profile(f, 2.0, {0.2, 0.4, 0.6, 0.8}), InputError);
  EXPECT_THROW((void)build_profile(f, 2.0, {0.2, 0.4, 0.4, 0.6, 0.8}), InputError);
  EXPECT_THROW((void)build_profile(f, 2.0, {0.0, 0.2, 0.4, 0.6, 0.8}), InputError);
  EXPECT_THROW((void)build_profile(f, 2.0, {0.2, 0.4, 0.6, 0.8, 1.2}), InputError);
  EXPECT_THROW((void)build_profile(f, 2.0, {0.2, 0.4, 0.6, 0.8, 1.0}), InputError);
  EXPECT_THROW((void)build_profile(f, -1.0, {0.2, 0.4, 0.6, 0.8, 0.9}), DomainError);
}

TEST(DefaultGrid, Values) {
  const std::vector<double> expected{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  EXPECT_EQ(default_t_grid(), expected);
}

TEST(FiniteDifference, ExactOnQuadratics) {
  const std::vector<double> x{0.1, 0.25, 0.3, 0.55, 0.9, 0.99, 1.0};
  std::vector<double> y;
  for (const double v : x) y.push_back(3.0 * v * v - 2.0 * v + 0.5);
  const auto d = finite_difference(x, y);
  ASSERT_EQ(d.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(d[i], 6.0 * x[i] - 2.0, 1e-10) << i;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) EXPECT_NEAR(d[i], ref::central_difference(x, y, i), 1e-10);
}

TEST(FiniteDifference, TooFewPointsIsNan) {
  const auto d = finite_difference({0.1, 0.2}, {1.0, 2.0});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(std::isnan(d[0]));
}

TEST(ProfileCsv, HeaderAndRows) {
  MonotoneProfile prof;
  prof.p = 2.0;
  prof.t = {0.5, 1.0};
  prof.s = {std::log(2.0), 0.0};
  prof.U = {12.5, 12.6};
  prof.U_prime = {0.1, 0.2};
  prof.U_prime_fd = {0.1, 0.2};
  prof.Phi = {7.0, 7.1};
  prof.skipped_fraction = {0.0, 0.0};
  std::ostringstream out;
  write_profile_csv(out, prof);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,s,U,U_prime,U_prime_fd,Phi,skipped_fraction");
  std::getline(in, line);
  EXPECT_EQ(line, "0.5,0.69314718056,12.5,0.1,0.1,7,0");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}
