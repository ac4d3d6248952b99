#pragma once

#include <iosfwd>
#include <vector>

#include "potlab/levelset.hpp"

namespace potlab {

/// U_p(t) = (Cap / t)^{2(p-1)} * integral over {u = t} of |Du|^p.
[[nodiscard]] double compute_Up(const PotentialField& field, const LevelSurface& level, double p);

/// U_p'(t) = (p-1) (Cap / t)^{2(p-1)} * integral of |Du|^{p-1} [H - 2|Du|/t].
/// Requires p >= 1.5. Samples below the gradient cutoff use the bounded
/// surrogate |Du|^{p-4} D^2u(Du, Du) in place of |Du|^{p-1} H.
[[nodiscard]] double compute_Up_prime(const PotentialField& field, const LevelSurface& level, double p);

/// Positive part of the U_p' integrand, (p-1) (Cap / t)^{2(p-1)} * integral
/// of |Du|^{p-1} 2|Du|/t; the scale for tolerances on U_p'.
[[nodiscard]] double Up_prime_scale(const PotentialField& field, const LevelSurface& level, double p);

/// Phi_p(s) at s = -log t: integral of (|Du| / u^2)^p u^2 over {u = t},
/// using each sample's own u.
[[nodiscard]] double compute_Phi(const LevelSurface& level, double p);

/// Phi_p'(s) = -(p-1) * integral of (|Du| / u^2)^{p-1} H_g u^2.
[[nodiscard]] double compute_Phi_prime(const LevelSurface& level, double p);

/// lim_{t -> 0} U_p(t) = Cap^p |S^2|.
[[nodiscard]] double Up_limit(double cap, double p);

/// {0.1, 0.2, ..., 0.9, 0.99}.
[[nodiscard]] std::vector<double> default_t_grid();

struct ProfileOptions {
  LevelOptions level;
  /// Per-face mean curvature of the body, needed when the grid contains t = 1.
  std::vector<double> boundary_curvature;
  BoundaryGradient boundary_gradient = BoundaryGradient::jump;
  /// Relative tolerance of the bound U_p(t) >= lim U_p.
  double limit_tolerance = 0.02;
  /// Relative tolerance delta on U_p' >= -delta * scale.
  double monotonicity_tolerance = 0.01;
};

struct MonotoneProfile {
  double p = 0.0;
  std::vector<double> t;
  std::vector<double> s;
  std::vector<double> U;
  /// Closed formula; for p < 1.5 it is evaluated but not covered by the theory.
  std::vector<double> U_prime;
  /// Nonuniform finite differences of U: central inside, one-sided
  /// three-point at the ends.
  std::vector<double> U_prime_fd;
  std::vector<double> U_prime_scale;
  std::vector<double> Phi;
  std::vector<double> Phi_prime;
  std::vector<double> skipped_fraction;
  double limit = 0.0;
  double min_U_prime = 0.0;
  /// min over t of U_prime / U_prime_scale (0 when the scale vanishes).
  double min_U_prime_relative = 0.0;
  bool derivative_certified = false;
  bool monotone = false;
  bool above_limit = false;
};

/// Profiles for several p sharing one level extraction per t.
[[nodiscard]] std::vector<MonotoneProfile> build_profiles(const PotentialField& field,
                                                          const std::vector<double>& p_values,
                                                          const std::vector<double>& t_grid,
                                                          const ProfileOptions& options = {});

[[nodiscard]] MonotoneProfile build_profile(const PotentialField& field, double p,
                                            const std::vector<double>& t_grid,
                                            const ProfileOptions& options = {});

/// Finite-difference derivative of samples y over an increasing grid x.
[[nodiscard]] std::vector<double> finite_difference(const std::vector<double>& x,
                                                    const std::vector<double>& y);

/// CSV with columns t,s,U,U_prime,U_prime_fd,Phi,skipped_fraction.
void write_profile_csv(std::ostream& out, const MonotoneProfile& profile);

}  // namespace potlab
