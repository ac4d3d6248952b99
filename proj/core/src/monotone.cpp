#include "potlab/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "potlab/constants.hpp"
#include "potlab/errors.hpp"

namespace potlab {

namespace {

void require_p(double p, double minimum, const char* what) {
  if (!(p >= minimum)) {
    std::ostringstream msg;
    msg << what << ": p = " << p << " is below " << minimum;
    if (minimum == dim::derivative_p_min) msg << " = 2 - 1/(n-1)";
    throw DomainError(msg.str());
  }
}

double prefactor(double cap, double t, double p) {
  return std::pow(cap / t, dim::conformal_exponent * (p - 1.0));
}

// |Du|^{p-1} H with its bounded stand-in where the gradient is too small.
Integrand weighted_curvature(double p) {
  return Integrand{
      [p](const FieldSample& s) { return std::pow(s.speed, p - 1.0) * s.H; },
      [p](const FieldSample& s) { return std::pow(s.speed, p - 4.0) * s.hess_along_grad(); },
      true};
}

double raw_Up_prime(const PotentialField& field, const LevelSurface& level, double p) {
  const double t = level.t;
  const double curv = surface_integral(level, weighted_curvature(p));
  const double grad = surface_integral(
      level, Integrand{[p, t](const FieldSample& s) { return dim::conformal_exponent * std::pow(s.speed, p) / t; }, {}, false});
  return (p - 1.0) * prefactor(field.cap(), t, p) * (curv - grad);
}

}  // namespace

double compute_Up(const PotentialField& field, const LevelSurface& level, double p) {
  require_p(p, 0.0, "U_p");
  const double integral =
      surface_integral(level, Integrand{[p](const FieldSample& s) { return std::pow(s.speed, p); }, {}, false});
  return prefactor(field.cap(), level.t, p) * integral;
}

double compute_Up_prime(const PotentialField& field, const LevelSurface& level, double p) {
  require_p(p, dim::derivative_p_min, "U_p'");
  return raw_Up_prime(field, level, p);
}

double Up_prime_scale(const PotentialField& field, const LevelSurface& level, double p) {
  const double t = level.t;
  const double grad = surface_integral(
      level, Integrand{[p, t](const FieldSample& s) { return dim::conformal_exponent * std::pow(s.speed, p) / t; }, {}, false});
  return std::abs(p - 1.0) * prefactor(field.cap(), t, p) * grad;
}

double compute_Phi(const LevelSurface& level, double p) {
  require_p(p, 0.0, "Phi_p");
  return surface_integral(level, Integrand{[p](const FieldSample& s) {
                                             return std::pow(s.conf_speed, p) * std::pow(s.u, dim::conformal_exponent);
                                           },
                                           {}, false});
}

double compute_Phi_prime(const LevelSurface& level, double p) {
  require_p(p, dim::derivative_p_min, "Phi_p'");
  const Integrand integrand{
      [p](const FieldSample& s) {
        return std::pow(s.conf_speed, p - 1.0) * s.H_conf * std::pow(s.u, dim::conformal_exponent);
      },
      // H_g = u^{-1} [H - 2|Du|/u] with |Du|^{p-1} H replaced by the surrogate.
      [p](const FieldSample& s) {
        const double weight = std::pow(s.u, dim::conformal_exponent * (1.0 - p) + dim::conformal_exponent - 1.0);
        const double curv = std::pow(s.speed, p - 4.0) * s.hess_along_grad();
        return weight * (curv - dim::conformal_exponent * std::pow(s.speed, p) / s.u);
      },
      true};
  return -(p - 1.0) * surface_integral(level, integrand);
}

double Up_limit(double cap, double p) {
  return std::pow(cap * dim::n_minus_2, p) * dim::sphere_area;
}

std::vector<double> default_t_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
  if (n < 3 || y.size() != n) return d;
  // Derivative of the quadratic through three points, at the middle one
  // (central) or at an end point (one-sided).
  auto quad = [&](std::size_t a, std::size_t b, std::size_t c, double at) {
    const double xa = x[a], xb = x[b], xc = x[c];
    return y[a] * (2 * at - xb - xc) / ((xa - xb) * (xa - xc)) +
           y[b] * (2 * at - xa - xc) / ((xb - xa) * (xb - xc)) +
           y[c] * (2 * at - xa - xb) / ((xc - xa) * (xc - xb));
  };
  d[0] = quad(0, 1, 2, x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = quad(i - 1, i, i + 1, x[i]);
  d[n - 1] = quad(n - 3, n - 2, n - 1, x[n - 1]);
  return d;
}

std::vector<MonotoneProfile> build_profiles(const PotentialField& field, const std::vector<double>& p_values,
                                            const std::vector<double>& t_grid, const ProfileOptions& options) {
  if (t_grid.size() < 5) throw InputError("a profile needs at least 5 t values");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0)) throw InputError("t values must lie in (0, 1]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InputError("t values must be strictly increasing");
  }
  if (t_grid.back() == 1.0 && options.boundary_curvature.empty()) {
    throw InputError("t = 1 needs the boundary mean curvature");
  }
  for (const double p : p_values) require_p(p, 0.0, "profile");

  std::vector<MonotoneProfile> out(p_values.size());
  for (std::size_t k = 0; k < p_values.size(); ++k) {
    out[k].p = p_values[k];
    out[k].derivative_certified = p_values[k] >= dim::derivative_p_min;
    out[k].limit = Up_limit(field.cap(), p_values[k]);
  }
  for (const double t : t_grid) {
    LevelSurface level;
    if (t == 1.0) {
      level = boundary_level(field, options.boundary_curvature, options.boundary_gradient);
    } else {
      level = extract_level(field, t, options.level);
    }
    for (auto& prof : out) {
      const double p = prof.p;
      prof.t.push_back(t);
      prof.s.push_back(t == 1.0 ? 0.0 : -std::log(t));
      prof.U.push_back(compute_Up(field, level, p));
      prof.U_prime.push_back(raw_Up_prime(field, level, p));
      prof.U_prime_scale.push_back(Up_prime_scale(field, level, p));
      prof.Phi.push_back(compute_Phi(level, p));
      prof.Phi_prime.push_back(p >= dim::derivative_p_min ? compute_Phi_prime(level, p)
                                                          : std::numeric_limits<double>::quiet_NaN());
      prof.skipped_fraction.push_back(level.skipped_fraction);
    }
  }
  for (auto& prof : out) {
    prof.U_prime_fd = finite_difference(prof.t, prof.U);
    prof.min_U_prime = *std::min_element(prof.U_prime.begin(), prof.U_prime.end());
    prof.min_U_prime_relative = std::numeric_limits<double>::infinity();
    prof.monotone = true;
    prof.above_limit = true;
    for (std::size_t i = 0; i < prof.t.size(); ++i) {
      const double scale = prof.U_prime_scale[i];
      const double rel = scale > 0.0 ? prof.U_prime[i] / scale : 0.0;
      prof.min_U_prime_relative = std::min(prof.min_U_prime_relative, rel);
      if (prof.U_prime[i] < -options.monotonicity_tolerance * scale) prof.monotone = false;
      if (prof.U[i] < prof.limit * (1.0 - options.limit_tolerance)) prof.above_limit = false;
    }
  }
  return out;
}

MonotoneProfile build_profile(const PotentialField& field, double p, const std::vector<double>& t_grid,
                              const ProfileOptions& options) {
  return std::move(build_profiles(field, {p}, t_grid, options).front());
}

void write_profile_csv(std::ostream& out, const MonotoneProfile& profile) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << "t,s,U,U_prime,U_prime_fd,Phi,skipped_fraction\n";
  out << std::setprecision(12);
  for (std::size_t i = 0; i < profile.t.size(); ++i) {
    out << profile.t[i] << ',' << profile.s[i] << ',' << profile.U[i] << ',' << profile.U_prime[i] << ','
        << profile.U_prime_fd[i] << ',' << profile.Phi[i] << ',' << profile.skipped_fraction[i] << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace potlab
