#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "potlab/levelset.hpp"
#include "potlab/shapes.hpp"

namespace potlab {

/// Where a report was computed.
struct ReportContext {
  std::string shape;
  std::optional<double> t;
  /// Free-form discretization tag, e.g. "faces=5120".
  std::string discretization;
};

/// One inequality instance lhs <= rhs.
struct InequalityReport {
  std::string name;
  std::optional<double> p;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs; non-negative when the inequality holds.
  double slack = 0.0;
  /// Absolute tolerance: satisfied iff slack >= -tolerance.
  double tolerance = 0.0;
  bool satisfied = false;
  /// |slack| within the equality tolerance of the report.
  bool equality = false;
  /// Shown but never asserted by the suite.
  bool informational = false;
  ReportContext context;
  std::map<std::string, double> details;
};

/// Relative tolerance used for `satisfied` and `equality` flags.
inline constexpr double report_relative_tolerance = 1e-2;

/// Builds a report with slack, tolerance (relative to max(|lhs|, |rhs|))
/// and flags filled in.
[[nodiscard]] InequalityReport make_report(std::string name, std::optional<double> p, double lhs, double rhs,
                                           ReportContext context,
                                           double relative_tolerance = report_relative_tolerance);

/// Willmore: 4 pi <= integral of (H/2)^2 over a closed surface given as
/// per-face areas and mean curvatures.
[[nodiscard]] InequalityReport check_willmore(std::span<const double> areas, std::span<const double> H,
                                              ReportContext context);
/// Body surface with analytic (shapes) or cotangent (meshes) curvature.
[[nodiscard]] InequalityReport check_willmore(const Body& body);
/// Any level surface with its sampled curvature.
[[nodiscard]] InequalityReport check_willmore(const LevelSurface& level, ReportContext context);

/// Capacity bounds from the boundary curvature: cap_p_upper, capinf_upper,
/// Lp_Cap, Linf_Cap, and the two sides of the bracket with
/// E = Cap / (|dOmega| / 4 pi)^{1/2} recorded. The equality case of Linf_Cap
/// is only conjectured to force a ball; its details carry
/// rigidity_conjectured = 1 and no rigidity claim is made. Needs
/// 1.5 <= p < 2 < q.
[[nodiscard]] std::vector<InequalityReport> check_cap_bounds(double cap, std::span<const double> areas,
                                                             std::span<const double> H, double p, double q,
                                                             const ReportContext& context);

/// Gradient bounds on a level: int_ineq and Lp_ineq, plus Lp_normal and
/// Linf_normal when the level is the body surface. Needs p >= 1.5.
[[nodiscard]] std::vector<InequalityReport> check_lp_gradient(const LevelSurface& level, double p,
                                                              const ReportContext& context);

/// Residual |Du| - H/2 on the body surface, normalized by the mean |Du|:
/// (sup report, L2 report), each with lhs = 0 and rhs = residual.
[[nodiscard]] std::pair<InequalityReport, InequalityReport> overdetermined_residual(
    const LevelSurface& boundary, const ReportContext& context);

}  // namespace potlab
