#include "potlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "potlab/constants.hpp"
#include "potlab/curvature.hpp"
#include "potlab/errors.hpp"

namespace potlab {

namespace {

// H/(n-1) is the normalized mean curvature of the inequalities.
constexpr double kCurvatureScale = 1.0 / dim::n_minus_1;

void require_same_size(std::span<const double> areas, std::span<const double> H) {
  if (areas.empty() || areas.size() != H.size()) {
    throw InputError("curvature unavailable: need one mean curvature per face");
  }
  for (const double h : H) {
    if (!std::isfinite(h)) throw InputError("curvature unavailable: non-finite mean curvature");
  }
}

double total(std::span<const double> areas) {
  double a = 0.0;
  for (const double x : areas) a += x;
  return a;
}

// (mean over the surface of |H/(n-1)|^p)^{1/p}.
double curvature_mean(std::span<const double> areas, std::span<const double> H, double p, double area) {
  double sum = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) sum += std::pow(std::abs(kCurvatureScale * H[i]), p) * areas[i];
  return std::pow(sum / area, 1.0 / p);
}

double curvature_max(std::span<const double> H) {
  double m = 0.0;
  for (const double h : H) m = std::max(m, std::abs(kCurvatureScale * h));
  return m;
}

ReportContext body_context(const Body& body) {
  std::ostringstream tag;
  tag << "faces=" << body.mesh.face_count();
  return {body.id, 1.0, tag.str()};
}

}  // namespace

InequalityReport make_report(std::string name, std::optional<double> p, double lhs, double rhs, ReportContext context,
                             double relative_tolerance) {
  InequalityReport r;
  r.name = std::move(name);
  r.p = p;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = relative_tolerance * std::max(std::abs(lhs), std::abs(rhs));
  r.satisfied = r.slack >= -r.tolerance;
  r.equality = std::abs(r.slack) <= r.tolerance;
  r.context = std::move(context);
  return r;
}

InequalityReport check_willmore(std::span<const double> areas, std::span<const double> H, ReportContext context) {
  require_same_size(areas, H);
  double energy = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    energy += std::pow(std::abs(kCurvatureScale * H[i]), dim::n_minus_1) * areas[i];
  }
  return make_report("willmore", std::nullopt, dim::sphere_area, energy, std::move(context));
}

InequalityReport check_willmore(const Body& body) {
  const std::vector<double> H = face_mean_curvatures(body);
  std::vector<double> areas(body.mesh.face_count());
  for (std::size_t f = 0; f < areas.size(); ++f) areas[f] = body.mesh.area(f);
  return check_willmore(areas, H, body_context(body));
}

InequalityReport check_willmore(const LevelSurface& level, ReportContext context) {
  std::vector<double> areas, H;
  for (std::size_t f = 0; f < level.size(); ++f) {
    if (!level.samples[f].curvature_defined) continue;
    areas.push_back(level.areas[f]);
    H.push_back(level.samples[f].H);
  }
  context.t = level.t;
  return check_willmore(areas, H, std::move(context));
}

std::vector<InequalityReport> check_cap_bounds(double cap, std::span<const double> areas, std::span<const double> H,
                                               double p, double q, const ReportContext& context) {
  require_same_size(areas, H);
  if (!(p >= dim::derivative_p_min && p < dim::n_minus_1 && q > dim::n_minus_1 && std::isfinite(q))) {
    std::ostringstream msg;
    msg << "capacity bounds need 1.5 <= p < 2 < q < inf; got p = " << p << ", q = " << q;
    throw DomainError(msg.str());
  }
  const double area = total(areas);
  const double sphere = dim::sphere_area;
  const double mean_p = curvature_mean(areas, H, p, area);
  const double mean_q = curvature_mean(areas, H, q, area);
  const double max_h = curvature_max(H);
  const double surface_radius = std::pow(area / sphere, dim::n_minus_2 / dim::n_minus_1);
  const double e = cap / surface_radius;
  const double ratio = std::pow(sphere / area, 1.0 / dim::n_minus_1);

  std::vector<InequalityReport> out;
  out.push_back(make_report("cap_p_upper", p, cap, (area / sphere) * mean_p, context));
  out.push_back(make_report("capinf_upper", std::nullopt, cap, (area / sphere) * max_h, context));
  out.push_back(make_report("Lp_Cap", p, std::pow(sphere / area, 1.0 / p),
                            std::pow(cap, (p - dim::n_minus_1) / (p * dim::n_minus_2)) * mean_p, context));
  out.push_back(make_report("Linf_Cap", std::nullopt, 1.0, std::pow(cap, dim::inverse_n_minus_2) * max_h, context));
  out.back().details["rigidity_conjectured"] = 1.0;
  const double lower = std::pow(ratio / mean_q, q * dim::n_minus_2 / (q - dim::n_minus_1));
  const double upper = std::pow(mean_p / ratio, p * dim::n_minus_2 / (dim::n_minus_1 - p));
  out.push_back(make_report("cap_bracket_lower", q, lower, e, context));
  out.push_back(make_report("cap_bracket_upper", p, e, upper, context));
  for (auto& r : out) {
    r.details["cap"] = cap;
    r.details["area"] = area;
  }
  out[out.size() - 2].details["E"] = e;
  out.back().details["E"] = e;
  return out;
}

std::vector<InequalityReport> check_lp_gradient(const LevelSurface& level, double p, const ReportContext& context) {
  if (!(p >= dim::derivative_p_min)) {
    std::ostringstream msg;
    msg << "gradient bounds need p >= 1.5 = 2 - 1/(n-1); got p = " << p;
    throw DomainError(msg.str());
  }
  if (level.size() == 0) throw ComputationError("gradient bounds on an empty level");
  ReportContext ctx = context;
  ctx.t = level.t;

  // |D log u| = |Du| / u; the n-2 = 1 factor of the normalization is implicit.
  double grad_p = 0.0, mixed = 0.0, curv_p = 0.0;
  double max_speed = 0.0, max_curv = 0.0, speed_50 = 0.0, curv_50 = 0.0;
  for (std::size_t f = 0; f < level.size(); ++f) {
    const FieldSample& s = level.samples[f];
    const double a = level.areas[f];
    const double w = s.speed / s.u;
    grad_p += std::pow(w, p) * a;
    if (s.curvature_defined) {
      mixed += std::pow(w, p - 1.0) * kCurvatureScale * s.H * a;
      curv_p += std::pow(std::abs(kCurvatureScale * s.H), p) * a;
      max_curv = std::max(max_curv, std::abs(kCurvatureScale * s.H));
      curv_50 += std::pow(std::abs(kCurvatureScale * s.H), 50.0) * a;
    } else {
      mixed += std::pow(s.u, 1.0 - p) * std::pow(s.speed, p - 4.0) * s.hess_along_grad() * kCurvatureScale * a;
    }
    max_speed = std::max(max_speed, s.speed);
    speed_50 += std::pow(s.speed, 50.0) * a;
  }

  std::vector<InequalityReport> out;
  out.push_back(make_report("int_ineq", p, grad_p, mixed, ctx));
  out.push_back(make_report("Lp_ineq", p, std::pow(grad_p, 1.0 / p), std::pow(curv_p, 1.0 / p), ctx));
  if (level.on_body) {
    // On the body |D log u| = |du/dnu| and the bound is ((n-2)/(n-1)) ||H||.
    out.push_back(make_report("Lp_normal", p, std::pow(grad_p, 1.0 / p), std::pow(curv_p, 1.0 / p), ctx));
    InequalityReport sup = make_report("Linf_normal", std::nullopt, max_speed, max_curv, ctx);
    sup.details["p50_lhs"] = std::pow(speed_50, 1.0 / 50.0);
    sup.details["p50_rhs"] = std::pow(curv_50, 1.0 / 50.0);
    out.push_back(std::move(sup));
  }
  for (auto& r : out) r.details["skipped_fraction"] = level.skipped_fraction;
  return out;
}

std::pair<InequalityReport, InequalityReport> overdetermined_residual(const LevelSurface& boundary,
                                                                      const ReportContext& context) {
  if (boundary.size() == 0) throw ComputationError("overdetermined residual on an empty surface");
  ReportContext ctx = context;
  ctx.t = boundary.t;
  double area = 0.0, mean = 0.0, sup = 0.0, l2 = 0.0;
  for (std::size_t f = 0; f < boundary.size(); ++f) {
    const FieldSample& s = boundary.samples[f];
    if (!s.curvature_defined) continue;
    const double a = boundary.areas[f];
    const double r = s.speed / dim::n_minus_2 - s.H / dim::n_minus_1;
    area += a;
    mean += s.speed * a;
    sup = std::max(sup, std::abs(r));
    l2 += r * r * a;
  }
  if (!(area > 0.0) || !(mean > 0.0)) throw ComputationError("overdetermined residual: no usable samples");
  mean /= area;
  const double sup_n = sup / mean;
  const double l2_n = std::sqrt(l2 / area) / mean;
  InequalityReport a = make_report("overdetermined_sup", std::nullopt, 0.0, sup_n, ctx);
  InequalityReport b = make_report("overdetermined_l2", std::nullopt, 0.0, l2_n, ctx);
  for (auto* r : {&a, &b}) {
    r->tolerance = report_relative_tolerance;
    r->satisfied = true;
    r->equality = r->slack <= report_relative_tolerance;
    r->details["mean_speed"] = mean;
  }
  return {a, b};
}

}  // namespace potlab
