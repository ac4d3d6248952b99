#include "potlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "potlab/curvature.hpp"
#include "potlab/errors.hpp"
#include "potlab/inequalities.hpp"
#include "potlab/monotone.hpp"
#include "potlab/oracle.hpp"
#include "potlab/report_io.hpp"

namespace potlab::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Body load(const RunConfig& c) {
  if (c.mesh) return load_body(*c.mesh);
  return make_body(parse_shape(c.shape), c.refine);
}

PotentialField solve(const RunConfig& c, const Body& body) {
  PotentialField field(solve_density(body.mesh));
  const double diam = body.mesh.diameter();
  field.set_grad_cutoff(c.grad_cutoff * field.cap() / (diam * diam));
  return field;
}

LevelOptions level_options(const RunConfig& c) {
  LevelOptions o;
  o.resolution = c.resolution;
  o.newton_tolerance = c.level_tolerance;
  if (!c.box.empty()) {
    o.grid = GridSpec{Vec3(c.box[0], c.box[1], c.box[2]), Vec3(c.box[3], c.box[4], c.box[5]), c.resolution};
  }
  return o;
}

std::filesystem::path output_file(const RunConfig& c, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) throw InputError("cannot create output directory '" + c.out.string() + "': " + ec.message());
  return c.out / name;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  return f;
}

std::string discretization(const Body& body) { return "faces=" + std::to_string(body.mesh.face_count()); }

struct Reference {
  double value = 0.0;
  std::string method;
};

std::optional<Reference> reference_capacity(const Body& body) {
  if (!body.shape) return std::nullopt;
  const Vec3 axes = body.shape->semi_axes();
  if (body.shape->is_ball()) return Reference{axes.x(), "closed form"};
  const auto v = oracle::ellipsoid_capacity(axes.x(), axes.y(), axes.z());
  return Reference{v.value, v.method};
}

// Largest |trace D^2u| / |D^2u| over random points in the shell between
// r0 and 2 r0 around the body center, where r0 exceeds the bounding radius
// by the centroid-rule distance of the largest panel.
double harmonicity_probe(const PotentialField& field, std::uint64_t seed, int count) {
  const TriMesh& mesh = field.mesh();
  const Vec3 center = mesh.center();
  double radius = 0.0;
  for (const Vec3& v : mesh.vertices()) radius = std::max(radius, (v - center).norm());
  radius += field.density().tiers.point_ratio() * mesh.max_panel_diameter();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(1.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    Vec3 dir(normal(rng), normal(rng), normal(rng));
    dir.normalize();
    const FieldSample s = sample_field(field, center + uniform(rng) * radius * dir);
    worst = std::max(worst, std::abs(s.hess.trace()) / s.hess.norm());
  }
  return worst;
}

int cmd_capacity(const RunConfig& c, std::ostream& out) {
  const Body body = load(c);
  const PotentialField field = solve(c, body);
  const LevelSurface level = extract_level(field, c.flux_level, level_options(c));
  const double cap = field.cap();
  const double flux = capacity_flux(level);
  const auto ref = reference_capacity(body);

  Json j;
  j["shape"] = body.id;
  j["faces"] = body.mesh.face_count();
  j["cap_total_charge"] = round_significant(cap);
  j["cap_flux"] = round_significant(flux);
  j["flux_level"] = c.flux_level;
  j["cap_far_field"] = round_significant(asymptotic_fit(field));
  j["harmonicity"] = round_significant(harmonicity_probe(field, c.seed, 20));
  bool pass = false;
  if (ref) {
    const double e_total = std::abs(cap - ref->value) / ref->value;
    const double e_flux = std::abs(flux - ref->value) / ref->value;
    j["oracle"] = round_significant(ref->value);
    j["oracle_method"] = ref->method;
    j["rel_error_total_charge"] = round_significant(e_total);
    j["rel_error_flux"] = round_significant(e_flux);
    pass = e_total <= c.cap_tolerance && e_flux <= c.cap_tolerance;
  } else {
    const double spread = std::abs(cap - flux) / cap;
    j["rel_difference"] = round_significant(spread);
    pass = spread <= c.cap_tolerance;
  }
  j["tolerance"] = c.cap_tolerance;
  j["pass"] = pass;

  open_output(output_file(c, "capacity.json")) << j.dump() << "\n";
  for (const auto& [key, value] : j.items()) {
    out << key << " " << (value.is_number_float() ? num(value.get<double>()) : value.dump()) << "\n";
  }
  return pass ? 0 : 1;
}

int cmd_profile(const RunConfig& c, std::ostream& out) {
  const Body body = load(c);
  const PotentialField field = solve(c, body);
  ProfileOptions options;
  options.level = level_options(c);
  options.monotonicity_tolerance = c.delta;
  std::vector<double> grid = c.t_grid.empty() ? default_t_grid() : c.t_grid;
  if (c.with_boundary) {
    grid.push_back(1.0);
    options.boundary_curvature = face_mean_curvatures(body);
  }
  const auto profiles = build_profiles(field, c.p, grid, options);

  bool pass = true;
  out << "shape " << body.id << " faces " << body.mesh.face_count() << " cap " << num(field.cap()) << "\n";
  for (const auto& pr : profiles) {
    const std::string name = "profile_p" + num(pr.p) + ".csv";
    auto f = open_output(output_file(c, name));
    write_profile_csv(f, pr);
    out << "p " << num(pr.p) << " min_U_prime " << num(round_significant(pr.min_U_prime)) << " min_relative "
        << num(round_significant(pr.min_U_prime_relative)) << " limit " << num(round_significant(pr.limit))
        << " monotone " << (pr.monotone ? "yes" : "no") << " above_limit " << (pr.above_limit ? "yes" : "no")
        << " file " << name << "\n";
    pass = pass && pr.monotone;
  }
  return pass ? 0 : 1;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  const Body body = load(c);
  const auto wants = [&](const char* s) { return std::find(c.suite.begin(), c.suite.end(), s) != c.suite.end(); };
  std::vector<InequalityReport> reports;
  if (wants("willmore")) reports.push_back(check_willmore(body));

  if (wants("capbounds") || wants("lpgrad") || wants("overdetermined")) {
    const PotentialField field = solve(c, body);
    const auto H = face_mean_curvatures(body);
    const LevelSurface boundary = boundary_level(field, H);
    const ReportContext ctx{body.id, 1.0, discretization(body)};
    if (wants("capbounds")) {
      for (double p : c.p) {
        for (auto& r : check_cap_bounds(field.cap(), boundary.areas, H, p, c.q, ctx)) reports.push_back(r);
      }
    }
    if (wants("lpgrad")) {
      for (double p : c.p) {
        for (auto& r : check_lp_gradient(boundary, p, ctx)) reports.push_back(r);
      }
    }
    if (wants("overdetermined")) {
      auto [sup, l2] = overdetermined_residual(boundary, ctx);
      reports.push_back(sup);
      reports.push_back(l2);
    }
  }

  auto f = open_output(output_file(c, "check.jsonl"));
  write_jsonl(f, reports);
  write_table(out, reports);
  const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.satisfied; });
  return pass ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::capacity:
        return cmd_capacity(config, out);
      case Command::profile:
        return cmd_profile(config, out);
      case Command::check:
        return cmd_check(config, out);
    }
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_command_line(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  try {
    validate(*parsed.config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return run(*parsed.config, out, err);
}

}  // namespace potlab::cli
