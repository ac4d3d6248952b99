#include "potlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "potlab/constants.hpp"
#include "potlab/shapes.hpp"

namespace potlab::cli {
namespace {

const std::vector<std::string> suites = {"willmore", "capbounds", "lpgrad", "overdetermined"};

void add_run_options(CLI::App& app, RunConfig& c) {
  // Config-file values containing commas arrive split; join them back.
  app.add_option("--shape", c.shape, "Built-in body: ball:R or ellipsoid:a,b,c")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->capture_default_str();
  app.add_option("--refine", c.refine, "Icosphere refinement level (20 * 4^k faces)")->capture_default_str();
  app.add_option("--mesh", c.mesh, "Closed triangle mesh (OFF or OBJ) instead of --shape");
  app.add_option("--t", c.t_grid, "Level values, increasing in (0, 1)")->delimiter(',');
  app.add_flag("--with-boundary", c.with_boundary, "Append the body surface t = 1 to the profile");
  app.add_option("--p", c.p, "Exponents p")->delimiter(',');
  app.add_option("--q", c.q, "Upper exponent q > 2 of the capacity bracket")->capture_default_str();
  app.add_option("--suite", c.suite, "willmore, capbounds, lpgrad, overdetermined or all")->delimiter(',');
  app.add_option("--resolution", c.resolution, "Marching-cubes cells per axis")->capture_default_str();
  app.add_option("--box", c.box, "Fixed grid box x0,y0,z0,x1,y1,z1 (default: automatic)")->delimiter(',');
  app.add_option("--grad-cutoff", c.grad_cutoff, "Small-gradient cutoff relative to Cap / diam^2")
      ->capture_default_str();
  app.add_option("--level-tolerance", c.level_tolerance, "Newton tolerance on |u - t| / t")->capture_default_str();
  app.add_option("--delta", c.delta, "Monotonicity tolerance relative to the U_p' scale")->capture_default_str();
  app.add_option("--cap-tolerance", c.cap_tolerance, "Relative capacity tolerance")->capture_default_str();
  app.add_option("--flux-level", c.flux_level, "Level t of the flux capacity")->capture_default_str();
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed of the random probe points")->capture_default_str();
}

void fill_defaults(RunConfig& c) {
  if (c.p.empty()) {
    c.p = c.command == Command::profile ? std::vector<double>{1.5, 2.0, 3.0, 5.0} : std::vector<double>{1.5};
  }
  if (c.suite.empty() || (c.suite.size() == 1 && c.suite[0] == "all")) c.suite = suites;
}

}  // namespace

ParseResult parse_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Level-set integrals and capacity inequalities of exterior potentials"};
  app.set_version_flag("--version", POTLAB_VERSION);
  app.set_config("--config", "", "Read key = value settings from a file");
  app.require_subcommand(1, 1);
  add_run_options(app, c);
  app.fallthrough();
  auto* capacity = app.add_subcommand("capacity", "Capacity by total charge and by flux");
  auto* profile = app.add_subcommand("profile", "U_p(t) profiles and monotonicity, one CSV per p");
  auto* check = app.add_subcommand("check", "Inequality suite as JSON lines");
  for (auto* sub : {capacity, profile, check}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return {std::nullopt, app.exit(e, out, err)};
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return {std::nullopt, 3};
  }
  if (capacity->parsed()) c.command = Command::capacity;
  if (profile->parsed()) c.command = Command::profile;
  if (check->parsed()) c.command = Command::check;
  fill_defaults(c);
  return {c, 0};
}

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!c.mesh) {
    try {
      (void)parse_shape(c.shape);
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (c.refine < 0 || c.refine > max_refinement) {
    fail("--refine must be in [0, " + std::to_string(max_refinement) + "]");
  }
  if (c.resolution < 16 || c.resolution > 1024) fail("--resolution must be in [16, 1024]");
  if (!c.box.empty()) {
    if (c.box.size() != 6) fail("--box needs six values x0,y0,z0,x1,y1,z1");
    for (int k = 0; k < 3; ++k) {
      if (!(c.box[k] < c.box[k + 3])) fail("--box corners must satisfy x0 < x1, y0 < y1, z0 < z1");
    }
  }
  for (double t : c.t_grid) {
    if (!(t > 0.0 && t < 1.0)) fail("--t values must lie in (0, 1)");
  }
  for (std::size_t i = 1; i < c.t_grid.size(); ++i) {
    if (!(c.t_grid[i] > c.t_grid[i - 1])) fail("--t values must be strictly increasing");
  }
  for (double p : c.p) {
    if (!std::isfinite(p) || p < 0.0) fail("--p values must be finite and non-negative");
    if (c.command == Command::profile && p < dim::derivative_p_min) {
      std::ostringstream msg;
      msg << "p = " << p << " is below 2 - 1/(n-1) = 1.5 for derivatives";
      fail(msg.str());
    }
  }
  if (!(c.q > 2.0) || !std::isfinite(c.q)) fail("--q must be finite and > 2");
  for (const auto& s : c.suite) {
    if (std::find(suites.begin(), suites.end(), s) == suites.end()) fail("unknown suite '" + s + "'");
  }
  if (!(c.grad_cutoff >= 0.0)) fail("--grad-cutoff must be non-negative");
  if (!(c.level_tolerance > 0.0 && c.level_tolerance < 1e-3)) fail("--level-tolerance must be in (0, 1e-3)");
  if (!(c.delta >= 0.0)) fail("--delta must be non-negative");
  if (!(c.cap_tolerance > 0.0)) fail("--cap-tolerance must be positive");
  if (!(c.flux_level > 0.0 && c.flux_level < 1.0)) fail("--flux-level must lie in (0, 1)");
  if (c.out.empty()) fail("--out must not be empty");
}

}  // namespace potlab::cli
