#pragma once

#include <map>
#include <memory>
#include <string>

#include "potlab/curvature.hpp"
#include "potlab/field.hpp"
#include "potlab/shapes.hpp"

namespace fixtures {

struct Solved {
  potlab::Body body;
  potlab::PotentialField field;
  std::vector<double> face_H;
};

/// One boundary element solve per (shape, refinement), kept for the binary.
inline const Solved& solved(const potlab::AnalyticShape& shape, int refinement) {
  static std::map<std::string, std::unique_ptr<Solved>> cache;
  const std::string key = shape.id() + "@" + std::to_string(refinement);
  auto& slot = cache[key];
  if (!slot) {
    potlab::Body body = potlab::make_body(shape, refinement);
    potlab::PotentialField field(potlab::solve_density(body.mesh));
    auto H = potlab::face_mean_curvatures(body);
    slot = std::make_unique<Solved>(Solved{std::move(body), std::move(field), std::move(H)});
  }
  return *slot;
}

inline const Solved& ball(int refinement = 3) { return solved(potlab::Ball{1.0}, refinement); }
inline const Solved& ellipsoid(int refinement = 3) { return solved(potlab::Ellipsoid{2.0, 1.0, 1.0}, refinement); }

}  // namespace fixtures
