#pragma once

#include <string>
#include <vector>

#include "potlab/mesh.hpp"
#include "potlab/quadrature.hpp"

namespace potlab {

/// Piecewise-constant single-layer density: u(x) = sum_j sigma_j * int_{face j} G(x, y) dy.
struct SurfaceDensity {
  TriMesh mesh;
  std::vector<double> sigma;
  QuadratureTiers tiers;
  /// Reciprocal condition-number estimate of the collocation matrix.
  double rcond = 0.0;

  /// Total charge sum_j sigma_j * area_j.
  [[nodiscard]] double total_charge() const;
};

enum class CapacityMethod { total_charge, flux };

[[nodiscard]] std::string to_string(CapacityMethod method);

/// Capacity in the normalization where Cap(ball of radius R) = R.
struct CapacityEstimate {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::total_charge;
  std::size_t faces = 0;
};

/// Dense collocation matrix A[i][j] = int_{face j} G(c_i, y) dy at the face
/// centroids c_i. The diagonal uses the exact planar integral; the rest use
/// the tiered panel quadrature. Columns are assembled concurrently.
[[nodiscard]] std::vector<double> assemble_single_layer(const TriMesh& mesh,
                                                        const QuadratureTiers& tiers);

/// Solves A sigma = 1 (the boundary condition u = 1 at every centroid) by a
/// dense LU factorization. Throws ComputationError when the system is
/// numerically singular or the solution is not finite.
[[nodiscard]] SurfaceDensity solve_density(const TriMesh& mesh, const QuadratureTiers& tiers = {});

/// Cap = total charge / ((n - 2) |S^{n-1}|).
[[nodiscard]] CapacityEstimate capacity(const SurfaceDensity& density);

}  // namespace potlab
