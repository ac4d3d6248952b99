#include "potlab/solver.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "potlab/constants.hpp"
#include "potlab/errors.hpp"
#include "potlab/parallel.hpp"

namespace potlab {

double SurfaceDensity::total_charge() const {
  double q = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) q += sigma[j] * mesh.area(j);
  return q;
}

std::string to_string(CapacityMethod method) {
  return method == CapacityMethod::total_charge ? "total-charge" : "flux";
}

std::vector<double> assemble_single_layer(const TriMesh& mesh, const QuadratureTiers& tiers) {
  const std::size_t n = mesh.face_count();
  std::vector<double> cx(n), cy(n), cz(n);
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = mesh.centroid(i).x();
    cy[i] = mesh.centroid(i).y();
    cz[i] = mesh.centroid(i).z();
  }
  std::vector<double> a(n * n);
  parallel_for(n, [&](std::size_t j) {
    double* col = a.data() + j * n;
    const Vec3& cj = mesh.centroid(j);
    const double far2 = tiers.point_ratio() * tiers.point_ratio() * mesh.diameter(j) * mesh.diameter(j);
    const double qj = mesh.area(j) * dim::kernel_factor;
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = cx[i] - cj.x(), dy = cy[i] - cj.y(), dz = cz[i] - cj.z();
      const double d2 = dx * dx + dy * dy + dz * dz;
      col[i] = d2 >= far2 ? qj / std::sqrt(d2) : 0.0;
    }
    const auto tri = mesh.triangle(j);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) {
        col[i] = dim::kernel_factor * planar_inverse_distance_integral(tri, cj);
      } else if ((mesh.centroid(i) - cj).squaredNorm() < far2) {
        col[i] = panel_potential(mesh.centroid(i), tri, mesh.area(j), mesh.diameter(j), tiers);
      }
    }
  });
  return a;
}

SurfaceDensity solve_density(const TriMesh& mesh, const QuadratureTiers& tiers) {
  const auto n = static_cast<Eigen::Index>(mesh.face_count());
  auto entries = assemble_single_layer(mesh, tiers);
  Eigen::Map<Eigen::MatrixXd> map(entries.data(), n, n);
  Eigen::Ref<Eigen::MatrixXd> a(map);

  // In-place factorization: the dense matrix is the dominant allocation.
  const Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(a);
  const double rcond = lu.rcond();
  const Eigen::VectorXd sigma = lu.solve(Eigen::VectorXd::Ones(n));
  if (!(rcond > 1e-14) || !sigma.allFinite()) {
    std::ostringstream msg;
    msg << "single-layer solve failed on " << n << " faces (condition estimate "
        << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << ")";
    throw ComputationError(msg.str());
  }
  return SurfaceDensity{mesh, std::vector<double>(sigma.begin(), sigma.end()), tiers, rcond};
}

CapacityEstimate capacity(const SurfaceDensity& density) {
  if (density.sigma.size() != density.mesh.face_count()) {
    throw DomainError("density length does not match the face count");
  }
  const double value = density.total_charge() / (dim::n_minus_2 * dim::sphere_area);
  if (!(value > 0.0)) throw ComputationError("non-positive total charge");
  return {value, CapacityMethod::total_charge, density.mesh.face_count()};
}

}  // namespace potlab
