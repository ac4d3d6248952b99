#pragma once

#include <memory>
#include <vector>

#include "potlab/solver.hpp"

namespace potlab {

/// Every pointwise quantity of the exterior problem at one point.
struct FieldSample {
  Vec3 x = Vec3::Zero();
  double u = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
  /// |Du|.
  double speed = 0.0;
  /// Mean curvature of the level set through x with respect to nu = -Du/|Du|.
  double H = 0.0;
  /// phi = -log u.
  double phi = 0.0;
  /// |grad phi|_g = |Du| / u^{(n-1)/(n-2)} for g = u^{2/(n-2)} g_eucl.
  double conf_speed = 0.0;
  /// Mean curvature of the level set in the conformal metric g.
  double H_conf = 0.0;
  /// P-function conf_speed^2.
  double P = 0.0;
  /// False when |Du| is below the small-gradient cutoff; H and H_conf are NaN
  /// then and integrands fall back to their bounded surrogates.
  bool curvature_defined = true;

  /// D^2u(Du, Du); the bounded surrogate numerator of |Du|^{p-1} H.
  [[nodiscard]] double hess_along_grad() const { return grad.dot(hess * grad); }
};

/// Fills the derived fields of a sample from (x, u, Du, D^2u). Curvatures
/// are evaluated only when |Du| >= grad_cutoff.
[[nodiscard]] FieldSample make_sample(const Vec3& x, double u, const Vec3& grad, const Mat3& hess,
                                      double grad_cutoff);

class PotentialField {
 public:
  explicit PotentialField(SurfaceDensity density);

  [[nodiscard]] const SurfaceDensity& density() const { return density_; }
  [[nodiscard]] const TriMesh& mesh() const { return density_.mesh; }
  [[nodiscard]] const CapacityEstimate& capacity() const { return capacity_; }
  [[nodiscard]] double cap() const { return capacity_.value; }

  /// Small-gradient cutoff 1e-8 * Cap / diam^2 (overridable).
  [[nodiscard]] double grad_cutoff() const { return grad_cutoff_; }
  void set_grad_cutoff(double cutoff) { grad_cutoff_ = cutoff; }

  /// Raw single-layer sum at any point off the panels; no exterior check.
  [[nodiscard]] KernelSum evaluate(const Vec3& x, Derivatives order) const;

  /// Ray-parity exterior test with a 1e-9 * diam safety margin.
  [[nodiscard]] bool is_exterior(const Vec3& x) const;
  /// Parity part of is_exterior only (no margin); used for grid nodes.
  [[nodiscard]] bool inside_body(const Vec3& x) const;

 private:
  struct RayIndex;

  SurfaceDensity density_;
  CapacityEstimate capacity_;
  double grad_cutoff_ = 0.0;
  // Structure-of-arrays panel data for the vectorized far-field pass.
  std::vector<double> cx_, cy_, cz_, charge_, far2_;
  std::shared_ptr<const RayIndex> rays_;
};

/// FieldSample at an exterior point. Throws DomainError when x is inside or
/// on the body and ComputationError when the sum is not finite.
[[nodiscard]] FieldSample sample_field(const PotentialField& field, const Vec3& x);
/// Same checks as above, reusing a Hessian-order sum already evaluated at x.
[[nodiscard]] FieldSample sample_field(const PotentialField& field, const Vec3& x, const KernelSum& k);

/// Closed-form sample of u = R/|x| outside the ball of radius R at the origin.
[[nodiscard]] FieldSample ball_oracle_sample(double radius, const Vec3& x);

/// Mean of u(x) |x - center| over 12 icosahedral directions at distance
/// 50 * body diameter; the leading far-field coefficient, i.e. Cap.
[[nodiscard]] double asymptotic_fit(const PotentialField& field);

}  // namespace potlab
