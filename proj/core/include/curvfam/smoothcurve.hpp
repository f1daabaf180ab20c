#pragma once

// Planar curves reconstructed from curvature, and the closedness conditions of
// the affine family of curvatures k + lambda f.
//
// Conventions: theta = int_0^t k, phi = int_0^t f, gamma = int_0^t e^{i theta};
// the family is closed for every lambda iff
//   F(lambda) = int_0^{2pi} e^{i (theta + lambda phi)} dt
// vanishes identically, iff every moment int e^{i theta} phi^n vanishes.

#include <complex>
#include <vector>

#include "curvfam/closure_report.hpp"
#include "curvfam/fungrid.hpp"
#include "curvfam/generator.hpp"

namespace curvfam {

struct PlanarCurveSamples {
  UniformGrid grid;
  std::vector<std::complex<double>> points;  // points[0] == 0

  std::complex<double> endpoint() const { return points.back(); }
};

struct LevelSetRoot {
  double t;
  double theta;          // theta(t)
  double abs_phi_prime;  // |phi'(t)|
};

struct LevelSetReport {
  double level = 0.0;
  std::vector<LevelSetRoot> roots;
  /// sum over the level set of e^{i theta(b)} / |phi'(b)|
  std::complex<double> weighted_sum{};
  /// True iff the level differs from phi(0) and phi(2pi).
  bool boundary_excluded = true;

  /// Running sums, one per root (the CSV export columns).
  std::vector<std::complex<double>> partial_sums() const;
};

enum class BoundaryBranch { Even, Odd, Violation };

const char* to_string(BoundaryBranch b) noexcept;

struct BoundaryReport {
  bool phi_endpoint_match = false;
  BoundaryBranch branch = BoundaryBranch::Violation;
  double theta_gap = 0.0;  // theta(2pi) - theta(0)
  /// Per derivative order k = 1..h: the larger of the theta residual (k < h)
  /// and the phi residual, for the reported branch. For a violation, the
  /// residuals of the branch whose angle class is nearer.
  std::vector<double> derivative_residuals;
  std::vector<double> residual_tolerances;
  double even_max_residual = 0.0;
  double odd_max_residual = 0.0;
};

struct MomentOptions {
  int max_order = 24;
};

/// theta = int_0^t k, theta(0) = 0.
SampledFunction turning_angle(const SampledFunction& k);

/// gamma(t) = int_0^t e^{i theta}; gamma(0) = 0.
PlanarCurveSamples curve_from_angle(const SampledFunction& theta);

/// |int_0^{2pi} e^{i theta}|, the distance between the curve's endpoints.
double closure_defect(const SampledFunction& theta);

/// F(lambda) = int_0^{2pi} e^{i (theta + lambda phi)}.
std::complex<double> f_of_lambda(const SampledFunction& theta, const SampledFunction& phi, double lambda);

/// int_0^{2pi} e^{i theta} phi^n. phi is rescaled by sup|phi| internally and
/// the scale reapplied at the end. Throws PreconditionError for n above the
/// configured maximum order.
std::complex<double> moment(const SampledFunction& theta, const SampledFunction& phi, int n,
                            const MomentOptions& opts = {});

/// |moment| / sup|phi|^n: the scale-free form used by verdicts.
double normalized_moment(const SampledFunction& theta, const SampledFunction& phi, int n,
                         const MomentOptions& opts = {});

/// max over n = 0..n_max of normalized_moment.
double max_normalized_moment(const SampledFunction& theta, const SampledFunction& phi, int n_max,
                             const MomentOptions& opts = {});

/// F^{(n)}(0) / n! = i^n moment(n) / n!.
std::complex<double> series_coefficient(const SampledFunction& theta, const SampledFunction& phi, int n,
                                        const MomentOptions& opts = {});

/// int e^{i theta} g(phi)^n. Throws DomainError when g is undefined somewhere
/// on the range of phi.
std::complex<double> composed_moment(const SampledFunction& theta, const SampledFunction& phi, const Generator& g,
                                     int n, const MomentOptions& opts = {});

/// Roots of phi = a with theta and |phi'| there, and the weighted sum
/// sum e^{i theta(b)} / |phi'(b)|. CriticalValue propagates from root finding.
LevelSetReport level_set_condition(const SampledFunction& theta, const SampledFunction& phi, double a,
                                   const LevelOptions& opts = {});

/// Defect |F(lambda)| for each lambda, with theta, phi integrated from k, f.
/// Throws PreconditionError for an empty lambda list.
ClosureReport family_scan(const SampledFunction& k, const SampledFunction& f, const std::vector<double>& lambdas,
                          double tolerance);

/// Same, from turning angles that are already integrated.
ClosureReport family_scan_angles(const SampledFunction& theta, const SampledFunction& phi,
                                 const std::vector<double>& lambdas, double tolerance);

/// Endpoint relations between theta and phi up to derivative order h.
/// Throws CriticalValue when phi(0) is a critical value (|phi'(0)| in the
/// near-critical band) and PreconditionError when the grid is too coarse for
/// the requested order.
BoundaryReport boundary_check(const SampledFunction& theta, const SampledFunction& phi, int h, double tolerance);

}  // namespace curvfam
