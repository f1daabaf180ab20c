#pragma once

// Discrete counterpart: unit-edge polylines v_1..v_N with curvature k_j at the
// interior vertices j = 2..N-1 and turning angles theta_j = k_2 + ... + k_j.
// Edge j (from v_j to v_{j+1}) has direction theta_j; the first edge has
// direction 0. Indices in this API follow that 1-based vertex numbering.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "curvfam/closure_report.hpp"

namespace curvfam {

class Polyline {
 public:
  /// Throws ValidationError unless N >= 3 and every edge has unit length
  /// within 1e-12.
  explicit Polyline(std::vector<std::complex<double>> vertices);

  /// v_1 = 0, v_{j+1} = v_j + e_j.
  static Polyline from_edges(std::span<const std::complex<double>> edges);

  std::size_t size() const noexcept { return v_.size(); }
  const std::vector<std::complex<double>>& vertices() const noexcept { return v_; }
  std::complex<double> vertex(std::size_t j) const { return v_.at(j - 1); }  // 1-based
  std::vector<std::complex<double>> edges() const;

 private:
  std::vector<std::complex<double>> v_;
};

/// Curvature and turning angles at the interior vertices 2..N-1.
class DiscreteAngles {
 public:
  static DiscreteAngles from_curvature(std::vector<double> k);
  static DiscreteAngles from_turning(std::vector<double> theta);
  /// Curvature by two-argument arctangent of consecutive edges.
  static DiscreteAngles from_polyline(const Polyline& p);

  /// Number of interior vertices, N - 2.
  std::size_t interior() const noexcept { return k_.size(); }
  std::size_t vertex_count() const noexcept { return k_.size() + 2; }
  const std::vector<double>& curvature() const noexcept { return k_; }
  const std::vector<double>& turning() const noexcept { return theta_; }
  /// theta_j for 1-based vertex index j in 2..N-1.
  double theta(std::size_t j) const { return theta_.at(j - 2); }

 private:
  DiscreteAngles(std::vector<double> k, std::vector<double> theta) : k_(std::move(k)), theta_(std::move(theta)) {}
  std::vector<double> k_, theta_;
};

/// Deformation direction f_j and its partial sums phi_j, j = 2..N-1.
class DiscretePhi {
 public:
  static DiscretePhi from_increments(std::vector<double> f);
  static DiscretePhi from_partial_sums(std::vector<double> phi);
  static DiscretePhi zero(std::size_t interior) { return from_increments(std::vector<double>(interior, 0.0)); }

  std::size_t interior() const noexcept { return f_.size(); }
  const std::vector<double>& increments() const noexcept { return f_; }
  const std::vector<double>& partial_sums() const noexcept { return phi_; }

 private:
  DiscretePhi(std::vector<double> f, std::vector<double> phi) : f_(std::move(f)), phi_(std::move(phi)) {}
  std::vector<double> f_, phi_;
};

struct BalancedSubset {
  std::vector<std::size_t> indices;  // 1-based interior vertex indices, increasing
  double residual;                   // |sum e^{i theta_j}|, recomputed directly
};

struct BalanceReport {
  std::vector<BalancedSubset> subsets;       // residual <= tolerance
  std::vector<BalancedSubset> near_balanced;  // tolerance < residual <= 100 tolerance
  double tolerance = 0.0;
  bool exhaustive = false;
};

struct BalanceOptions {
  double tolerance = 1e-9;
  std::size_t cap = 22;  // maximum number of interior vertices
  unsigned threads = 0;  // 0: hardware concurrency
};

/// v_1 = 0, v_2 = 1, v_j = v_{j-1} + e^{i theta_{j-1}}. N = k.size() + 2.
Polyline polyline_from_curvature(std::span<const double> k);
Polyline polyline_from_angles(const DiscreteAngles& angles);

/// |v_N - v_1|.
double discrete_closure_defect(const Polyline& p);

/// sum_{j=2}^{N-1} e^{i theta_j} phi_j^n (the raw sum; n = 0 gives sum e^{i theta_j}).
std::complex<double> discrete_moment(const DiscreteAngles& angles, const DiscretePhi& phi, int n);

/// sum over {j : |phi_j - a| <= match_tolerance} of e^{i theta_j} (raw sum).
std::complex<double> discrete_level_sum(const DiscreteAngles& angles, const DiscretePhi& phi, double a,
                                        double match_tolerance = 1e-9);

/// Distinct attained values of phi, grouped at the match tolerance.
std::vector<double> attained_levels(const DiscretePhi& phi, double match_tolerance = 1e-9);

struct ConditionCheck {
  double worst = 0.0;  // largest residual over the checked instances
  bool pass = false;
};

/// Moments n = 1..n_max of phi / max|phi| all within tolerance.
ConditionCheck check_moment_condition(const DiscreteAngles& angles, const DiscretePhi& phi, int n_max,
                                      double tolerance);

/// Level sums at every attained nonzero value within tolerance.
ConditionCheck check_level_condition(const DiscreteAngles& angles, const DiscretePhi& phi, double tolerance,
                                     double match_tolerance = 1e-9);

/// The zero-level / zeroth-moment instance in closure-consistent form:
/// |1 + sum_{phi_j = 0} e^{i theta_j}|. The first edge is never deformed.
double zero_level_residual(const DiscreteAngles& angles, const DiscretePhi& phi, double match_tolerance = 1e-9);

/// Closure defect of the polyline with curvature k + lambda f, per lambda.
/// Throws PreconditionError when the base polyline is not closed within
/// tolerance or the lambda list is empty.
ClosureReport discrete_family_scan(const DiscreteAngles& angles, const DiscretePhi& phi,
                                   const std::vector<double>& lambdas, double tolerance);

/// Exhaustive Gray-code enumeration of nonempty proper subsets of the interior
/// indices whose unit directions sum to (nearly) zero. Sorted by cardinality,
/// then lexicographically. Throws CapExceeded above opts.cap.
BalanceReport find_balanced_subsets(const DiscreteAngles& angles, const BalanceOptions& opts = {});

/// phi_j = amplitude on the subset, 0 elsewhere; f = first differences.
/// Throws ValidationError unless the subset is a nonempty proper balanced
/// subset of {2..N-1}.
DiscretePhi build_discrete_family(const DiscreteAngles& angles, std::span<const std::size_t> subset, double amplitude,
                                  double tolerance = 1e-9);

/// n pairs of unit vectors (e^{i a}, e^{-i a}) with 2 cos a = 1/n, closed by
/// (-1, 0) (odd edge count) or by e^{2 pi i / 3}, e^{4 pi i / 3} (even edge count).
/// Throws ValidationError for n < 1. With n = 1 the even tail is
/// e^{+-2 pi i / 3} = -e^{-+ i pi / 3}, so that instance does have balanced subsets.
Polyline no_balanced_polyline(int n, bool even_tail);

}  // namespace curvfam
