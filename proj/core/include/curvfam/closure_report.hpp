#pragma once

#include <vector>

namespace curvfam {

/// Closure defects of a one-parameter family, one per lambda.
struct ClosureReport {
  std::vector<double> lambda_values;
  std::vector<double> defects;
  double max_defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  /// Fills max_defect and the verdict (pass iff max_defect <= tolerance).
  static ClosureReport make(std::vector<double> lambdas, std::vector<double> defects, double tolerance);
};

/// {lo, lo + step, ...} up to hi inclusive (with a half-step rounding guard).
/// Throws ValidationError unless step > 0 and lo <= hi.
std::vector<double> lambda_grid(double lo, double hi, double step);

/// The verification grid {-5, -4.5, ..., 5}.
std::vector<double> default_lambda_grid();

}  // namespace curvfam
