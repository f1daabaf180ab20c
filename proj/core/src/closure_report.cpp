#include "curvfam/closure_report.hpp"

#include <algorithm>
#include <cmath>

#include "curvfam/errors.hpp"

namespace curvfam {

ClosureReport ClosureReport::make(std::vector<double> lambdas, std::vector<double> defects, double tolerance) {
  ClosureReport r;
  r.lambda_values = std::move(lambdas);
  r.defects = std::move(defects);
  r.tolerance = tolerance;
  r.max_defect = r.defects.empty() ? 0.0 : *std::max_element(r.defects.begin(), r.defects.end());
  r.pass = r.max_defect <= tolerance;
  return r;
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("lambda step must be positive");
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("lambda range must satisfy min <= max");
  }
  std::vector<double> out;
  const double guard = 1e-9 * step;
  for (long k = 0;; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    if (v > hi + guard) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> default_lambda_grid() { return lambda_grid(-5.0, 5.0, 0.5); }

}  // namespace curvfam
