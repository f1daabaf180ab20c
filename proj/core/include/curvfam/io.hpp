#pragma once

// Text formats. Every real number is written with 17 significant digits so
// files round-trip exactly. Readers throw ParseError with the offending line.

#include <iosfwd>
#include <string>
#include <vector>

#include "curvfam/closure_report.hpp"
#include "curvfam/familygen.hpp"
#include "curvfam/fungrid.hpp"
#include "curvfam/polyline.hpp"
#include "curvfam/smoothcurve.hpp"

namespace curvfam::io {

/// "%.17g"
std::string format_real(double x);

/// Header "t,value", one row per node.
void write_csv(std::ostream& out, const SampledFunction& fun);
/// Header "lambda,defect".
void write_csv(std::ostream& out, const ClosureReport& report);
/// Header "root,theta_at_root,abs_phi_prime,partial_sum_re,partial_sum_im".
void write_csv(std::ostream& out, const LevelSetReport& report);

/// Key-value pair file:
///   curvfam-pair 1
///   grid <n>
///   gap_modulus / harmonic / generator / seed / phi_origin / note  (optional)
///   coefficient <j> <a> <b> <abar> <bbar>                          (optional, one per j)
///   k
///   <n values, one per line>
///   f
///   <n values, one per line>
/// Blank lines and lines starting with '#' are ignored.
void write_pair(std::ostream& out, const FamilyPair& pair);
FamilyPair read_pair(std::istream& in);

/// One row "j a_j b_j abar_j bbar_j" per harmonic, j = 0..degree.
void write_coefficients(std::ostream& out, const GappedTrigCurve& curve);
GappedTrigCurve::Coefficients read_coefficients(std::istream& in);

/// One vertex "x y" per line.
void write_polyline(std::ostream& out, const Polyline& p);
Polyline read_polyline(std::istream& in);

/// One value per line.
void write_values(std::ostream& out, const std::vector<double>& values);
std::vector<double> read_values(std::istream& in);

/// {"tolerance": .., "exhaustive": .., "subsets": [{"indices": [..], "residual": ..}],
///  "near_balanced": [..]}
std::string balance_report_json(const BalanceReport& report);

}  // namespace curvfam::io
