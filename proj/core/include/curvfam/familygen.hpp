#pragma once

// Explicit construction of closed-for-every-lambda pairs (k, f).
//
// Recipe: take a trigonometric curve whose Fourier coefficients vanish at every
// multiple of a gap modulus M. Then gamma' is orthogonal to cos(n M t) for all
// n >= 1, and after reparametrizing by arc length (total length 2pi) the pair
//   theta(s) = arg gamma'(t(s)),   phi(s) = g(cos(l t(s))),  l = multiple of M
// has vanishing moments. k = theta', f = phi'.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvfam/closure_report.hpp"
#include "curvfam/errors.hpp"
#include "curvfam/fungrid.hpp"
#include "curvfam/generator.hpp"

namespace curvfam {

/// gamma(t) = ( sum_j a_j cos(jt) + b_j sin(jt),  sum_j abar_j cos(jt) + bbar_j sin(jt) ),
/// j = 0..degree, with every coefficient at a positive multiple of the gap
/// modulus equal to zero.
class GappedTrigCurve {
 public:
  struct Coefficients {
    std::vector<double> a, b, abar, bbar;  // each of length degree + 1
  };

  /// Explicit mode. Throws ValidationError on a gap violation, mismatched
  /// lengths or an irregular parametrization.
  GappedTrigCurve(int gap_modulus, Coefficients coefficients, double regularity_floor = 1e-3);

  int degree() const noexcept { return static_cast<int>(c_.a.size()) - 1; }
  int gap_modulus() const noexcept { return gap_; }
  const Coefficients& coefficients() const noexcept { return c_; }

  std::complex<double> position(double t) const;
  std::complex<double> velocity(double t) const;
  std::complex<double> acceleration(double t) const;
  double speed(double t) const { return std::abs(velocity(t)); }
  /// d(arg gamma')/dt = (x'y'' - y'x'') / |gamma'|^2
  double angular_rate(double t) const;

  /// min |gamma'| / mean |gamma'| on a fine grid.
  double regularity_ratio(std::size_t samples = 4096) const;

  /// int_0^{2pi} gamma'(t) cos(n M t) dt from the coefficients: pi * j * (b_j, bbar_j)
  /// at j = n M, hence zero for a gapped curve.
  std::complex<double> gap_moment_exact(int n) const;
  /// The same integral by Gauss-Legendre quadrature of the analytic integrand.
  std::complex<double> gap_moment_quadrature(int n, std::size_t panels = 512) const;

 private:
  int gap_;
  Coefficients c_;
};

struct CurveSamplingOptions {
  // Stricter than the explicit-mode floor: near-cusp draws need very fine grids.
  double regularity_floor = 0.1;
  int max_attempts = 1000;
};

/// Random mode: coefficients i.i.d. uniform in [-1, 1] times j^{-2}, then
/// gap-zeroed; resampled until the parametrization is regular.
/// Deterministic for a given seed.
GappedTrigCurve make_gapped_curve(int degree, int gap_modulus, std::uint64_t seed,
                                  const CurveSamplingOptions& opts = {});

/// Explicit mode.
GappedTrigCurve make_gapped_curve(int gap_modulus, GappedTrigCurve::Coefficients coefficients,
                                  double regularity_floor = 1e-3);

/// The unit circle (cos t, sin t) scaled by radius.
GappedTrigCurve circle_curve(double radius = 1.0, int gap_modulus = 2);

struct ArcLengthMap {
  double total_length;        // L, before rescaling
  SampledFunction forward;    // s(t) = (2pi / L) int_0^t |gamma'|, on the t-grid
  SampledFunction inverse;    // t(s), on the s-grid
};

/// Throws ValidationError when the curve is not regular.
ArcLengthMap arclength_map(const GappedTrigCurve& curve, std::size_t n_samples);

struct Provenance {
  std::optional<GappedTrigCurve> source;
  int gap_modulus = 0;
  int harmonic = 0;
  std::string generator = "identity";
  std::optional<std::uint64_t> seed;
  /// phi(0): turning_angle(f) recovers phi - phi(0).
  double phi_origin = 0.0;
  std::string note;
};

struct FamilyPair {
  SampledFunction k;
  SampledFunction f;
  Provenance provenance;
};

struct VerifyOptions {
  double scan_tolerance = 1e-7;
  double moment_tolerance = 1e-8;
  int max_moment = 12;
  std::vector<double> lambdas = default_lambda_grid();
};

struct PairVerification {
  ClosureReport scan;
  double max_moment = 0.0;  // max over n <= max_moment of the normalized moment
  bool pass = false;
};

/// family_scan plus normalized moment check.
PairVerification verify_pair(const FamilyPair& pair, const VerifyOptions& opts = {});

/// Verification failed after construction; the grid is too coarse for the curve.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, PairVerification profile)
      : Error(what), profile_(std::move(profile)) {}
  const PairVerification& profile() const noexcept { return profile_; }

 private:
  PairVerification profile_;
};

/// theta(s) = turning angle of gamma at t(s) (rotated so theta(0) = 0),
/// phi(s) = g(cos(l t(s))), k = theta', f = phi' by the chain rule.
/// Throws ValidationError unless l is a positive multiple of the gap modulus,
/// ConstructionError when the result fails verification.
FamilyPair build_pair(const GappedTrigCurve& curve, const ArcLengthMap& map, int harmonic, const Generator& g,
                      const VerifyOptions& opts = {});

/// (k, f) -> (k, f g'(phi)), phi = phi(0) + int_0^s f. Verified like build_pair.
FamilyPair compose_pair(const FamilyPair& pair, const Generator& g, const VerifyOptions& opts = {});

}  // namespace curvfam
