#pragma once

// Calculus on real functions sampled on a uniform grid over [0, 2pi].
//
// The grid is closed: both endpoints are nodes. Functions are interpolated by
// local quintic polynomials (six-node Lagrange stencils), integrated by
// Gauss-Legendre panels applied to that interpolant, and differentiated either
// spectrally (periodic data) or by eighth-order finite differences.

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace curvfam {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class UniformGrid {
 public:
  static constexpr std::size_t kMinSamples = 16;

  /// Throws ValidationError when n_samples < kMinSamples.
  explicit UniformGrid(std::size_t n_samples);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  /// t_j = 2pi j / (n - 1); the last node is exactly 2pi.
  double node(std::size_t j) const noexcept {
    return j + 1 == n_ ? kTwoPi : kTwoPi * static_cast<double>(j) / static_cast<double>(n_ - 1);
  }
  std::vector<double> nodes() const;

  /// Node weights of the composite quadrature: integral ~= sum_j w_j f_j.
  std::span<const double> quadrature_weights() const noexcept { return tables_->weights; }
  /// Cubic-panel weights of the same grid; the difference to the quintic rule
  /// serves as an error estimate.
  std::span<const double> coarse_quadrature_weights() const noexcept { return tables_->coarse_weights; }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) noexcept { return a.n_ == b.n_; }

 private:
  struct Tables {
    std::vector<double> weights;        // quintic panels
    std::vector<double> coarse_weights; // cubic panels, used for error estimates
  };
  std::size_t n_;
  double h_;
  std::shared_ptr<const Tables> tables_;
};

class SampledFunction {
 public:
  /// Values must be finite. With periodic_hint the endpoint values must agree
  /// to within periodicity_tolerance(); otherwise ValidationError.
  SampledFunction(UniformGrid grid, std::vector<double> values, bool periodic_hint = false);

  template <class F>
  static SampledFunction sample(const UniformGrid& grid, F&& fn, bool periodic_hint = false) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
    return SampledFunction(grid, std::move(v), periodic_hint);
  }
  static SampledFunction constant(const UniformGrid& grid, double c, bool periodic_hint = true) {
    return SampledFunction(grid, std::vector<double>(grid.size(), c), periodic_hint);
  }

  const UniformGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }
  bool periodic_hint() const noexcept { return periodic_; }

  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }
  double sup_norm() const noexcept;
  double periodicity_tolerance() const noexcept;

 private:
  UniformGrid grid_;
  std::vector<double> values_;
  bool periodic_;
};

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Interpolated value at t in [0, 2pi]; exact at the nodes.
/// Throws DomainError outside the interval.
double eval(const SampledFunction& fun, double t);

/// Integral over [0, 2pi]. Trapezoid rule when periodic_hint is set, quintic
/// Gauss-Legendre panels otherwise.
double integrate(const SampledFunction& fun);
QuadratureResult integrate_with_estimate(const SampledFunction& fun);

/// Panel quadrature of arbitrary node data on the grid (used for the complex
/// moment integrands, which are periodic only conditionally).
double integrate_nodes(const UniformGrid& grid, std::span<const double> values);
std::complex<double> integrate_nodes(const UniformGrid& grid, std::span<const std::complex<double>> values);

/// F(t) = int_0^t fun, sampled on the same grid. F(0) = 0.
SampledFunction cumulative(const SampledFunction& fun);
std::vector<std::complex<double>> cumulative_nodes(const UniformGrid& grid,
                                                   std::span<const std::complex<double>> values);

/// Spectral derivative when periodic_hint is set, eighth-order finite
/// differences (one-sided near the endpoints) otherwise.
SampledFunction derivative(const SampledFunction& fun);

struct LevelCrossing {
  double t;           // root of fun(t) = a in (0, 2pi)
  double derivative;  // fun'(t)
};

struct LevelCrossings {
  double level;
  std::vector<LevelCrossing> roots;  // sorted by t
  bool boundary_value;               // level equals fun(0) or fun(2pi)
};

struct LevelOptions {
  /// Level rejected when min |fun'| over candidate roots < band * sup |fun'|.
  double critical_band = 1e-6;
  /// Polishing target for |fun(t) - a|.
  double residual_tolerance = 1e-12;
  /// Roots closer than this are merged.
  double merge_distance = 1e-10;
};

/// All solutions of fun(t) = a in the open interval (0, 2pi).
/// Throws CriticalValue when a is (numerically) a critical value of fun.
LevelCrossings find_level_crossings(const SampledFunction& fun, double a, const LevelOptions& opts = {});

/// Same, reusing an already computed derivative of fun.
LevelCrossings find_level_crossings(const SampledFunction& fun, const SampledFunction& fun_prime, double a,
                                    const LevelOptions& opts = {});

namespace detail {

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at x0
/// from the given abscissae. Result indexed [order][node].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> xs, int max_order);

}  // namespace detail

}  // namespace curvfam
