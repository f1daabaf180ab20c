#include "curvfam/smoothcurve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvfam/errors.hpp"

namespace curvfam {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_compatible(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid() == b.grid())) {
    throw ValidationError("functions live on different grids (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + " samples)");
  }
}

void require_order(int n, const MomentOptions& opts) {
  if (n < 0 || n > opts.max_order) {
    throw PreconditionError("moment order " + std::to_string(n) + " outside 0.." + std::to_string(opts.max_order));
  }
}

// value * scale^n with the power applied on the binary exponent separately.
cplx rescale(cplx value, double scale, int n) {
  int e = 0;
  const double mant = std::frexp(scale, &e);
  const double m = std::pow(mant, n);
  return {std::ldexp(value.real() * m, e * n), std::ldexp(value.imag() * m, e * n)};
}

// int e^{i theta} (values / scale)^n, scale = sup |values|.
struct ScaledMoment {
  cplx normalized;
  double scale;
};

ScaledMoment scaled_moment(const SampledFunction& theta, std::span<const double> values, int n) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  std::vector<cplx> integrand(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double base = (n == 0) ? 1.0 : (scale > 0.0 ? std::pow(values[j] / scale, n) : 0.0);
    integrand[j] = base * std::polar(1.0, theta[j]);
  }
  return {integrate_nodes(theta.grid(), integrand), scale};
}

double distance_to_lattice(double x, double period) {
  const double r = std::remainder(x, period);
  return std::abs(r);
}

struct EndpointDerivatives {
  std::vector<double> left, right;  // orders 1..h
  std::vector<double> noise;        // rounding bound per order, max over both ends
};

// One-sided sixth-order derivative stencils at both ends of the interval.
EndpointDerivatives endpoint_derivatives(const SampledFunction& fun, int h) {
  const std::size_t n = fun.size();
  const double spacing = fun.grid().spacing();
  // stride keeps the stencil spacing near 2pi/1024, where truncation and
  // rounding errors of the high-order stencils balance
  const double target = kTwoPi / 1024.0;
  std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(target / spacing)));

  EndpointDerivatives out;
  for (int k = 1; k <= h; ++k) {
    const auto width = static_cast<std::size_t>(k + 6);
    if (width > n) {
      throw PreconditionError("grid of " + std::to_string(n) + " samples too coarse for derivative order " +
                              std::to_string(k));
    }
    const std::size_t s = std::min(stride, (n - 1) / (width - 1));
    std::vector<double> xs(width);
    for (std::size_t q = 0; q < width; ++q) xs[q] = static_cast<double>(q * s) * spacing;
    const auto w = detail::fd_weights(0.0, xs, k);
    double left = 0.0, right = 0.0, wsum = 0.0, fmax = 0.0;
    for (std::size_t q = 0; q < width; ++q) {
      const double wl = w[static_cast<std::size_t>(k)][q];
      // mirrored stencil: nodes at 2pi - x_q, weights pick up (-1)^k
      const double wr = (k % 2 == 0) ? wl : -wl;
      left += wl * fun[q * s];
      right += wr * fun[n - 1 - q * s];
      wsum += std::abs(wl);
      fmax = std::max({fmax, std::abs(fun[q * s]), std::abs(fun[n - 1 - q * s])});
    }
    out.left.push_back(left);
    out.right.push_back(right);
    out.noise.push_back(8.0 * kEps * wsum * std::max(1.0, fmax));
  }
  return out;
}

}  // namespace

const char* to_string(BoundaryBranch b) noexcept {
  switch (b) {
    case BoundaryBranch::Even:
      return "even";
    case BoundaryBranch::Odd:
      return "odd";
    case BoundaryBranch::Violation:
      return "violation";
  }
  return "violation";
}

std::vector<cplx> LevelSetReport::partial_sums() const {
  std::vector<cplx> out;
  out.reserve(roots.size());
  cplx acc{};
  for (const auto& r : roots) {
    acc += std::polar(1.0 / r.abs_phi_prime, r.theta);
    out.push_back(acc);
  }
  return out;
}

SampledFunction turning_angle(const SampledFunction& k) { return cumulative(k); }

PlanarCurveSamples curve_from_angle(const SampledFunction& theta) {
  std::vector<cplx> tangent(theta.size());
  for (std::size_t j = 0; j < tangent.size(); ++j) tangent[j] = std::polar(1.0, theta[j]);
  return {theta.grid(), cumulative_nodes(theta.grid(), tangent)};
}

double closure_defect(const SampledFunction& theta) {
  std::vector<cplx> tangent(theta.size());
  for (std::size_t j = 0; j < tangent.size(); ++j) tangent[j] = std::polar(1.0, theta[j]);
  return std::abs(integrate_nodes(theta.grid(), tangent));
}

cplx f_of_lambda(const SampledFunction& theta, const SampledFunction& phi, double lambda) {
  require_compatible(theta, phi);
  std::vector<cplx> integrand(theta.size());
  for (std::size_t j = 0; j < integrand.size(); ++j) integrand[j] = std::polar(1.0, theta[j] + lambda * phi[j]);
  return integrate_nodes(theta.grid(), integrand);
}

cplx moment(const SampledFunction& theta, const SampledFunction& phi, int n, const MomentOptions& opts) {
  require_compatible(theta, phi);
  require_order(n, opts);
  const auto m = scaled_moment(theta, phi.values(), n);
  if (n == 0) return m.normalized;
  if (m.scale == 0.0) return {};
  return rescale(m.normalized, m.scale, n);
}

double normalized_moment(const SampledFunction& theta, const SampledFunction& phi, int n, const MomentOptions& opts) {
  require_compatible(theta, phi);
  require_order(n, opts);
  return std::abs(scaled_moment(theta, phi.values(), n).normalized);
}

double max_normalized_moment(const SampledFunction& theta, const SampledFunction& phi, int n_max,
                             const MomentOptions& opts) {
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) worst = std::max(worst, normalized_moment(theta, phi, n, opts));
  return worst;
}

cplx series_coefficient(const SampledFunction& theta, const SampledFunction& phi, int n, const MomentOptions& opts) {
  static constexpr cplx kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx m = moment(theta, phi, n, opts);
  return kPowersOfI[n % 4] * m / std::tgamma(static_cast<double>(n) + 1.0);
}

cplx composed_moment(const SampledFunction& theta, const SampledFunction& phi, const Generator& g, int n,
                     const MomentOptions& opts) {
  require_compatible(theta, phi);
  require_order(n, opts);
  std::vector<double> composed(phi.size());
  for (std::size_t j = 0; j < composed.size(); ++j) composed[j] = g(phi[j]);
  const auto m = scaled_moment(theta, composed, n);
  if (n == 0) return m.normalized;
  if (m.scale == 0.0) return {};
  return rescale(m.normalized, m.scale, n);
}

LevelSetReport level_set_condition(const SampledFunction& theta, const SampledFunction& phi, double a,
                                   const LevelOptions& opts) {
  require_compatible(theta, phi);
  const auto crossings = find_level_crossings(phi, a, opts);
  LevelSetReport report;
  report.level = a;
  report.boundary_excluded = !crossings.boundary_value;
  for (const auto& c : crossings.roots) {
    const double th = eval(theta, c.t);
    const double slope = std::abs(c.derivative);
    report.roots.push_back({c.t, th, slope});
    report.weighted_sum += std::polar(1.0 / slope, th);
  }
  return report;
}

ClosureReport family_scan_angles(const SampledFunction& theta, const SampledFunction& phi,
                                 const std::vector<double>& lambdas, double tolerance) {
  require_compatible(theta, phi);
  if (lambdas.empty()) throw PreconditionError("family scan needs at least one lambda");
  std::vector<double> defects(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) defects[i] = std::abs(f_of_lambda(theta, phi, lambdas[i]));
  return ClosureReport::make(lambdas, std::move(defects), tolerance);
}

ClosureReport family_scan(const SampledFunction& k, const SampledFunction& f, const std::vector<double>& lambdas,
                          double tolerance) {
  return family_scan_angles(turning_angle(k), turning_angle(f), lambdas, tolerance);
}

BoundaryReport boundary_check(const SampledFunction& theta, const SampledFunction& phi, int h, double tolerance) {
  require_compatible(theta, phi);
  if (h < 1) throw PreconditionError("boundary check needs derivative order h >= 1");

  const auto dphi = endpoint_derivatives(phi, h);
  const auto dtheta = h > 1 ? endpoint_derivatives(theta, h - 1) : EndpointDerivatives{};

  const double sup_slope = derivative(phi).sup_norm();
  if (std::abs(dphi.left[0]) < LevelOptions{}.critical_band * sup_slope || sup_slope == 0.0) {
    throw CriticalValue("phi(0) is a critical value of phi", phi.front());
  }

  BoundaryReport report;
  report.phi_endpoint_match = std::abs(phi.front() - phi.back()) <= tolerance;
  report.theta_gap = theta.back() - theta.front();

  std::vector<double> even(static_cast<std::size_t>(h)), odd(static_cast<std::size_t>(h));
  for (int k = 1; k <= h; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double tol_k = tolerance + dphi.noise[i];
    double e = std::abs(dphi.left[i] - dphi.right[i]);
    double o = std::abs(dphi.left[i] - sign * dphi.right[i]);
    if (k < h) {
      tol_k = std::max(tol_k, tolerance + dtheta.noise[i]);
      e = std::max(e, std::abs(dtheta.left[i] - dtheta.right[i]));
      o = std::max(o, std::abs(dtheta.left[i] - sign * dtheta.right[i]));
    }
    even[i] = e;
    odd[i] = o;
    report.residual_tolerances.push_back(tol_k);
  }

  const auto within = [&](const std::vector<double>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] <= report.residual_tolerances[i])) return false;
    }
    return true;
  };
  const double gap_even = distance_to_lattice(report.theta_gap, kTwoPi);
  const double gap_odd = distance_to_lattice(report.theta_gap - std::numbers::pi, kTwoPi);
  report.even_max_residual = *std::max_element(even.begin(), even.end());
  report.odd_max_residual = *std::max_element(odd.begin(), odd.end());

  const bool even_ok = report.phi_endpoint_match && gap_even <= tolerance && within(even);
  const bool odd_ok = report.phi_endpoint_match && gap_odd <= tolerance && within(odd);

  if (even_ok && (!odd_ok || report.even_max_residual <= report.odd_max_residual)) {
    report.branch = BoundaryBranch::Even;
    report.derivative_residuals = even;
  } else if (odd_ok) {
    report.branch = BoundaryBranch::Odd;
    report.derivative_residuals = odd;
  } else {
    report.branch = BoundaryBranch::Violation;
    report.derivative_residuals = gap_even <= gap_odd ? even : odd;
  }
  return report;
}

}  // namespace curvfam
