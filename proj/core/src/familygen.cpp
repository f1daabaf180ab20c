#include "curvfam/familygen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "curvfam/roots.hpp"
#include "curvfam/smoothcurve.hpp"

namespace curvfam {

namespace {

using cplx = std::complex<double>;

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t g = 0; g < kGaussNodes.size(); ++g) acc += kGaussWeights[g] * f(mid + half * kGaussNodes[g]);
  return half * acc;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_lengths(const GappedTrigCurve::Coefficients& c) {
  const std::size_t n = c.a.size();
  if (n < 2) throw ValidationError("gapped curve needs degree >= 1");
  if (c.b.size() != n || c.abar.size() != n || c.bbar.size() != n) {
    throw ValidationError("gapped curve coefficient lists differ in length");
  }
}

}  // namespace

GappedTrigCurve::GappedTrigCurve(int gap_modulus, Coefficients coefficients, double regularity_floor)
    : gap_(gap_modulus), c_(std::move(coefficients)) {
  if (gap_ < 2) throw ValidationError("gap modulus must be >= 2, got " + std::to_string(gap_));
  check_lengths(c_);
  for (std::size_t j = 0; j < c_.a.size(); ++j) {
    const bool finite = std::isfinite(c_.a[j]) && std::isfinite(c_.b[j]) && std::isfinite(c_.abar[j]) &&
                        std::isfinite(c_.bbar[j]);
    if (!finite) throw ValidationError("non-finite coefficient at j=" + std::to_string(j));
    if (j > 0 && j % static_cast<std::size_t>(gap_) == 0 &&
        (c_.a[j] != 0.0 || c_.b[j] != 0.0 || c_.abar[j] != 0.0 || c_.bbar[j] != 0.0)) {
      throw ValidationError("coefficients at j=" + std::to_string(j) + " must vanish (multiple of gap modulus " +
                            std::to_string(gap_) + ")");
    }
  }
  const double ratio = regularity_ratio();
  if (!(ratio > regularity_floor)) {
    throw ValidationError("curve is not regular: min/mean speed = " + std::to_string(ratio));
  }
}

cplx GappedTrigCurve::position(double t) const {
  double x = 0.0, y = 0.0;
  for (std::size_t j = 0; j < c_.a.size(); ++j) {
    const double c = std::cos(static_cast<double>(j) * t), s = std::sin(static_cast<double>(j) * t);
    x += c_.a[j] * c + c_.b[j] * s;
    y += c_.abar[j] * c + c_.bbar[j] * s;
  }
  return {x, y};
}

cplx GappedTrigCurve::velocity(double t) const {
  double x = 0.0, y = 0.0;
  for (std::size_t j = 1; j < c_.a.size(); ++j) {
    const double jj = static_cast<double>(j);
    const double c = std::cos(jj * t), s = std::sin(jj * t);
    x += jj * (-c_.a[j] * s + c_.b[j] * c);
    y += jj * (-c_.abar[j] * s + c_.bbar[j] * c);
  }
  return {x, y};
}

cplx GappedTrigCurve::acceleration(double t) const {
  double x = 0.0, y = 0.0;
  for (std::size_t j = 1; j < c_.a.size(); ++j) {
    const double jj = static_cast<double>(j);
    const double c = std::cos(jj * t), s = std::sin(jj * t);
    x -= jj * jj * (c_.a[j] * c + c_.b[j] * s);
    y -= jj * jj * (c_.abar[j] * c + c_.bbar[j] * s);
  }
  return {x, y};
}

double GappedTrigCurve::angular_rate(double t) const {
  const cplx v = velocity(t), acc = acceleration(t);
  return (v.real() * acc.imag() - v.imag() * acc.real()) / std::norm(v);
}

double GappedTrigCurve::regularity_ratio(std::size_t samples) const {
  double lo = std::numeric_limits<double>::infinity(), sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = speed(kTwoPi * static_cast<double>(i) / static_cast<double>(samples));
    lo = std::min(lo, v);
    sum += v;
  }
  const double mean = sum / static_cast<double>(samples);
  return mean > 0.0 ? lo / mean : 0.0;
}

cplx GappedTrigCurve::gap_moment_exact(int n) const {
  const auto j = static_cast<std::size_t>(n) * static_cast<std::size_t>(gap_);
  if (n < 1 || j >= c_.a.size()) return {};
  const double scale = std::numbers::pi * static_cast<double>(j);
  return {scale * c_.b[j], scale * c_.bbar[j]};
}

cplx GappedTrigCurve::gap_moment_quadrature(int n, std::size_t panels) const {
  const double freq = static_cast<double>(n) * gap_;
  const double width = kTwoPi / static_cast<double>(panels);
  double re = 0.0, im = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = width * static_cast<double>(p), hi = lo + width;
    re += gauss_legendre([&](double t) { return velocity(t).real() * std::cos(freq * t); }, lo, hi);
    im += gauss_legendre([&](double t) { return velocity(t).imag() * std::cos(freq * t); }, lo, hi);
  }
  return {re, im};
}

GappedTrigCurve make_gapped_curve(int degree, int gap_modulus, std::uint64_t seed, const CurveSamplingOptions& opts) {
  if (degree < 1) throw ValidationError("degree must be >= 1");
  if (gap_modulus < 2) throw ValidationError("gap modulus must be >= 2, got " + std::to_string(gap_modulus));
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(degree) + 1;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    GappedTrigCurve::Coefficients c{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                                    std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t j = 1; j < n; ++j) {
      const double envelope = 1.0 / static_cast<double>(j * j);
      for (auto* list : {&c.a, &c.b, &c.abar, &c.bbar}) (*list)[j] = envelope * (2.0 * unit_uniform(rng) - 1.0);
      if (j % static_cast<std::size_t>(gap_modulus) == 0) c.a[j] = c.b[j] = c.abar[j] = c.bbar[j] = 0.0;
    }
    try {
      return GappedTrigCurve(gap_modulus, std::move(c), opts.regularity_floor);
    } catch (const ValidationError&) {
      // irregular draw: resample
    }
  }
  throw ValidationError("no regular curve found after " + std::to_string(opts.max_attempts) + " draws");
}

GappedTrigCurve make_gapped_curve(int gap_modulus, GappedTrigCurve::Coefficients coefficients,
                                  double regularity_floor) {
  return GappedTrigCurve(gap_modulus, std::move(coefficients), regularity_floor);
}

GappedTrigCurve circle_curve(double radius, int gap_modulus) {
  return GappedTrigCurve(gap_modulus, {{0.0, radius}, {0.0, 0.0}, {0.0, 0.0}, {0.0, radius}});
}

ArcLengthMap arclength_map(const GappedTrigCurve& curve, std::size_t n_samples) {
  if (!(curve.regularity_ratio() > 0.0)) throw ValidationError("curve is not regular");
  const UniformGrid grid(n_samples);
  const std::size_t n = grid.size();
  const auto speed = [&](double t) { return curve.speed(t); };

  std::vector<double> raw(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) raw[j + 1] = raw[j] + gauss_legendre(speed, grid.node(j), grid.node(j + 1));
  const double length = raw.back();
  const double scale = kTwoPi / length;
  std::vector<double> forward(n);
  for (std::size_t j = 0; j < n; ++j) forward[j] = scale * raw[j];
  forward.back() = kTwoPi;
  for (std::size_t j = 1; j < n; ++j) {
    if (!(forward[j] > forward[j - 1])) throw ValidationError("arc length is not strictly increasing");
  }

  std::vector<double> inverse(n);
  inverse.front() = 0.0;
  inverse.back() = kTwoPi;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double target = grid.node(j);
    const auto it = std::upper_bound(forward.begin(), forward.end(), target);
    const auto cell = static_cast<std::size_t>(it - forward.begin()) - 1;
    if (forward[cell] == target) {
      inverse[j] = grid.node(cell);
      continue;
    }
    const double t0 = grid.node(cell);
    const auto residual = [&](double t) { return forward[cell] + scale * gauss_legendre(speed, t0, t) - target; };
    const auto r = roots::brent(residual, t0, grid.node(cell + 1), 1e-15, 0.0);
    inverse[j] = r ? r->root : 0.5 * (t0 + grid.node(cell + 1));
  }
  return {length, SampledFunction(grid, std::move(forward)), SampledFunction(grid, std::move(inverse))};
}

PairVerification verify_pair(const FamilyPair& pair, const VerifyOptions& opts) {
  const auto theta = turning_angle(pair.k);
  const auto phi = turning_angle(pair.f);
  PairVerification v;
  v.scan = family_scan_angles(theta, phi, opts.lambdas, opts.scan_tolerance);
  v.max_moment = max_normalized_moment(theta, phi, opts.max_moment, MomentOptions{std::max(24, opts.max_moment)});
  v.pass = v.scan.pass && v.max_moment <= opts.moment_tolerance;
  return v;
}

namespace {

void require_verified(const FamilyPair& pair, const VerifyOptions& opts) {
  auto v = verify_pair(pair, opts);
  if (!v.pass) {
    throw ConstructionError("constructed pair failed verification: max defect " + std::to_string(v.scan.max_defect) +
                                ", max moment " + std::to_string(v.max_moment) +
                                " (grid too coarse for this curve?)",
                            std::move(v));
  }
}

}  // namespace

FamilyPair build_pair(const GappedTrigCurve& curve, const ArcLengthMap& map, int harmonic, const Generator& g,
                      const VerifyOptions& opts) {
  if (harmonic < 1 || harmonic % curve.gap_modulus() != 0) {
    throw ValidationError("harmonic " + std::to_string(harmonic) + " is not a positive multiple of the gap modulus " +
                          std::to_string(curve.gap_modulus()));
  }
  if (!g.defined_at(-1.0) || !g.defined_at(1.0)) throw DomainError("generator must be defined on [-1, 1]");

  const auto& grid = map.inverse.grid();
  const std::size_t n = grid.size();
  const double l = harmonic;
  const double ds_dt_scale = kTwoPi / map.total_length;

  std::vector<double> k(n), f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = map.inverse[j];
    const double dt_ds = 1.0 / (ds_dt_scale * curve.speed(t));
    k[j] = curve.angular_rate(t) * dt_ds;
    const double c = std::cos(l * t);
    f[j] = g.derivative(c) * (-l * std::sin(l * t)) * dt_ds;
  }

  Provenance prov;
  prov.source = curve;
  prov.gap_modulus = curve.gap_modulus();
  prov.harmonic = harmonic;
  prov.generator = g.describe();
  prov.phi_origin = g(1.0);
  FamilyPair pair{SampledFunction(grid, std::move(k)), SampledFunction(grid, std::move(f)), std::move(prov)};
  require_verified(pair, opts);
  return pair;
}

FamilyPair compose_pair(const FamilyPair& pair, const Generator& g, const VerifyOptions& opts) {
  const auto phi = turning_angle(pair.f);
  const double origin = pair.provenance.phi_origin;
  std::vector<double> f(pair.f.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = pair.f[j] * g.derivative(origin + phi[j]);

  FamilyPair out{pair.k, SampledFunction(pair.f.grid(), std::move(f)), pair.provenance};
  out.provenance.generator = g.describe() + " o " + pair.provenance.generator;
  out.provenance.phi_origin = g(origin);
  require_verified(out, opts);
  return out;
}

}  // namespace curvfam
