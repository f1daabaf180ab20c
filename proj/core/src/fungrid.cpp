#include "curvfam/fungrid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "curvfam/errors.hpp"
#include "curvfam/roots.hpp"

namespace curvfam {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Lagrange basis polynomial k on the integer nodes 0..m-1, evaluated at x.
double lagrange_basis(int m, int k, double x) {
  double v = 1.0;
  for (int q = 0; q < m; ++q) {
    if (q != k) v *= (x - q) / static_cast<double>(k - q);
  }
  return v;
}

// table[p][k] = int_p^{p+1} L_k(x) dx for an m-node stencil; exact for m <= 16.
template <std::size_t M>
std::array<std::array<double, M>, M - 1> cell_integrals() {
  std::array<std::array<double, M>, M - 1> table{};
  for (std::size_t p = 0; p + 1 < M; ++p) {
    for (std::size_t k = 0; k < M; ++k) {
      double acc = 0.0;
      for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        const double x = static_cast<double>(p) + 0.5 * (kGaussNodes[g] + 1.0);
        acc += 0.5 * kGaussWeights[g] * lagrange_basis(static_cast<int>(M), static_cast<int>(k), x);
      }
      table[p][k] = acc;
    }
  }
  return table;
}

const auto& quintic_cells() {
  static const auto table = cell_integrals<6>();
  return table;
}

const auto& cubic_cells() {
  static const auto table = cell_integrals<4>();
  return table;
}

// First node of the m-point stencil serving cell i (between nodes i and i+1).
std::size_t stencil_start(std::size_t i, std::size_t n, std::size_t m) {
  const std::size_t half = m / 2 - 1;
  return std::min(i >= half ? i - half : 0, n - m);
}

template <std::size_t M>
std::vector<double> node_weights(const std::array<std::array<double, M>, M - 1>& table, std::size_t n, double h) {
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t s = stencil_start(i, n, M);
    const std::size_t p = i - s;
    for (std::size_t k = 0; k < M; ++k) w[s + k] += h * table[p][k];
  }
  return w;
}

// Neumaier-compensated accumulator.
template <class T>
struct CompensatedSum {
  T sum{};
  T comp{};
  void add(T x) {
    if constexpr (std::is_same_v<T, double>) {
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    } else {
      const T t = sum + x;
      const auto fix = [](double s, double v, double tt) {
        return std::abs(s) >= std::abs(v) ? (s - tt) + v : (v - tt) + s;
      };
      comp += T(fix(sum.real(), x.real(), t.real()), fix(sum.imag(), x.imag(), t.imag()));
      sum = t;
    }
  }
  T value() const { return sum + comp; }
};

template <class T>
T weighted_sum(std::span<const double> w, std::span<const T> v) {
  CompensatedSum<T> acc;
  for (std::size_t j = 0; j < v.size(); ++j) acc.add(w[j] * v[j]);
  return acc.value();
}

template <class T>
std::vector<T> cumulative_impl(const UniformGrid& grid, std::span<const T> f) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const auto& table = quintic_cells();
  std::vector<T> out(n);
  CompensatedSum<T> acc;
  out[0] = T{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t s = stencil_start(i, n, 6);
    const std::size_t p = i - s;
    T cell{};
    for (std::size_t k = 0; k < 6; ++k) cell += table[p][k] * f[s + k];
    acc.add(h * cell);
    out[i + 1] = acc.value();
  }
  return out;
}

void require_same_grid(const UniformGrid& grid, std::size_t size) {
  if (grid.size() != size) {
    throw ValidationError("node data has " + std::to_string(size) + " values, grid has " +
                          std::to_string(grid.size()));
  }
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> spectral_derivative(std::span<const double> values) {
  // Period samples are nodes 0..n-2; node n-1 duplicates node 0.
  const std::size_t m = values.size() - 1;
  const std::size_t half = m / 2 + 1;
  std::vector<double> in(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<double> out(m);
  auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half));
  fftw_plan forward, backward;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(), spec, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec, out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < half; ++k) {
    // multiply by i k; the Nyquist mode of an even-length transform is dropped
    const double wave = (m % 2 == 0 && k == m / 2) ? 0.0 : static_cast<double>(k);
    const double re = spec[k][0], im = spec[k][1];
    spec[k][0] = -wave * im * scale;
    spec[k][1] = wave * re * scale;
  }
  fftw_execute(backward);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_free(spec);
  out.push_back(out.front());
  return out;
}

std::vector<double> finite_difference_derivative(std::span<const double> values, double h) {
  constexpr std::size_t kWidth = 9;
  const std::size_t n = values.size();
  std::array<double, kWidth> xs{};
  for (std::size_t q = 0; q < kWidth; ++q) xs[q] = static_cast<double>(q);
  std::array<std::array<double, kWidth>, kWidth> stencils{};
  for (std::size_t pos = 0; pos < kWidth; ++pos) {
    const auto w = detail::fd_weights(static_cast<double>(pos), xs, 1);
    for (std::size_t q = 0; q < kWidth; ++q) stencils[pos][q] = w[1][q] / h;
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t s = std::min(j >= 4 ? j - 4 : 0, n - kWidth);
    const auto& w = stencils[j - s];
    double acc = 0.0;
    for (std::size_t q = 0; q < kWidth; ++q) acc += w[q] * values[s + q];
    out[j] = acc;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// UniformGrid / SampledFunction

UniformGrid::UniformGrid(std::size_t n_samples) : n_(n_samples) {
  if (n_samples < kMinSamples) {
    throw ValidationError("grid needs at least " + std::to_string(kMinSamples) + " samples, got " +
                          std::to_string(n_samples));
  }
  h_ = kTwoPi / static_cast<double>(n_ - 1);
  auto tables = std::make_shared<Tables>();
  tables->weights = node_weights(quintic_cells(), n_, h_);
  tables->coarse_weights = node_weights(cubic_cells(), n_, h_);
  tables_ = std::move(tables);
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> t(n_);
  for (std::size_t j = 0; j < n_; ++j) t[j] = node(j);
  return t;
}

SampledFunction::SampledFunction(UniformGrid grid, std::vector<double> values, bool periodic_hint)
    : grid_(std::move(grid)), values_(std::move(values)), periodic_(periodic_hint) {
  require_same_grid(grid_, values_.size());
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j])) {
      throw ValidationError("non-finite sample at node " + std::to_string(j));
    }
  }
  if (periodic_ && std::abs(values_.front() - values_.back()) > periodicity_tolerance()) {
    throw ValidationError("periodic_hint set but endpoint values differ");
  }
}

double SampledFunction::sup_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double SampledFunction::periodicity_tolerance() const noexcept { return 1e-9 * std::max(1.0, sup_norm()); }

// ---------------------------------------------------------------------------
// Evaluation and quadrature

double eval(const SampledFunction& fun, double t) {
  const double slack = 8.0 * kEps * kTwoPi;
  if (!(t >= -slack && t <= kTwoPi + slack)) {
    throw DomainError("evaluation point " + std::to_string(t) + " outside [0, 2pi]");
  }
  t = std::clamp(t, 0.0, kTwoPi);
  const std::size_t n = fun.size();
  const double h = fun.grid().spacing();
  const auto nearest = std::min(static_cast<std::size_t>(std::lround(t / h)), n - 1);
  if (fun.grid().node(nearest) == t) return fun[nearest];
  const auto cell = std::min(static_cast<std::size_t>(t / h), n - 2);
  const std::size_t s = stencil_start(cell, n, 6);
  const double x = t / h - static_cast<double>(s);
  double acc = 0.0;
  for (int k = 0; k < 6; ++k) {
    if (x == static_cast<double>(k)) return fun[s + k];
    acc += lagrange_basis(6, k, x) * fun[s + k];
  }
  return acc;
}

double integrate_nodes(const UniformGrid& grid, std::span<const double> values) {
  require_same_grid(grid, values.size());
  return weighted_sum(grid.quadrature_weights(), values);
}

std::complex<double> integrate_nodes(const UniformGrid& grid, std::span<const std::complex<double>> values) {
  require_same_grid(grid, values.size());
  return weighted_sum(grid.quadrature_weights(), values);
}

QuadratureResult integrate_with_estimate(const SampledFunction& fun) {
  const auto& grid = fun.grid();
  const auto v = fun.values();
  const double panel = weighted_sum(grid.quadrature_weights(), v);
  double magnitude = 0.0;
  const auto w = grid.quadrature_weights();
  for (std::size_t j = 0; j < v.size(); ++j) magnitude += std::abs(w[j] * v[j]);
  const double floor = 16.0 * kEps * magnitude;

  if (fun.periodic_hint()) {
    CompensatedSum<double> acc;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) acc.add(v[j]);
    // endpoints carry half weight; together they make one full sample
    const double trap = grid.spacing() * (acc.value() - 0.5 * v.front() + 0.5 * v.back());
    return {trap, std::abs(trap - panel) + floor};
  }
  const double coarse = weighted_sum(grid.coarse_quadrature_weights(), v);
  return {panel, std::abs(panel - coarse) + floor};
}

double integrate(const SampledFunction& fun) { return integrate_with_estimate(fun).value; }

SampledFunction cumulative(const SampledFunction& fun) {
  return SampledFunction(fun.grid(), cumulative_impl<double>(fun.grid(), fun.values()));
}

std::vector<std::complex<double>> cumulative_nodes(const UniformGrid& grid,
                                                   std::span<const std::complex<double>> values) {
  require_same_grid(grid, values.size());
  return cumulative_impl<std::complex<double>>(grid, values);
}

SampledFunction derivative(const SampledFunction& fun) {
  if (fun.periodic_hint()) {
    auto d = spectral_derivative(fun.values());
    return SampledFunction(fun.grid(), std::move(d), true);
  }
  return SampledFunction(fun.grid(), finite_difference_derivative(fun.values(), fun.grid().spacing()));
}

// ---------------------------------------------------------------------------
// Level sets

LevelCrossings find_level_crossings(const SampledFunction& fun, double a, const LevelOptions& opts) {
  return find_level_crossings(fun, derivative(fun), a, opts);
}

LevelCrossings find_level_crossings(const SampledFunction& fun, const SampledFunction& fun_prime, double a,
                                    const LevelOptions& opts) {
  const std::size_t n = fun.size();
  const double scale = std::max(1.0, fun.sup_norm());
  const double value_tol = 1e-10 * scale;
  const double sup_slope = fun_prime.sup_norm();
  const double slope_floor = opts.critical_band * sup_slope;

  LevelCrossings result{a, {}, false};
  result.boundary_value = std::abs(a - fun.front()) <= value_tol || std::abs(a - fun.back()) <= value_tol;

  if (sup_slope == 0.0) {
    if (std::abs(fun.front() - a) <= value_tol) {
      throw CriticalValue("level is attained by a constant function", a);
    }
    return result;
  }

  const auto g = [&](double t) { return eval(fun, t) - a; };
  const auto slope = [&](double t) { return eval(fun_prime, t); };
  const double h = fun.grid().spacing();

  std::vector<double> found;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double tl = fun.grid().node(i), tr = fun.grid().node(i + 1);
    std::array<double, 3> pts{tl, tr, tr};
    std::size_t npts = 2;

    const double dl = fun_prime[i], dr = fun_prime[i + 1];
    if ((dl > 0.0 && dr < 0.0) || (dl < 0.0 && dr > 0.0)) {
      // interior extremum: it may hide a pair of crossings or a tangency
      const auto ext = roots::brent(slope, tl, tr);
      if (ext && ext->root > tl && ext->root < tr) {
        const double t_star = ext->root;
        const double g_star = g(t_star);
        const double curvature = std::abs(dr - dl) / h;
        // a crossing pair near the extremum has slopes ~ sqrt(2 |g''| |g*|)
        const double touch = curvature > 0.0 ? slope_floor * slope_floor / (2.0 * curvature) : value_tol;
        if (std::abs(g_star) <= std::max(touch, value_tol * kEps)) {
          throw CriticalValue("level touches a local extremum at t=" + std::to_string(t_star), a);
        }
        pts = {tl, t_star, tr};
        npts = 3;
      }
    }

    for (std::size_t q = 0; q + 1 < npts; ++q) {
      const double ga = g(pts[q]), gb = g(pts[q + 1]);
      if (ga == 0.0) {
        found.push_back(pts[q]);
        continue;
      }
      if ((ga > 0.0) == (gb > 0.0) && gb != 0.0) continue;
      const auto r = roots::brent(g, pts[q], pts[q + 1], 0.0, 0.0);
      if (r) found.push_back(r->root);
    }
  }

  std::sort(found.begin(), found.end());
  double min_slope = std::numeric_limits<double>::infinity();
  for (double t : found) {
    if (t <= opts.merge_distance || t >= kTwoPi - opts.merge_distance) continue;
    if (!result.roots.empty() && t - result.roots.back().t <= opts.merge_distance) continue;
    const double d = slope(t);
    min_slope = std::min(min_slope, std::abs(d));
    result.roots.push_back({t, d});
  }
  if (!result.roots.empty() && min_slope < slope_floor) {
    throw CriticalValue("level is within the near-critical band (min |f'| = " + std::to_string(min_slope) + ")",
                        a);
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace detail {

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> xs, int max_order) {
  const std::size_t n = xs.size();
  const auto m = static_cast<std::size_t>(max_order);
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace detail

}  // namespace curvfam
