#include "curvfam/polyline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numbers>
#include <string>
#include <thread>

#include "curvfam/errors.hpp"

namespace curvfam {

namespace {

using cplx = std::complex<double>;

constexpr double kUnitEdgeTolerance = 1e-12;
// Gray-code runs are restarted from a direct sum every 2^kBlockBits subsets
// so rounding in the running sum stays near machine precision.
constexpr unsigned kBlockBits = 14;

void require_finite(const std::vector<double>& v, const char* what) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j])) {
      throw ValidationError(std::string(what) + " entry " + std::to_string(j + 2) + " is not finite");
    }
  }
}

void require_matching(const DiscreteAngles& angles, const DiscretePhi& phi) {
  if (angles.interior() != phi.interior()) {
    throw ValidationError("angle and phi vectors differ in length (" + std::to_string(angles.interior()) + " vs " +
                          std::to_string(phi.interior()) + ")");
  }
}

std::vector<cplx> directions(const DiscreteAngles& angles) {
  std::vector<cplx> u(angles.interior());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::polar(1.0, angles.turning()[j]);
  return u;
}

cplx subset_sum(const std::vector<cplx>& u, std::uint64_t mask) {
  cplx acc{};
  for (std::size_t j = 0; j < u.size(); ++j) {
    if ((mask >> j) & 1U) acc += u[j];
  }
  return acc;
}

std::vector<std::size_t> mask_indices(std::uint64_t mask, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m; ++j) {
    if ((mask >> j) & 1U) out.push_back(j + 2);
  }
  return out;
}

// Enumerates the masks hi << low_bits | gray(i) for every block hi in
// [first, last), collecting those whose running sum is within the limit.
void scan_blocks(const std::vector<cplx>& u, unsigned low_bits, std::uint64_t first, std::uint64_t last,
                 double limit, std::vector<std::uint64_t>& hits) {
  const std::uint64_t block = std::uint64_t{1} << low_bits;
  for (std::uint64_t hi = first; hi < last; ++hi) {
    std::uint64_t mask = hi << low_bits;
    cplx acc = subset_sum(u, mask);
    if (std::abs(acc) <= limit) hits.push_back(mask);
    for (std::uint64_t i = 1; i < block; ++i) {
      const auto bit = static_cast<unsigned>(std::countr_zero(i));
      const std::uint64_t flip = std::uint64_t{1} << bit;
      if (mask & flip) {
        acc -= u[bit];
      } else {
        acc += u[bit];
      }
      mask ^= flip;
      if (std::abs(acc) <= limit) hits.push_back(mask);
    }
  }
}

bool subset_less(const BalancedSubset& a, const BalancedSubset& b) {
  if (a.indices.size() != b.indices.size()) return a.indices.size() < b.indices.size();
  return a.indices < b.indices;
}

}  // namespace

CapExceeded::CapExceeded(std::size_t size, std::size_t cap)
    : Error(std::to_string(size) + " interior vertices exceed the exhaustive search cap of " + std::to_string(cap) +
            " (raise it with --subset-cap)"),
      size_(size),
      cap_(cap) {}

Polyline::Polyline(std::vector<cplx> vertices) : v_(std::move(vertices)) {
  if (v_.size() < 3) throw ValidationError("a polyline needs at least 3 vertices");
  for (std::size_t j = 0; j < v_.size(); ++j) {
    if (!std::isfinite(v_[j].real()) || !std::isfinite(v_[j].imag())) {
      throw ValidationError("vertex " + std::to_string(j + 1) + " is not finite");
    }
  }
  for (std::size_t j = 0; j + 1 < v_.size(); ++j) {
    const double len = std::abs(v_[j + 1] - v_[j]);
    if (std::abs(len - 1.0) > kUnitEdgeTolerance) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", len);
      throw ValidationError("edge " + std::to_string(j + 1) + " has length " + buf + ", expected 1");
    }
  }
}

Polyline Polyline::from_edges(std::span<const cplx> edges) {
  std::vector<cplx> v(edges.size() + 1);
  for (std::size_t j = 0; j < edges.size(); ++j) v[j + 1] = v[j] + edges[j];
  return Polyline(std::move(v));
}

std::vector<cplx> Polyline::edges() const {
  std::vector<cplx> e(v_.size() - 1);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = v_[j + 1] - v_[j];
  return e;
}

DiscreteAngles DiscreteAngles::from_curvature(std::vector<double> k) {
  require_finite(k, "curvature");
  std::vector<double> theta(k.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) theta[j] = (acc += k[j]);
  return {std::move(k), std::move(theta)};
}

DiscreteAngles DiscreteAngles::from_turning(std::vector<double> theta) {
  require_finite(theta, "turning angle");
  std::vector<double> k(theta.size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = theta[j] - (j == 0 ? 0.0 : theta[j - 1]);
  return {std::move(k), std::move(theta)};
}

DiscreteAngles DiscreteAngles::from_polyline(const Polyline& p) {
  const auto e = p.edges();
  std::vector<double> k(e.size() - 1);
  for (std::size_t j = 1; j < e.size(); ++j) {
    const cplx turn = e[j] * std::conj(e[j - 1]);
    k[j - 1] = std::atan2(turn.imag(), turn.real());
  }
  return from_curvature(std::move(k));
}

DiscretePhi DiscretePhi::from_increments(std::vector<double> f) {
  require_finite(f, "phi increment");
  std::vector<double> phi(f.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) phi[j] = (acc += f[j]);
  return {std::move(f), std::move(phi)};
}

DiscretePhi DiscretePhi::from_partial_sums(std::vector<double> phi) {
  require_finite(phi, "phi");
  std::vector<double> f(phi.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = phi[j] - (j == 0 ? 0.0 : phi[j - 1]);
  return {std::move(f), std::move(phi)};
}

Polyline polyline_from_angles(const DiscreteAngles& angles) {
  std::vector<cplx> v;
  v.reserve(angles.vertex_count());
  v.emplace_back(0.0, 0.0);
  v.emplace_back(1.0, 0.0);
  for (double th : angles.turning()) v.push_back(v.back() + std::polar(1.0, th));
  return Polyline(std::move(v));
}

Polyline polyline_from_curvature(std::span<const double> k) {
  return polyline_from_angles(DiscreteAngles::from_curvature({k.begin(), k.end()}));
}

double discrete_closure_defect(const Polyline& p) { return std::abs(p.vertices().back() - p.vertices().front()); }

cplx discrete_moment(const DiscreteAngles& angles, const DiscretePhi& phi, int n) {
  require_matching(angles, phi);
  if (n < 0) throw PreconditionError("moment order must be non-negative");
  cplx acc{};
  for (std::size_t j = 0; j < angles.interior(); ++j) {
    acc += (n == 0 ? 1.0 : std::pow(phi.partial_sums()[j], n)) * std::polar(1.0, angles.turning()[j]);
  }
  return acc;
}

cplx discrete_level_sum(const DiscreteAngles& angles, const DiscretePhi& phi, double a, double match_tolerance) {
  require_matching(angles, phi);
  cplx acc{};
  for (std::size_t j = 0; j < angles.interior(); ++j) {
    if (std::abs(phi.partial_sums()[j] - a) <= match_tolerance) acc += std::polar(1.0, angles.turning()[j]);
  }
  return acc;
}

std::vector<double> attained_levels(const DiscretePhi& phi, double match_tolerance) {
  std::vector<double> sorted = phi.partial_sums();
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> levels;
  for (double v : sorted) {
    if (levels.empty() || v - levels.back() > match_tolerance) levels.push_back(v);
  }
  return levels;
}

ConditionCheck check_moment_condition(const DiscreteAngles& angles, const DiscretePhi& phi, int n_max,
                                      double tolerance) {
  require_matching(angles, phi);
  double scale = 0.0;
  for (double v : phi.partial_sums()) scale = std::max(scale, std::abs(v));
  ConditionCheck out;
  if (scale > 0.0) {
    for (int n = 1; n <= n_max; ++n) {
      cplx acc{};
      for (std::size_t j = 0; j < angles.interior(); ++j) {
        acc += std::pow(phi.partial_sums()[j] / scale, n) * std::polar(1.0, angles.turning()[j]);
      }
      out.worst = std::max(out.worst, std::abs(acc));
    }
  }
  out.pass = out.worst <= tolerance;
  return out;
}

ConditionCheck check_level_condition(const DiscreteAngles& angles, const DiscretePhi& phi, double tolerance,
                                     double match_tolerance) {
  require_matching(angles, phi);
  ConditionCheck out;
  for (double a : attained_levels(phi, match_tolerance)) {
    if (std::abs(a) <= match_tolerance) continue;
    out.worst = std::max(out.worst, std::abs(discrete_level_sum(angles, phi, a, match_tolerance)));
  }
  out.pass = out.worst <= tolerance;
  return out;
}

double zero_level_residual(const DiscreteAngles& angles, const DiscretePhi& phi, double match_tolerance) {
  return std::abs(1.0 + discrete_level_sum(angles, phi, 0.0, match_tolerance));
}

ClosureReport discrete_family_scan(const DiscreteAngles& angles, const DiscretePhi& phi,
                                   const std::vector<double>& lambdas, double tolerance) {
  require_matching(angles, phi);
  if (lambdas.empty()) throw PreconditionError("family scan needs at least one lambda");
  const auto defect_at = [&](double lambda) {
    cplx acc{1.0, 0.0};
    for (std::size_t j = 0; j < angles.interior(); ++j) {
      acc += std::polar(1.0, angles.turning()[j] + lambda * phi.partial_sums()[j]);
    }
    return std::abs(acc);
  };
  const double base = defect_at(0.0);
  if (!(base <= tolerance)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", base);
    throw PreconditionError(std::string("base polyline is not closed (defect ") + buf + ")");
  }
  std::vector<double> defects(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) defects[i] = defect_at(lambdas[i]);
  return ClosureReport::make(lambdas, std::move(defects), tolerance);
}

BalanceReport find_balanced_subsets(const DiscreteAngles& angles, const BalanceOptions& opts) {
  const std::size_t m = angles.interior();
  if (m > opts.cap) throw CapExceeded(m, opts.cap);
  if (m > 62) throw CapExceeded(m, 62);

  BalanceReport report;
  report.tolerance = opts.tolerance;
  report.exhaustive = true;
  if (m == 0) return report;

  const auto u = directions(angles);
  // generous screen; every hit is re-summed directly before classification
  const double near_limit = 100.0 * opts.tolerance;
  const double screen = near_limit + 1e-12 * static_cast<double>(m);

  const unsigned low_bits = static_cast<unsigned>(std::min<std::size_t>(m, kBlockBits));
  const std::uint64_t blocks = std::uint64_t{1} << (m - low_bits);
  unsigned workers = opts.threads != 0 ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

  std::vector<std::vector<std::uint64_t>> hits(workers);
  if (workers == 1) {
    scan_blocks(u, low_bits, 0, blocks, screen, hits[0]);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = blocks * w / workers;
      const std::uint64_t last = blocks * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] { scan_blocks(u, low_bits, first, last, screen, hits[w]); });
    }
  }

  const std::uint64_t full = (m == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  for (const auto& part : hits) {
    for (std::uint64_t mask : part) {
      if (mask == 0 || mask == full) continue;
      const double residual = std::abs(subset_sum(u, mask));
      if (residual <= opts.tolerance) {
        report.subsets.push_back({mask_indices(mask, m), residual});
      } else if (residual <= near_limit) {
        report.near_balanced.push_back({mask_indices(mask, m), residual});
      }
    }
  }
  std::sort(report.subsets.begin(), report.subsets.end(), subset_less);
  std::sort(report.near_balanced.begin(), report.near_balanced.end(), subset_less);
  return report;
}

DiscretePhi build_discrete_family(const DiscreteAngles& angles, std::span<const std::size_t> subset, double amplitude,
                                  double tolerance) {
  const std::size_t m = angles.interior();
  if (!std::isfinite(amplitude)) throw ValidationError("amplitude must be finite");
  if (subset.empty()) throw ValidationError("subset must be nonempty");
  std::vector<bool> member(m, false);
  for (std::size_t j : subset) {
    if (j < 2 || j > m + 1) {
      throw ValidationError("subset index " + std::to_string(j) + " outside 2.." + std::to_string(m + 1));
    }
    if (member[j - 2]) throw ValidationError("subset index " + std::to_string(j) + " repeated");
    member[j - 2] = true;
  }
  if (subset.size() == m) throw ValidationError("subset must be a proper subset of the interior vertices");
  cplx acc{};
  for (std::size_t j : subset) acc += std::polar(1.0, angles.theta(j));
  if (!(std::abs(acc) <= tolerance)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(acc));
    throw ValidationError(std::string("subset is not balanced (residual ") + buf + ")");
  }
  std::vector<double> phi(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (member[j]) phi[j] = amplitude;
  }
  return DiscretePhi::from_partial_sums(std::move(phi));
}

Polyline no_balanced_polyline(int n, bool even_tail) {
  if (n < 1) throw ValidationError("pair count must be at least 1");
  const double alpha = std::acos(1.0 / (2.0 * n));
  std::vector<cplx> edges;
  for (int i = 0; i < n; ++i) {
    edges.push_back(std::polar(1.0, alpha));
    edges.push_back(std::polar(1.0, -alpha));
  }
  if (even_tail) {
    edges.push_back(std::polar(1.0, 2.0 * std::numbers::pi / 3.0));
    edges.push_back(std::polar(1.0, 4.0 * std::numbers::pi / 3.0));
  } else {
    edges.emplace_back(-1.0, 0.0);
  }
  return Polyline::from_edges(edges);
}

}  // namespace curvfam
