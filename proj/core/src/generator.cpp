#include "curvfam/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <sstream>

#include "curvfam/errors.hpp"

namespace curvfam {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string token(text.substr(0, comma));
    std::istringstream in(token);
    double v;
    if (!(in >> v) || !(in >> std::ws).eof()) {
      throw ValidationError("bad number '" + token + "' in generator '" + std::string(spec) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> spline_second_derivatives(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0), u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
    const double p = sig * m[i - 1] + 2.0;
    m[i] = (sig - 1.0) / p;
    u[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    u[i] = (6.0 * u[i] / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
  }
  m[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) m[k] = m[k] * m[k + 1] + u[k];
  return m;
}

struct SplineSpot {
  std::size_t lo;
  double h, a, b;
};

SplineSpot locate(const Generator::Table& t, double x) {
  const auto it = std::upper_bound(t.xs.begin(), t.xs.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - t.xs.begin());
  hi = std::clamp<std::size_t>(hi, 1, t.xs.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = t.xs[hi] - t.xs[lo];
  const double a = (t.xs[hi] - x) / h;
  return {lo, h, a, 1.0 - a};
}

}  // namespace

Generator Generator::identity() { return Generator(Polynomial{{0.0, 1.0}}, "identity"); }

Generator Generator::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  std::string name = "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i) name += ',';
    name += format_number(coefficients[i]);
  }
  return Generator(Polynomial{std::move(coefficients)}, std::move(name));
}

Generator Generator::exp_affine(double alpha, double beta, double gamma, double delta) {
  std::string name = "expaffine:" + format_number(alpha) + ',' + format_number(beta) + ',' +
                     format_number(gamma) + ',' + format_number(delta);
  return Generator(ExpAffine{alpha, beta, gamma, delta}, std::move(name));
}

Generator Generator::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw ValidationError("table generator needs matching knot/value lists with at least 3 knots");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw ValidationError("table generator: non-finite knot");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw ValidationError("table generator: knots must increase strictly");
  }
  auto second = spline_second_derivatives(xs, ys);
  const std::string name = "table:" + std::to_string(xs.size());
  return Generator(Table{std::move(xs), std::move(ys), std::move(second)}, name);
}

Generator Generator::parse(std::string_view spec) {
  if (spec == "identity" || spec == "x") return identity();
  if (spec == "square" || spec == "x^2") return polynomial({0.0, 0.0, 1.0});
  if (spec == "exp") return exp_affine(1.0, 1.0, 0.0, 0.0);
  if (spec == "exp+2x") return exp_affine(1.0, 1.0, 2.0, 0.0);
  if (spec == "cos") {
    constexpr std::size_t kKnots = 1601;
    std::vector<double> xs(kKnots), ys(kKnots);
    for (std::size_t i = 0; i < kKnots; ++i) {
      xs[i] = -8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(kKnots - 1);
      ys[i] = std::cos(xs[i]);
    }
    Generator g = table(std::move(xs), std::move(ys));
    g.name_ = "cos";
    return g;
  }
  if (spec.starts_with("poly:")) return polynomial(parse_list(spec.substr(5), spec));
  if (spec.starts_with("expaffine:")) {
    const auto v = parse_list(spec.substr(10), spec);
    if (v.size() != 4) throw ValidationError("expaffine generator needs 4 parameters");
    return exp_affine(v[0], v[1], v[2], v[3]);
  }
  throw ValidationError("unknown generator '" + std::string(spec) + "'");
}

bool Generator::defined_at(double x) const noexcept {
  if (!std::isfinite(x)) return false;
  if (const auto* t = std::get_if<Table>(&kind_)) return x >= t->xs.front() && x <= t->xs.back();
  return true;
}

double Generator::operator()(double x) const {
  if (!defined_at(x)) {
    throw DomainError("generator '" + name_ + "' is undefined at x=" + format_number(x));
  }
  return std::visit(
      [x](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          double acc = 0.0;
          for (auto c = g.coefficients.rbegin(); c != g.coefficients.rend(); ++c) acc = acc * x + *c;
          return acc;
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          return g.alpha * std::exp(g.beta * x) + g.gamma * x + g.delta;
        } else {
          const auto s = locate(g, x);
          return s.a * g.ys[s.lo] + s.b * g.ys[s.lo + 1] +
                 ((s.a * s.a * s.a - s.a) * g.second[s.lo] + (s.b * s.b * s.b - s.b) * g.second[s.lo + 1]) *
                     (s.h * s.h) / 6.0;
        }
      },
      kind_);
}

double Generator::derivative(double x) const {
  if (!defined_at(x)) {
    throw DomainError("generator '" + name_ + "' is undefined at x=" + format_number(x));
  }
  return std::visit(
      [x](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          double acc = 0.0;
          const std::size_t n = g.coefficients.size();
          for (std::size_t k = n; k-- > 1;) acc = acc * x + static_cast<double>(k) * g.coefficients[k];
          return acc;
        } else if constexpr (std::is_same_v<T, ExpAffine>) {
          return g.alpha * g.beta * std::exp(g.beta * x) + g.gamma;
        } else {
          const auto s = locate(g, x);
          return (g.ys[s.lo + 1] - g.ys[s.lo]) / s.h -
                 (3.0 * s.a * s.a - 1.0) / 6.0 * s.h * g.second[s.lo] +
                 (3.0 * s.b * s.b - 1.0) / 6.0 * s.h * g.second[s.lo + 1];
        }
      },
      kind_);
}

}  // namespace curvfam
