#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace curvfam {

/// A scalar function g used to reshape phi into g(phi) without breaking the
/// closedness of the family.
class Generator {
 public:
  /// c0 + c1 x + c2 x^2 + ...
  struct Polynomial {
    std::vector<double> coefficients;
  };
  /// alpha e^{beta x} + gamma x + delta
  struct ExpAffine {
    double alpha, beta, gamma, delta;
  };
  /// Natural cubic spline through (xs, ys); defined on [xs.front(), xs.back()].
  struct Table {
    std::vector<double> xs, ys;
    std::vector<double> second;  // spline second derivatives at the knots
  };

  static Generator identity();
  static Generator polynomial(std::vector<double> coefficients);
  static Generator constant(double c) { return polynomial({c}); }
  static Generator exp_affine(double alpha, double beta, double gamma, double delta);
  /// Knots must be strictly increasing, at least 3 of them.
  static Generator table(std::vector<double> xs, std::vector<double> ys);

  /// Parses "identity", "square", "exp", "exp+2x", "cos", "poly:c0,c1,...",
  /// "expaffine:alpha,beta,gamma,delta". Throws ValidationError otherwise.
  static Generator parse(std::string_view spec);

  /// Throws DomainError outside the domain.
  double operator()(double x) const;
  double derivative(double x) const;
  bool has_derivative() const noexcept { return true; }
  bool defined_at(double x) const noexcept;

  /// Canonical textual form; parse(describe()) reproduces the generator
  /// except for tables, which describe themselves as "table:<n>".
  const std::string& describe() const noexcept { return name_; }

 private:
  Generator(std::variant<Polynomial, ExpAffine, Table> kind, std::string name)
      : kind_(std::move(kind)), name_(std::move(name)) {}

  std::variant<Polynomial, ExpAffine, Table> kind_;
  std::string name_;
};

}  // namespace curvfam
