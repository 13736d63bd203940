#pragma once

#include <cstddef>
#include <vector>

#include "ittail/sign_pattern.hpp"

namespace ittail {

struct ExpTerm {
  double coef = 0.0;
  double rate = 0.0;
};

/// Finite sum  sum_j coef_j * exp(-rate_j * x).
///
/// Terms are kept with strictly increasing rates (so the first term
/// dominates as x -> +inf). Rates closer than 1e-14 (relative) are merged
/// and coefficients smaller than 1e-14 times the largest one are pruned
/// with a logged warning. An empty term list is the zero function.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms);
  ExpPoly(std::initializer_list<ExpTerm> terms) : ExpPoly(std::vector<ExpTerm>(terms)) {}

  const std::vector<ExpTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Compensated evaluation.
  double operator()(double x) const;
  /// sum_j |coef_j| exp(-rate_j x); scale for rounding-error estimates.
  double magnitude(double x) const;
  /// Rounding-error bound for operator()(x).
  double noise(double x) const;

  double min_rate() const;
  double max_rate() const;
  /// Sign as x -> +inf (coefficient of the smallest rate).
  Sign limit_sign() const;

  ExpPoly derivative(unsigned k = 1) const;
  /// g(x) = integral_x^inf p(t) dt. Requires every rate > 0.
  ExpPoly tail_integral() const;
  /// x -> p(a x + b).
  ExpPoly compose_affine(double a, double b) const;
  ExpPoly scaled(double c) const;

  friend ExpPoly operator+(const ExpPoly& p, const ExpPoly& q);
  friend ExpPoly operator-(const ExpPoly& p, const ExpPoly& q);
  friend ExpPoly operator*(const ExpPoly& p, const ExpPoly& q);
  friend ExpPoly operator-(const ExpPoly& p) { return p.scaled(-1.0); }
  friend ExpPoly operator*(double c, const ExpPoly& p) { return p.scaled(c); }

 private:
  std::vector<ExpTerm> terms_;
};

double eval(const ExpPoly& p, double x);
ExpPoly differentiate(const ExpPoly& p, unsigned k);

/// Strict sign alternations in the coefficients ordered by increasing rate
/// (decreasing exponent -rate, i.e. decreasing base exp(-rate)).
unsigned sign_change_bound(const ExpPoly& p);

struct RootReport {
  unsigned sign_change_bound = 0;
  /// Disjoint, increasing; each brackets exactly one sign change.
  std::vector<Interval> isolated_roots;
  /// Critical points where |p| sits inside the rounding noise: possible
  /// double roots that could not be resolved at working precision.
  std::vector<Interval> suspects;
  bool residual_uncertainty = false;
};

/// Certified isolation on a bounded interval via Rolle recursion on
/// exp(rate_0 x) p(x). Brackets have width <= 1e-12 (absolute) unless the
/// function is inside its noise floor first. Zeros at the interval
/// endpoints are not reported. Throws IndeterminateFunction for the zero
/// polynomial and std::invalid_argument for an empty or unbounded domain.
RootReport isolate_roots(const ExpPoly& p, Interval domain);

/// Like isolate_roots but throws ResidualUncertainty instead of flagging.
RootReport isolate_roots_certified(const ExpPoly& p, Interval domain);

/// Point beyond which the smallest-rate term outweighs all others by a
/// factor of two, so the sign is fixed from there on.
double root_window_end(const ExpPoly& p, double start);

/// Point (<= 0) below which the largest-rate term outweighs all others by
/// a factor of two, so every real root lies at or above it.
double root_window_start(const ExpPoly& p);

/// Exact sign pattern on (start, +inf): roots isolated on the bounded
/// window, then the analytic limit sign. The zero polynomial yields an
/// empty (degenerate) pattern. Unresolved near-double roots set
/// `uncertain` and are treated as touching (no change).
SignPattern sign_pattern_exact(const ExpPoly& p, double start = 0.0);

/// Exact sign pattern on a bounded interval (no limit argument).
SignPattern sign_pattern_on(const ExpPoly& p, Interval domain);

}  // namespace ittail
