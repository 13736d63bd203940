#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ittail/distributions.hpp"
#include "ittail/exppoly.hpp"

namespace ittail {

enum class Representation {
  ClosedFormExpPoly,    // exponential-polynomial tails (exp, maxexp, exptail)
  ClosedFormPolyExp,    // the (x^2+c)e^{-x} family
  ClosedFormPiecewise,  // branched Pareto, s <= 2
  SpecialFunction,      // Gamma/Weibull via incomplete gamma functions
  Quadrature,           // residual-moment integral evaluated numerically
};

std::string to_string(Representation r);

struct IterationOptions {
  /// Evaluate s >= 2 through the residual-moment integral even when a
  /// closed form exists (cross-checks and tests).
  bool force_quadrature = false;
};

/// The s-iterated tail of a distribution, with its moment cache
/// E X^0..E X^{s-1} and normalizers mu_1..mu_{s-1} fixed at construction.
/// Immutable and cheap to copy; evaluation is thread-safe.
class IteratedTail {
 public:
  const DistributionSpec& base() const;
  unsigned order() const;
  Representation representation() const;

  /// mu_j = (1/j) E X^j / E X^{j-1}, j = 1..s-1.
  const std::vector<double>& normalizers() const;
  /// E X^0 .. E X^{s-1}.
  const std::vector<double>& moments() const;
  /// The tail as an exponential polynomial (ClosedFormExpPoly only).
  const ExpPoly* exppoly() const;

  /// Tail value; exactly 1 for x < 0.
  double operator()(double x) const;
  /// Estimated absolute evaluation error at x.
  double error_bound(double x) const;
  /// d/dx of the tail: -T_{s-1}(x)/mu_{s-1}, or -f(x) when s = 1.
  double derivative(double x) const;
  /// The (s-1)-iterated tail; empty when s = 1.
  std::optional<IteratedTail> lower() const;

  /// x with tail(x) = p, 0 < p <= 1.
  double inverse(double p) const;

  /// r_{X,s}(x) = T_{s-1}(x) / (mu_{s-1} T_s(x)), r_{X,1} = f / T_1.
  /// Throws TailUnderflow where T_s(x) is not representable.
  double failure_rate(double x) const;

  struct State;

 private:
  friend IteratedTail iterate(const DistributionSpec& d, unsigned s, IterationOptions opts);
  explicit IteratedTail(std::shared_ptr<const State> st) : st_(std::move(st)) {}
  std::shared_ptr<const State> st_;
};

/// Throws InfiniteMoment when E X^{s-1} diverges.
IteratedTail iterate(const DistributionSpec& d, unsigned s, IterationOptions opts = {});

double eval_tail(const IteratedTail& t, double x);

/// (1/s) E X^s / E X^{s-1}.
double iterated_moment(const DistributionSpec& d, unsigned s);

/// E (X - x)_+^k by quadrature of the density.
double residual_partial_moment(const DistributionSpec& d, unsigned k, double x);

/// The s-iterated tail straight from the residual-moment integral,
/// independent of any closed form.
double tail_by_quadrature(const DistributionSpec& d, unsigned s, double x);

}  // namespace ittail
