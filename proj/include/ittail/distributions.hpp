#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ittail/exppoly.hpp"

namespace ittail {

struct Exponential {
  double rate = 1.0;
};

struct Gamma {
  double shape = 1.0;
  double scale = 1.0;
};

struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};

/// Survival c1^2/(x+c1)^2 on [0,c1], (c1+c2)^2/(4(x+c2)^2) beyond.
struct BranchedPareto {
  double c1 = 1.0;
  double c2 = 1.0;
};

/// Density (x^2+c) e^{-x} / (c+2).
struct PolyExpExample {
  double c = 1.0;
};

/// Maximum of independent exponentials with the given rates.
struct MaxExp {
  std::vector<double> rates;
};

/// Survival function given directly as an exponential polynomial.
struct ExpPolyTail {
  ExpPoly tail;
};

/// Density known only as a callable; mass beyond x_max must be < 1e-12.
struct NumericDensity {
  std::function<double(double)> density;
  double x_max = 0.0;
  std::vector<double> breaks;
  std::string name = "numeric";
};

enum class Family { Exponential, Gamma, Weibull, BranchedPareto, PolyExp, MaxExp, ExpPolyTail, NumericDensity };

/// Immutable, validated lifetime distribution. Copies share state.
class DistributionSpec {
 public:
  using Variant = std::variant<Exponential, Gamma, Weibull, BranchedPareto, PolyExpExample, MaxExp, ExpPolyTail,
                               NumericDensity>;

  DistributionSpec(Exponential v);
  DistributionSpec(Gamma v);
  DistributionSpec(Weibull v);
  DistributionSpec(BranchedPareto v);
  DistributionSpec(PolyExpExample v);
  DistributionSpec(MaxExp v);
  DistributionSpec(ExpPolyTail v);
  DistributionSpec(NumericDensity v);

  Family family() const;
  const Variant& variant() const;
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&variant());
  }

  /// Literal form accepted by parse_distribution (NumericDensity prints
  /// its name and cannot be parsed back).
  std::string literal() const;

  /// Survival function as an exponential polynomial, when it is one.
  const std::optional<ExpPoly>& tail_exppoly() const;

  /// Largest k with E X^k finite (UINT_MAX when all moments exist).
  unsigned max_finite_moment() const;

  double mean() const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  explicit DistributionSpec(Variant v);
  std::shared_ptr<const Impl> impl_;
};

double density(const DistributionSpec& d, double x);
/// log f(x); -inf where the density vanishes.
double log_density(const DistributionSpec& d, double x);
/// Survival function; exactly 1 for x < 0.
double tail(const DistributionSpec& d, double x);
/// log of the survival function, accurate where tail underflows.
double log_tail(const DistributionSpec& d, double x);
/// E X^k. Throws InfiniteMoment when it diverges.
double raw_moment(const DistributionSpec& d, unsigned k);
/// x with tail(x) = p, for 0 < p <= 1.
double tail_inverse(const DistributionSpec& d, double p);
/// Sorted non-smooth points of density/tail.
std::vector<double> breakpoints(const DistributionSpec& d);

/// Distribution of k X (k > 0). PolyExpExample and NumericDensity have no
/// closed scale family and are rejected.
DistributionSpec scaled(const DistributionSpec& d, double k);

/// Survival 1 - prod(1 - exp(-rate_i x)) expanded over subsets.
ExpPoly maxexp_tail(const std::vector<double>& rates);

}  // namespace ittail
