#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ittail/distributions.hpp"
#include "ittail/sign_pattern.hpp"
#include "ittail/signscan.hpp"

namespace ittail {

enum class Monotonicity { Increasing, Decreasing, Constant, NonMonotone, Inconclusive };

std::string to_string(Monotonicity m);

/// Abscissa where the slope was observed beyond the deadband, and its sign.
struct Turning {
  double x = 0.0;
  Sign direction = Sign::Plus;
};

struct MonotoneClass {
  Monotonicity verdict = Monotonicity::Inconclusive;
  unsigned s = 1;
  Confidence confidence = Confidence::Sampled;
  /// One entry per run of the slope pattern; NonMonotone has at least two.
  std::vector<Turning> witnesses;
  /// Sign pattern of the slope (IFR) or of x r_s(x) + log T_s(x) (IFRA).
  SignPattern slope;
  std::string reason;
};

/// r_{X,s}(x) = T_{s-1}(x) / (mu_{s-1} T_s(x)); r_{X,1} = f / F-bar.
double failure_rate(const DistributionSpec& d, unsigned s, double x);

/// Monotonicity of r_{X,s}. Exponential-polynomial tails are decided exactly
/// from the numerator A'B + A^2 of the derivative (A = T_{s-1}, B = mu T_s);
/// other families scan a central difference with h = max(1e-8, 1e-6 x).
/// cfg.x_max = 0 scans up to the 1e-10 quantile of the s-iterate.
MonotoneClass classify_ifr(const DistributionSpec& d, unsigned s, const ScanConfig& cfg = {});

/// Monotonicity of the averaged rate -log T_s(x) / x, whose derivative has
/// the sign of x r_s(x) + log T_s(x).
MonotoneClass classify_ifra(const DistributionSpec& d, unsigned s, const ScanConfig& cfg = {});

/// Q(0) numerator lambda^{s+1} + 1 - (lambda-1)^2 (1+lambda)^{s-1} for the
/// maximum of Exp(1) and Exp(lambda).
double dfr_onset_numerator(double lambda, unsigned s);

/// Smallest s <= s_max at which max(Exp(1), Exp(lambda)) becomes s-DFR:
/// the numerator above is negative and classify_ifr agrees. Throws
/// std::logic_error if the two disagree, std::invalid_argument for
/// lambda <= 0, lambda == 1 or s_max > 64.
std::optional<unsigned> dfr_onset(double lambda, unsigned s_max);

struct HolderReport {
  unsigned s = 0;
  double x = 0.0;
  /// m_k = E (X - x)_+^k for k = s-3, s-2, s-1.
  double m_lo = 0.0, m_mid = 0.0, m_hi = 0.0;
  /// (1 - 1/(s-1)) m_{s-3} m_{s-1}  and  m_{s-3} m_{s-1}.
  double lower = 0.0, upper = 0.0;
  /// m_{s-2}^2.
  double square = 0.0;
  /// square >= lower and square <= upper (the s-IFR interval).
  bool ifr_lower_holds = false, ifr_upper_holds = false;
  /// square <= lower (the s-DFR bound).
  bool dfr_holds = false;
  /// Signed slacks relative to upper: (square - lower)/upper, (upper - square)/upper.
  double ifr_lower_margin = 0.0, ifr_upper_margin = 0.0;
  double tolerance = 0.0;
};

/// Requires s > 3. Inequalities are tested with relative slack `tol`.
HolderReport holder_bounds(const DistributionSpec& d, unsigned s, double x, double tol = 1e-8);

}  // namespace ittail
