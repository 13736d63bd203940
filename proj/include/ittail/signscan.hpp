#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ittail/exppoly.hpp"
#include "ittail/sign_pattern.hpp"

namespace ittail {

/// One evaluated abscissa; sign is 0 inside the deadband.
struct ScanSample {
  double x = 0.0;
  double value = 0.0;
  int sign = 0;
};

using TraceSink = std::function<void(std::span<const ScanSample>)>;

struct ScanConfig {
  /// Right end of the sampled window. 0 picks 50.
  double x_max = 0.0;
  /// Smallest sampled abscissa. 0 picks 1e-7 * x_max.
  double x_min = 0.0;
  /// Three quarters log-spaced on [x_min, x_max], the rest uniform.
  unsigned initial_grid = 512;
  /// Samples with |f| <= deadband * max|f| carry no sign.
  double deadband = 1e-11;
  /// Bisection steps per sign change and per indeterminate gap.
  unsigned max_refinement_depth = 12;
  /// Sign of f beyond x_max, when known analytically.
  std::optional<Sign> limit_sign;
  /// Receives every sample in abscissa order after the scan.
  TraceSink trace;
};

void validate(const ScanConfig& cfg);

/// Sampled sign pattern of f on (0, x_max] (plus the limit sign when
/// given). f may return +-inf, which count as signed values, and should
/// return 0 where its own rounding error swamps the value. Throws
/// IndeterminateFunction when no sample carries a sign.
SignPattern scan(const std::function<double(double)>& f, const ScanConfig& cfg,
                 std::span<const double> breakpoints = {});

/// Scan of an exponential polynomial with its rounding-noise floor and
/// analytic limit sign; x_max defaults to max(50, 20 / min rate).
SignPattern scan(const ExpPoly& p, ScanConfig cfg);

/// Samples the integral g(x) = int_x^inf f and f itself, and reports
/// whether g's pattern is a final part of f's.
bool check_integration_lemma(const ExpPoly& f, const ScanConfig& cfg);

}  // namespace ittail
