#pragma once

#include <functional>
#include <span>

namespace ittail::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Integral of f over [lo, hi]; hi may be +inf. Pieces are split at the
/// given breakpoints; the unbounded piece is split once more at `scale`
/// past the last finite point and finished with an exp-sinh rule.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, std::span<const double> breaks,
                     double scale, double tol = 1e-14);

}  // namespace ittail::detail
