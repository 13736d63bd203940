#include "ittail/ageing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ittail/errors.hpp"
#include "ittail/iteration.hpp"

namespace ittail {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kConstantVariation = 1e-9;
constexpr double kQuantile = 1e-10;
// Central-difference step, cbrt(eps) relative.
const double kStep = std::cbrt(kEps);

double window_end(const IteratedTail& t, const ScanConfig& cfg) {
  if (cfg.x_max > 0.0) return cfg.x_max;
  if (auto n = t.base().get_if<NumericDensity>()) return n->x_max;
  return t.inverse(kQuantile);
}

double relative_error(const IteratedTail& t, double x) {
  double v = t(x);
  return v > 0.0 ? t.error_bound(x) / v : 1.0;
}

MonotoneClass from_pattern(SignPattern pat, unsigned s) {
  MonotoneClass out;
  out.s = s;
  out.confidence = pat.confidence;
  for (std::size_t i = 0; i < pat.signs.size(); ++i) out.witnesses.push_back({pat.witnesses[i], pat.signs[i]});
  if (pat.degenerate())
    out.verdict = Monotonicity::Constant;
  else if (pat.signs.size() > 1)
    out.verdict = Monotonicity::NonMonotone;
  else
    out.verdict = pat.signs[0] == Sign::Plus ? Monotonicity::Increasing : Monotonicity::Decreasing;
  out.slope = std::move(pat);
  return out;
}

// Constant when sampled values vary by less than 1e-9 relative.
bool nearly_constant(const std::function<double(double)>& g, double x_min, double x_max) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i <= 256; ++i) {
    double x = x_min * std::pow(x_max / x_min, i / 256.0);
    double v = g(x);
    if (!std::isfinite(v)) return false;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo <= kConstantVariation * std::max(std::fabs(hi), std::fabs(lo));
}

std::optional<ExpPoly> ifr_numerator(const IteratedTail& t) {
  const ExpPoly* ts = t.exppoly();
  if (!ts) return std::nullopt;
  ExpPoly a;
  ExpPoly b;
  if (t.order() == 1) {
    a = -ts->derivative();
    b = *ts;
  } else {
    auto lo = t.lower();
    if (!lo->exppoly()) return std::nullopt;
    a = *lo->exppoly();
    b = t.normalizers().back() * *ts;
  }
  return a.derivative() * b + a * a;
}

MonotoneClass classify_exact(const ExpPoly& n, unsigned s) {
  if (n.is_zero()) {
    MonotoneClass out;
    out.s = s;
    out.confidence = Confidence::Exact;
    out.verdict = Monotonicity::Constant;
    return out;
  }
  auto pat = sign_pattern_exact(n, 0.0);
  auto out = from_pattern(pat, s);
  if (pat.uncertain) out.reason = "near-double root in the slope numerator";
  return out;
}

MonotoneClass scan_class(const std::function<double(double)>& g, const std::function<double(double)>& level,
                         const IteratedTail& t, ScanConfig cfg) {
  double x_max = window_end(t, cfg);
  cfg.x_max = x_max;
  double x_min = cfg.x_min > 0 ? cfg.x_min : 1e-7 * x_max;
  MonotoneClass out;
  out.s = t.order();
  if (nearly_constant(level, x_min, x_max)) {
    out.verdict = Monotonicity::Constant;
    out.reason = "relative variation below 1e-9";
    return out;
  }
  try {
    return from_pattern(scan(g, cfg, breakpoints(t.base())), t.order());
  } catch (const IndeterminateFunction& e) {
    out.verdict = Monotonicity::Inconclusive;
    out.reason = e.what();
    return out;
  }
}

}  // namespace

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Constant: return "constant";
    case Monotonicity::NonMonotone: return "non_monotone";
    case Monotonicity::Inconclusive: return "inconclusive";
  }
  return "?";
}

double failure_rate(const DistributionSpec& d, unsigned s, double x) { return iterate(d, s).failure_rate(x); }

MonotoneClass classify_ifr(const DistributionSpec& d, unsigned s, const ScanConfig& cfg) {
  auto t = iterate(d, s);
  if (auto n = ifr_numerator(t)) return classify_exact(*n, s);

  std::optional<IteratedTail> lower = t.lower();
  auto rate = [&t](double x) { return t.failure_rate(x); };
  auto rel = [&](double x) {
    double e = relative_error(t, x) + (lower ? relative_error(*lower, x) : 64 * kEps);
    return std::max(e, 16 * kEps);
  };
  auto slope = [&](double x) {
    double h = std::min(std::max(1e-8, kStep * x), 0.5 * x);
    double rp = rate(x + h), rm = rate(x - h);
    double v = (rp - rm) / (2 * h);
    double noise = 4.0 * (std::fabs(rp) * rel(x + h) + std::fabs(rm) * rel(x - h)) / (2 * h);
    return std::fabs(v) <= noise ? 0.0 : v;
  };
  return scan_class(slope, rate, t, cfg);
}

MonotoneClass classify_ifra(const DistributionSpec& d, unsigned s, const ScanConfig& cfg) {
  auto t = iterate(d, s);
  std::optional<IteratedTail> lower = t.lower();
  auto log_t = [&](double x) { return s == 1 ? log_tail(d, x) : std::log(t(x)); };
  auto phi = [&](double x) {
    double xr = x * t.failure_rate(x);
    double lt = log_t(x);
    double v = xr + lt;
    double rel = relative_error(t, x) + (lower ? relative_error(*lower, x) : 64 * kEps);
    double noise = 64 * kEps * (std::fabs(xr) + std::fabs(lt)) + 2.0 * rel * (1.0 + std::fabs(xr));
    return std::fabs(v) <= noise ? 0.0 : v;
  };
  auto average = [&](double x) { return -log_t(x) / x; };
  auto out = scan_class(phi, average, t, cfg);
  if (t.exppoly() && out.verdict != Monotonicity::Inconclusive) out.reason = "sampled identity on a closed-form tail";
  return out;
}

double dfr_onset_numerator(double lambda, unsigned s) {
  double p = s - 1.0;
  return std::pow(lambda, s + 1.0) + 1.0 - (lambda - 1.0) * (lambda - 1.0) * std::pow(1.0 + lambda, p);
}

std::optional<unsigned> dfr_onset(double lambda, unsigned s_max) {
  if (!(lambda > 0.0) || lambda == 1.0) throw std::invalid_argument("dfr_onset: lambda must be positive and != 1");
  if (s_max == 0 || s_max > 64) throw std::invalid_argument("dfr_onset: s_max must lie in [1, 64]");
  DistributionSpec d(MaxExp{{1.0, lambda}});
  for (unsigned s = 1; s <= s_max; ++s) {
    if (!(dfr_onset_numerator(lambda, s) < 0.0)) continue;
    auto c = classify_ifr(d, s);
    if (c.verdict != Monotonicity::Decreasing)
      throw std::logic_error("dfr_onset: Q(0) < 0 at s=" + std::to_string(s) + " but the classifier reports " +
                             to_string(c.verdict));
    return s;
  }
  return std::nullopt;
}

HolderReport holder_bounds(const DistributionSpec& d, unsigned s, double x, double tol) {
  if (s <= 3) throw std::invalid_argument("holder_bounds: s must exceed 3");
  HolderReport r;
  r.s = s;
  r.x = x;
  r.tolerance = tol;
  r.m_lo = residual_partial_moment(d, s - 3, x);
  r.m_mid = residual_partial_moment(d, s - 2, x);
  r.m_hi = residual_partial_moment(d, s - 1, x);
  r.upper = r.m_lo * r.m_hi;
  r.lower = (1.0 - 1.0 / (s - 1.0)) * r.upper;
  r.square = r.m_mid * r.m_mid;
  r.ifr_lower_margin = (r.square - r.lower) / r.upper;
  r.ifr_upper_margin = (r.upper - r.square) / r.upper;
  r.ifr_lower_holds = r.ifr_lower_margin >= -tol;
  r.ifr_upper_holds = r.ifr_upper_margin >= -tol;
  r.dfr_holds = r.ifr_lower_margin <= tol;
  return r;
}

}  // namespace ittail
