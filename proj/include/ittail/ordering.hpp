#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ittail/ageing.hpp"
#include "ittail/distributions.hpp"
#include "ittail/sign_pattern.hpp"
#include "ittail/signscan.hpp"

namespace ittail {

enum class Outcome { Supported, Refuted, Inconclusive };
enum class Criterion { PatternVs, CriterionH, CriterionP, NewCrit, Convexity, DMRL };
enum class HForm { Hs, HsMinus1, Ps, PsMinus1 };

std::string to_string(Outcome o);
std::string to_string(Criterion c);
std::string to_string(HForm f);

/// (a, b) cells to scan: the product a x b followed by the explicit
/// `cells`; a > 0. `scan` is the per-cell configuration (x_max = 0 picks
/// the 1e-10 quantiles of both tails, x_min = 0 picks 1e-6 times the
/// smaller mean).
struct GridSpec {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<std::pair<double, double>> cells;
  ScanConfig scan;
};

void validate(const GridSpec& g);
std::vector<double> log_space(double lo, double hi, unsigned n);
std::vector<double> lin_space(double lo, double hi, unsigned n);

/// 64 log-spaced a in [0.05, 20]; 32 b in [0, 5 E Y], plus 16 b in
/// [-5 E X, 0) when `negative_b` is set.
GridSpec default_grid(const DistributionSpec& X, const DistributionSpec& Y, bool negative_b);

struct Witness {
  double a = 0.0;
  double b = 0.0;
  /// Name of the scanned function: V_s, H_s, H_{s-1}, P_s, P_{s-1},
  /// c_s', c_s/x or d'.
  std::string function;
  SignPattern pattern;
  /// Convexity and DMRL witnesses also in the u = tail scale.
  std::vector<double> u;
};

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  Criterion criterion = Criterion::PatternVs;
  unsigned s = 1;
  std::optional<Witness> witness;
  std::size_t cells_scanned = 0;
  /// Cells whose function was numerically zero throughout (counted as passing).
  std::size_t degenerate_cells = 0;
  /// Smallest witness |value| over passing cells (inf when none).
  double worst_margin = 0.0;
  std::string reason;
  GridSpec grid;
  std::vector<SignSequence> allowed;
  /// Sub-verdicts of a composite check (newcrit stages).
  std::vector<Verdict> stages;
};

/// V_s(x) = T_{Y,s}(x) - T_{X,s}(ax + b) against {"+,-,+"} on every cell.
Verdict compare_ifr(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g);
/// V_s(x) = T_{Y,s}(x) - T_{X,s}(ax) against {"-,+"}; only the a values
/// (of the product and of the explicit cells) are used.
Verdict compare_ifra(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g);

/// Sign pattern of one H/P form on every cell against {"+,-,+"}. Supported
/// is sufficient (not necessary) evidence for X <=_{s-IFR} Y.
Verdict criterion_h(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g,
                    HForm form);

/// s-IFRA comparison, then the H/P criterion on cells with b >= 0, with a
/// direct V_s scan for cells where the criterion alone is not enough.
Verdict newcrit(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g);

/// d(u) = T_{Y,2}(T_{Y,1}^{-1}(u)) / T_{X,2}(T_{X,1}^{-1}(u)) nonincreasing on (0, 1).
Verdict compare_dmrl(const DistributionSpec& X, const DistributionSpec& Y, const ScanConfig& cfg = {});

enum class Shape { Convex, StarShaped };

/// Direct check of c_s = T_{Y,s}^{-1} o T_{X,s}: monotone c_s' (convex) or
/// monotone c_s(x)/x (star-shaped) on a grid.
Verdict convexity_check(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const ScanConfig& cfg = {},
                        Shape shape = Shape::Convex);

/// Sign pattern of V_s(x) = T_{Y,s}(x) - T_{X,s}(ax + b) on one cell, exact
/// when both tails are exponential polynomials. cfg.trace receives the
/// samples of a sampled scan.
SignPattern scan_v(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, double a, double b,
                   const ScanConfig& cfg = {});

/// Value and slope of c_s at x.
struct TransformPoint {
  double x = 0.0, u = 0.0, c = 0.0, slope = 0.0;
};
TransformPoint convex_transform(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, double x);

struct ReferenceReport {
  unsigned s = 1;
  Verdict ifr_below;   // X <=_{s-IFR} Exp(1)
  Verdict ifr_above;   // Exp(1) <=_{s-IFR} X
  Verdict ifra_below;
  Verdict ifra_above;
  MonotoneClass ifr;
  MonotoneClass ifra;
  bool agrees = true;
  std::string discrepancy;
};

/// Orders against Exp(1) in both directions, cross-checked with the
/// monotonicity classifiers. An empty grid selects the default grid plus
/// lines tangent to, and secant through, the origin of X's cumulative
/// s-hazard -log T_{X,s}.
ReferenceReport exponential_reference(const DistributionSpec& X, unsigned s, const GridSpec& g);

}  // namespace ittail
