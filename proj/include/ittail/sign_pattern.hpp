#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ittail {

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };

inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

enum class Confidence { Exact, Sampled };

using SignSequence = std::vector<Sign>;

/// Ordered strict signs of a function as x traverses a half line.
///
/// witnesses[i] is an abscissa where the function is beyond the deadband
/// with sign signs[i]; witness_values[i] is the value observed there.
/// change_points[i] brackets the change between signs[i] and signs[i+1].
/// An empty pattern means the function was numerically zero everywhere.
struct SignPattern {
  SignSequence signs;
  std::vector<double> witnesses;
  std::vector<double> witness_values;
  std::vector<Interval> change_points;
  Confidence confidence = Confidence::Sampled;
  /// Set when root isolation could not certify a sign (near-double root).
  bool uncertain = false;

  std::size_t changes() const { return signs.empty() ? 0 : signs.size() - 1; }
  bool degenerate() const { return signs.empty(); }
  std::string str() const;

  /// Appends one signed run, merging with the last run when the sign
  /// repeats. `bracket` is used only when a new change is created.
  void push(Sign s, double witness, double value, Interval bracket);
};

std::string to_string(std::span<const Sign> signs);

/// Parses "+,-,+" (also accepts the unicode minus and empty string).
SignSequence parse_signs(std::string_view text);

/// Pattern with every sign reversed; witnesses and brackets are kept.
SignPattern negated(const SignPattern& p);

/// Concatenates two patterns on adjacent domains, merging equal signs at
/// the seam. `seam` brackets the boundary between them.
SignPattern concatenate(const SignPattern& head, const SignPattern& tail, Interval seam);

/// True iff `part` equals a final segment of `full` (an empty part is a
/// final part of anything).
bool is_final_part(std::span<const Sign> part, std::span<const Sign> full);

/// True iff `part` is a contiguous run of `full`.
bool is_contiguous_part(std::span<const Sign> part, std::span<const Sign> full);

/// Pattern admissibility for the order criteria: the observed signs must
/// form a contiguous run of some allowed sequence. Final parts and full
/// members are special cases; a degenerate pattern always matches.
bool matches(const SignPattern& p, std::span<const SignSequence> allowed);
bool matches(std::span<const Sign> signs, std::span<const SignSequence> allowed);

/// All non-empty final parts of a sign sequence, longest first.
std::vector<SignSequence> final_parts(std::span<const Sign> signs);

}  // namespace ittail
