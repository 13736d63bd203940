#pragma once

#include <string>
#include <string_view>

#include "ittail/distributions.hpp"
#include "ittail/exppoly.hpp"

namespace ittail {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Distribution literal grammar (whitespace-insensitive, case-sensitive):
///
///   exp(rate)              gamma(shape[,scale])     weibull(shape[,scale])
///   bpareto(c1,c2)         polyexp(c)               maxexp(r1,r2[,...])
///   exptail(EXPPOLY)
///
/// Parameters are decimal literals. Throws ParseError naming the offending
/// token; parameter-domain violations are also reported as ParseError.
DistributionSpec parse_distribution(std::string_view text);

/// Exponential-polynomial literal: a sum of terms `coef*e(-rate)`, e.g.
/// "1*e(-1)+(-1)*e(-2)". A bare `e(-rate)` has coefficient 1 and a leading
/// '-' negates a term. Rates are written with their sign as the exponent.
ExpPoly parse_exppoly(std::string_view text);
std::string format_exppoly(const ExpPoly& p);

}  // namespace ittail
