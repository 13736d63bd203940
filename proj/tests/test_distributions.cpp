#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ittail/distributions.hpp"
#include "ittail/errors.hpp"
#include "ittail/literal.hpp"
#include "oracle.hpp"

using namespace ittail;

namespace {

std::vector<DistributionSpec> catalog() {
  return {Exponential{1.0},   Exponential{2.5},         Gamma{2, 1},        Gamma{0.4, 1.3},
          Gamma{3, 0.5},      Weibull{1.5, 1},          Weibull{0.7, 2},    BranchedPareto{5, 10},
          BranchedPareto{2, 6}, PolyExpExample{1},      PolyExpExample{0.5}, MaxExp{{1, 2}},
          MaxExp{{0.3, 1, 4}}, MaxExp{{1, 1, 1}}};
}

}  // namespace

TEST_CASE("density values") {
  CHECK(density(Exponential{1}, 0) == 1.0);
  CHECK(density(PolyExpExample{1}, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(density(Gamma{2, 1}, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(density(Gamma{2, 1}, 1) == doctest::Approx(0.367879).epsilon(1e-6));
  // right-continuous at the branch point
  CHECK(density(BranchedPareto{5, 10}, 5) == doctest::Approx(225.0 / (2 * 3375.0)).epsilon(1e-15));
  CHECK(density(MaxExp{{1, 2}}, 1) ==
        doctest::Approx(std::exp(-1.0) + 2 * std::exp(-2.0) - 3 * std::exp(-3.0)).epsilon(1e-14));
}

TEST_CASE("tail values") {
  CHECK(tail(BranchedPareto{5, 10}, 5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(tail(MaxExp{{1, 2}}, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tail(Exponential{1}, -3) == 1.0);
  CHECK(tail(Gamma{2, 1}, 1) == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(tail(PolyExpExample{1}, 2) == doctest::Approx((4 + 4 + 2 + 1) * std::exp(-2.0) / 3).epsilon(1e-14));
}

TEST_CASE("tails against integrated densities") {
  for (const auto& d : catalog()) {
    CAPTURE(d.literal());
    auto f = [&](double t) { return density(d, t); };
    for (double x : {0.1, 1.0, 3.0}) {
      double ref = 0.0;
      auto br = breakpoints(d);
      double a = x;
      for (double b : br)
        if (b > a) {
          ref += oracle::integrate(f, a, b);
          a = b;
        }
      ref += oracle::integrate_inf(f, a, std::max(1.0, d.mean()));
      CHECK(tail(d, x) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("tail invariants") {
  for (const auto& d : catalog()) {
    CAPTURE(d.literal());
    CHECK(tail(d, 0) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
      double x = 0.05 * i * i;
      double t = tail(d, x);
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
      CHECK(t <= prev + 1e-15);
      prev = t;
      if (t > 1e-300) CHECK(log_tail(d, x) == doctest::Approx(std::log(t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("tail inverse round trip") {
  CHECK(tail_inverse(Exponential{1}, std::exp(-2.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tail_inverse(BranchedPareto{5, 10}, 0.25) == doctest::Approx(5.0).epsilon(1e-15));
  for (const auto& d : catalog()) {
    CAPTURE(d.literal());
    CHECK(tail_inverse(d, 1.0) == 0.0);
    for (double lp = -6.0; lp <= 0.0; lp += 0.25) {
      double p = std::pow(10.0, lp);
      double x = tail_inverse(d, p);
      CHECK(std::fabs(tail(d, x) - p) <= 1e-8 * std::max(p, 1e-2));
    }
  }
}

TEST_CASE("raw moments") {
  CHECK(raw_moment(Exponential{1}, 3) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(raw_moment(Gamma{2, 1}, 2) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(raw_moment(BranchedPareto{5, 10}, 2), InfiniteMoment);
  CHECK(raw_moment(BranchedPareto{5, 10}, 1) == doctest::Approx(25.0 / 4).epsilon(1e-15));
  double f = 1.0;
  for (unsigned k = 1; k <= 10; ++k) {
    f *= k;
    CHECK(raw_moment(Exponential{1}, k) == doctest::Approx(f).epsilon(1e-9));
  }
  CHECK(raw_moment(Weibull{2, 1}, 1) == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-14));
  // (k+2)! + c k! over c + 2
  CHECK(raw_moment(PolyExpExample{1}, 1) == doctest::Approx(7.0 / 3).epsilon(1e-14));
  for (const auto& d : catalog()) {
    CAPTURE(d.literal());
    for (unsigned k = 1; k <= std::min(3u, d.max_finite_moment()); ++k) {
      auto g = [&](double t) { return k * std::pow(t, k - 1.0) * tail(d, t); };
      double ref = oracle::integrate_inf(g, 0.0, std::max(1.0, d.mean()), 4000);
      CHECK(raw_moment(d, k) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("max of exponentials") {
  MaxExp m{{2, 1, 3}};
  DistributionSpec d(m);
  REQUIRE(d.get_if<MaxExp>()->rates == std::vector<double>{1, 2, 3});
  for (int i = 0; i < 100; ++i) {
    double x = 0.1 * i;
    double prod = (1 - std::exp(-x)) * (1 - std::exp(-2 * x)) * (1 - std::exp(-3 * x));
    CHECK(std::fabs(tail(d, x) - (1 - prod)) <= 1e-12);
  }
  // repeated rates merge symbolically: 1 - (1-e^{-x})^2 = 2e^{-x} - e^{-2x}
  auto t = maxexp_tail({1, 1});
  REQUIRE(t.size() == 2);
  CHECK(t.terms()[0].coef == doctest::Approx(2.0));
  CHECK(t.terms()[1].coef == doctest::Approx(-1.0));
  CHECK_THROWS(DistributionSpec(MaxExp{{1}}));
}

TEST_CASE("breakpoints and validation") {
  CHECK(breakpoints(BranchedPareto{5, 10}) == std::vector<double>{5});
  CHECK(breakpoints(Exponential{1}).empty());
  NumericDensity n{[](double x) { return x < 1 ? 0.5 : (x < 2 ? 0.5 : 0.0); }, 2.0, {1, 2}, "uniform2"};
  DistributionSpec nd(n);
  CHECK(breakpoints(nd) == std::vector<double>{1, 2});
  CHECK(tail(nd, 0.5) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(raw_moment(nd, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS(DistributionSpec(Exponential{-1}));
  CHECK_THROWS(DistributionSpec(Gamma{0, 1}));
  CHECK_THROWS(DistributionSpec(NumericDensity{[](double) { return 0.3; }, 2.0, {}, "bad"}));
  CHECK_THROWS(DistributionSpec(ExpPolyTail{ExpPoly{{0.5, 1}}}));
}

TEST_CASE("scaling") {
  auto d = scaled(Gamma{2, 1}, 3.0);
  CHECK(tail(d, 3.0) == doctest::Approx(tail(Gamma{2, 1}, 1.0)).epsilon(1e-14));
  auto m = scaled(MaxExp{{1, 2}}, 2.0);
  CHECK(tail(m, 2.0) == doctest::Approx(tail(MaxExp{{1, 2}}, 1.0)).epsilon(1e-14));
  CHECK_THROWS(scaled(PolyExpExample{1}, 2.0));
}

TEST_CASE("literals") {
  for (const auto& d : catalog()) {
    auto back = parse_distribution(d.literal());
    CHECK(back.literal() == d.literal());
    CHECK(tail(back, 1.3) == tail(d, 1.3));
  }
  CHECK(parse_distribution(" gamma( 2 ) ").literal() == "gamma(2,1)");
  CHECK_THROWS_AS(parse_distribution("gama(2)"), ParseError);
  CHECK_THROWS_AS(parse_distribution("exp(-1)"), ParseError);
  CHECK_THROWS_AS(parse_distribution("maxexp(1)"), ParseError);
  CHECK_THROWS_AS(parse_distribution("exp(1"), ParseError);
  auto p = parse_exppoly("1*e(-1)+(-1)*e(-2)");
  REQUIRE(p.size() == 2);
  CHECK(p.terms()[1].coef == -1.0);
  CHECK(format_exppoly(p) == "1*e(-1)+(-1)*e(-2)");
  CHECK(parse_exppoly("e(-1) - 0.5*e(-3)").terms()[1].coef == -0.5);
  auto et = parse_distribution("exptail(2*e(-1)+(-1)*e(-2))");
  CHECK(et.family() == Family::ExpPolyTail);
  CHECK(tail(et, 1.0) == doctest::Approx(tail(MaxExp{{1, 1}}, 1.0)).epsilon(1e-15));
}
