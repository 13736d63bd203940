#include <cmath>
#include <random>

#include "doctest.h"
#include "ittail/ageing.hpp"
#include "ittail/errors.hpp"

using namespace ittail;

TEST_CASE("failure rate values") {
  CHECK(failure_rate(Exponential{1}, 3, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(failure_rate(PolyExpExample{1}, 1, 0.0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  for (unsigned s = 1; s <= 6; ++s)
    for (double x = 0; x <= 30; x += 3) CHECK(failure_rate(Exponential{0.7}, s, x) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("poly-exp example") {
  for (double c : {0.5, 1.0, 1.9}) {
    CAPTURE(c);
    auto c1 = classify_ifr(PolyExpExample{c}, 1);
    REQUIRE(c1.verdict == Monotonicity::NonMonotone);
    CHECK(c1.slope.str() == "-,+");
    // r' numerator 2x^2 + 4x - 2c
    double root = -1.0 + std::sqrt(1.0 + c);
    CHECK(c1.slope.change_points[0].contains(root));
    CHECK(classify_ifr(PolyExpExample{c}, 2).verdict == Monotonicity::Increasing);
    auto a1 = classify_ifra(PolyExpExample{c}, 1);
    CHECK(a1.verdict == Monotonicity::NonMonotone);
    CHECK(a1.witnesses.size() >= 2);
  }
}

TEST_CASE("exponential is constant") {
  for (unsigned s = 1; s <= 4; ++s) {
    auto c = classify_ifr(Exponential{1}, s);
    CHECK(c.verdict == Monotonicity::Constant);
    CHECK(c.confidence == Confidence::Exact);
    CHECK(classify_ifra(Exponential{1}, s).verdict == Monotonicity::Constant);
  }
}

TEST_CASE("max of exponentials") {
  DistributionSpec y(MaxExp{{1, 2}});
  CHECK(classify_ifra(y, 1).verdict == Monotonicity::Increasing);
  auto a2 = classify_ifra(y, 2);
  CHECK(a2.verdict == Monotonicity::NonMonotone);
  CHECK(a2.slope.str() == "+,-");
  auto c1 = classify_ifr(y, 1);
  // Q(0) > 0 below the onset, so the rate rises then falls
  CHECK(c1.verdict == Monotonicity::NonMonotone);
  CHECK(c1.slope.str() == "+,-");
  CHECK(c1.confidence == Confidence::Exact);
  CHECK(classify_ifr(y, 4).verdict == Monotonicity::NonMonotone);
  CHECK(classify_ifr(y, 5).verdict == Monotonicity::Decreasing);

  CHECK(dfr_onset_numerator(2, 4) == doctest::Approx(33 - 27));
  CHECK(dfr_onset_numerator(2, 5) == doctest::Approx(65 - 81));
  CHECK(dfr_onset(2.0, 20) == 5u);
  CHECK_THROWS_AS(dfr_onset(1.0, 20), std::invalid_argument);
  CHECK_FALSE(dfr_onset(2.0, 4).has_value());
  for (double l : {0.3, 0.5, 1.5, 3.0, 10.0}) {
    auto s0 = dfr_onset(l, 40);
    REQUIRE(s0.has_value());
    CHECK(*s0 > 2);
  }
}

TEST_CASE("homogeneous parallel systems are IFR") {
  for (int n = 2; n <= 5; ++n) {
    MaxExp m{std::vector<double>(n, 1.0)};
    CHECK(classify_ifr(m, 1).verdict == Monotonicity::Increasing);
  }
}

TEST_CASE("scale invariance") {
  std::vector<DistributionSpec> ds = {Exponential{1}, Gamma{2, 1}, Gamma{0.5, 1}, Weibull{1.5, 1}, Weibull{0.6, 1}};
  for (const auto& d : ds)
    for (unsigned s = 1; s <= 3; ++s) {
      auto base = classify_ifr(d, s).verdict;
      for (double k : {0.5, 2.0}) {
        CAPTURE(d.literal());
        CAPTURE(s);
        CHECK(classify_ifr(scaled(d, k), s).verdict == base);
      }
    }
}

TEST_CASE("heredity and IFR implies IFRA") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> shape(1.05, 4.0), scale(0.3, 3.0);
  for (int i = 0; i < 20; ++i) {
    DistributionSpec d = (i % 2) ? DistributionSpec(Gamma{shape(rng), scale(rng)})
                                 : DistributionSpec(Weibull{shape(rng), scale(rng)});
    CAPTURE(d.literal());
    auto c1 = classify_ifr(d, 1);
    REQUIRE(c1.verdict == Monotonicity::Increasing);
    for (unsigned s = 2; s <= 3; ++s) CHECK(classify_ifr(d, s).verdict == Monotonicity::Increasing);
    CHECK(classify_ifra(d, 1).verdict == Monotonicity::Increasing);
  }
  CHECK(classify_ifr(Gamma{0.5, 1}, 1).verdict == Monotonicity::Decreasing);
  CHECK(classify_ifr(Weibull{0.5, 1}, 2).verdict == Monotonicity::Decreasing);
}

TEST_CASE("moment bounds") {
  for (double x : {0.0, 0.5, 1.0, 3.0}) {
    auto e = holder_bounds(Exponential{1}, 4, x);
    CHECK(e.square == doctest::Approx(e.lower).epsilon(1e-8));
    CHECK(e.m_hi == doctest::Approx(6 * std::exp(-x)).epsilon(1e-10));
  }
  for (unsigned s : {4u, 5u})
    for (double x : {0.5, 1.0, 2.0}) {
      auto g = holder_bounds(Gamma{3, 1}, s, x);
      CHECK(g.ifr_lower_holds);
      CHECK(g.ifr_upper_holds);
      CHECK(g.ifr_lower_margin > 0);
      auto h = holder_bounds(Gamma{0.5, 1}, s, x);
      CHECK(h.dfr_holds);
      CHECK(h.ifr_lower_margin < 0);
    }
  CHECK_THROWS(holder_bounds(Exponential{1}, 3, 1.0));
  CHECK_THROWS_AS(holder_bounds(BranchedPareto{5, 10}, 4, 1.0), InfiniteMoment);
}
