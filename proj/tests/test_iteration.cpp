#include <cmath>
#include <random>

#include "doctest.h"
#include "ittail/errors.hpp"
#include "ittail/iteration.hpp"
#include "oracle.hpp"

using namespace ittail;

namespace {

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<DistributionSpec> closed_forms() {
  return {Exponential{1.5}, Gamma{2, 1},        Gamma{0.4, 1},  Gamma{3, 0.7},    Weibull{1.5, 1},
          Weibull{0.7, 1},  PolyExpExample{1},  MaxExp{{1, 2}}, MaxExp{{0.3, 1, 4}}};
}

}  // namespace

TEST_CASE("exponential is a fixed point") {
  double worst = 0.0;
  for (unsigned s = 1; s <= 6; ++s) {
    auto t = iterate(Exponential{1}, s);
    CHECK(t.representation() == (s == 1 ? Representation::ClosedFormExpPoly : Representation::ClosedFormExpPoly));
    REQUIRE(t.exppoly());
    CHECK(t.exppoly()->size() == 1);
    for (int i = 0; i < 200; ++i) {
      double x = 0.1 * i;
      worst = std::max(worst, std::fabs(t(x) - std::exp(-x)));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("closed-form values") {
  // max of Exp(1), Exp(2) at s = 2, c(2,2) = 7/6
  auto m = iterate(MaxExp{{1, 2}}, 2);
  for (double x : {0.0, 0.5, 2.0}) {
    double ref = (std::exp(-x) + std::exp(-2 * x) / 2 - std::exp(-3 * x) / 3) / (7.0 / 6.0);
    CHECK(m(x) == doctest::Approx(ref).epsilon(1e-14));
  }
  auto g = iterate(Gamma{2, 1}, 2);
  CHECK(g(1.0) == doctest::Approx(1.5 * std::exp(-1.0)).epsilon(1e-13));
  CHECK(g(1.0) == doctest::Approx(0.551819).epsilon(1e-6));

  auto bp = iterate(BranchedPareto{5, 10}, 2);
  CHECK(bp.representation() == Representation::ClosedFormPiecewise);
  // both branches give 3/5 at x = c1
  CHECK(bp(5.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(bp(std::nextafter(5.0, 6.0)) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(bp(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(iterate(BranchedPareto{5, 10}, 3), InfiniteMoment);

  // (x^2 + 2 s x + s(s+1) + c) e^{-x} / (s(s+1) + c)
  auto pe = iterate(PolyExpExample{1}, 2);
  CHECK(pe(1.5) == doctest::Approx((2.25 + 6 + 7) * std::exp(-1.5) / 7).epsilon(1e-14));

  for (const auto& d : closed_forms())
    for (unsigned s = 1; s <= 4; ++s) {
      auto t = iterate(d, s);
      CHECK(t(0.0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(t(-1.0) == 1.0);
    }
}

TEST_CASE("iterated moments") {
  CHECK(iterated_moment(Exponential{1}, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(iterated_moment(Gamma{2, 1}, 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(iterated_moment(Weibull{2, 1}, 1) == doctest::Approx(0.886227).epsilon(1e-6));
  CHECK_THROWS_AS(iterated_moment(BranchedPareto{5, 10}, 2), InfiniteMoment);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shape(0.3, 4.0), scale(0.2, 3.0);
  for (int i = 0; i < 10; ++i) {
    DistributionSpec ds[] = {Gamma{shape(rng), scale(rng)}, Weibull{shape(rng), scale(rng)}};
    for (const auto& d : ds) {
      auto t = iterate(d, 5);
      double prod = 1.0;
      for (unsigned s = 1; s <= 4; ++s) {
        double mu = t.normalizers()[s - 1];
        CHECK(mu == doctest::Approx(raw_moment(d, s) / (s * raw_moment(d, s - 1))).epsilon(1e-8));
        CHECK(mu == doctest::Approx(iterated_moment(d, s)).epsilon(1e-8));
        prod *= mu;
        CHECK(prod == doctest::Approx(raw_moment(d, s) / factorial(s)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("residual partial moments") {
  CHECK(residual_partial_moment(Exponential{1}, 1, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  CHECK(residual_partial_moment(Gamma{2, 1}, 1, 1.0) == doctest::Approx(3 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(residual_partial_moment(Gamma{2, 1}, 1, 1.0) == doctest::Approx(1.103638).epsilon(1e-6));
  for (const auto& d : closed_forms()) CHECK(residual_partial_moment(d, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(residual_partial_moment(BranchedPareto{5, 10}, 2, 1.0), InfiniteMoment);

  for (const auto& d : closed_forms())
    for (unsigned s = 1; s <= 4; ++s) {
      auto t = iterate(d, s);
      for (double x : {0.0, 0.3, 1.0, 4.0}) {
        CAPTURE(d.literal());
        CAPTURE(s);
        CAPTURE(x);
        CHECK(std::fabs(residual_partial_moment(d, s - 1, x) / raw_moment(d, s - 1) - t(x)) <= 1e-8);
      }
    }
}

TEST_CASE("recursion consistency") {
  std::vector<DistributionSpec> ds = closed_forms();
  ds.push_back(BranchedPareto{5, 10});
  for (const auto& d : ds)
    for (unsigned s = 2; s <= std::min(4u, d.max_finite_moment() + 1); ++s) {
      auto t = iterate(d, s);
      auto lo = *t.lower();
      double mu = t.normalizers().back();
      for (double x : {0.0, 0.5, 2.0}) {
        CAPTURE(d.literal());
        CAPTURE(s);
        CAPTURE(x);
        double scale = std::max(1.0, d.mean());
        double ref = oracle::integrate_inf([&](double u) { return lo(u); }, x, scale, 4000) / mu;
        if (d.family() == Family::BranchedPareto && x < 5.0)
          ref = (oracle::integrate([&](double u) { return lo(u); }, x, 5.0) +
                 oracle::integrate_inf([&](double u) { return lo(u); }, 5.0, 20.0, 20000)) /
                mu;
        CHECK(std::fabs(t(x) - ref) <= 1e-8);
        CHECK(t.derivative(x) == doctest::Approx(-lo(x) / mu).epsilon(1e-14));
      }
    }
}

TEST_CASE("quadrature path agrees with closed forms") {
  for (const auto& d : closed_forms())
    for (unsigned s = 2; s <= 4; ++s) {
      auto c = iterate(d, s), q = iterate(d, s, {.force_quadrature = true});
      CHECK(q.representation() == Representation::Quadrature);
      for (double x : {0.0, 0.2, 1.0, 3.0, 10.0}) {
        CAPTURE(d.literal());
        CAPTURE(s);
        CAPTURE(x);
        CHECK(std::fabs(c(x) - q(x)) <= 1e-10);
        CHECK(std::fabs(c(x) - tail_by_quadrature(d, s, x)) <= 1e-10);
      }
    }
}

TEST_CASE("special-function path in the far tail") {
  // values far out where the binomial expansion cancels badly
  for (const auto& d : {DistributionSpec(Gamma{3, 1}), DistributionSpec(Weibull{1.5, 1})}) {
    auto t = iterate(d, 4);
    for (double x : {20.0, 40.0}) {
      double q = tail_by_quadrature(d, 4, x);
      CHECK(t(x) == doctest::Approx(q).epsilon(1e-8));
    }
  }
}

TEST_CASE("inverse") {
  std::vector<DistributionSpec> ds = closed_forms();
  ds.push_back(BranchedPareto{5, 10});
  ds.push_back(BranchedPareto{2, 6});
  for (const auto& d : ds)
    for (unsigned s = 1; s <= std::min(3u, d.max_finite_moment() + 1); ++s) {
      auto t = iterate(d, s);
      CHECK(t.inverse(1.0) == 0.0);
      for (double p : {0.9, 0.6, 0.25, 1e-2, 1e-5}) {
        double x = t.inverse(p);
        CAPTURE(d.literal());
        CAPTURE(s);
        CHECK(t(x) == doctest::Approx(p).epsilon(1e-9));
      }
    }
  // closed-form second-iterate inverse at the branch value
  auto bp = iterate(BranchedPareto{5, 10}, 2);
  CHECK(bp.inverse(0.6) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("failure rates") {
  for (unsigned s = 1; s <= 6; ++s) {
    auto t = iterate(Exponential{2}, s);
    for (double x = 0.0; x <= 30.0; x += 1.5) CHECK(t.failure_rate(x) == doctest::Approx(2.0).epsilon(1e-10));
  }
  auto p1 = iterate(PolyExpExample{1}, 1), p2 = iterate(PolyExpExample{1}, 2);
  CHECK(p1.failure_rate(0.0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  // T_1(x) / int_x^inf T_1 = (x^2+2x+2+c) / (x^2+4x+6+c); the often quoted
  // display carries an extra constant factor (6+c)/(2+c), which does not
  // change monotonicity.
  CHECK(p2.failure_rate(0.0) == doctest::Approx(3.0 / 7).epsilon(1e-14));
  for (double x : {0.5, 2.0, 7.0}) {
    double c = 1.0;
    CHECK(p1.failure_rate(x) == doctest::Approx((x * x + c) / (x * x + 2 * x + 2 + c)).epsilon(1e-13));
    double display = (6 + c) / (2 + c) * (x * x + 2 * x + 2 + c) / (x * x + 4 * x + 6 + c);
    CHECK(p2.failure_rate(x) * (6 + c) / (2 + c) == doctest::Approx(display).epsilon(1e-13));
  }
  // s = 1 works in log space, so it survives where the tail underflows
  CHECK(iterate(Weibull{2, 1}, 1).failure_rate(40.0) == doctest::Approx(80.0).epsilon(1e-12));
  CHECK_THROWS_AS(iterate(Weibull{2, 1}, 2).failure_rate(40.0), TailUnderflow);
}
