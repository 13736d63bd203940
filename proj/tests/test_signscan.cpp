#include <cmath>
#include <random>

#include "doctest.h"
#include "ittail/errors.hpp"
#include "ittail/signscan.hpp"

using namespace ittail;

namespace {

ExpPoly random_exppoly(std::mt19937_64& rng, int max_terms) {
  std::uniform_int_distribution<int> n(1, max_terms);
  std::uniform_real_distribution<double> rate(0.1, 10.0), coef(-5.0, 5.0);
  std::vector<ExpTerm> t;
  int k = n(rng);
  for (int i = 0; i < k; ++i) t.push_back({coef(rng), rate(rng)});
  return ExpPoly(t);
}

}  // namespace

TEST_CASE("basic scans") {
  ScanConfig cfg;
  cfg.x_max = 10;
  auto p = scan([](double x) { return x - 1; }, cfg);
  CHECK(p.str() == "-,+");
  REQUIRE(p.change_points.size() == 1);
  CHECK(p.change_points[0].contains(1.0));
  CHECK(p.change_points[0].width() < 1e-3);
  CHECK(p.witnesses[0] < 1.0);
  CHECK(p.witnesses[1] > 1.0);
  CHECK(p.confidence == Confidence::Sampled);

  CHECK(scan([](double x) { return std::exp(-x); }, cfg).str() == "+");
  CHECK_THROWS_AS(scan([](double) { return 0.0; }, cfg), IndeterminateFunction);
  cfg.initial_grid = 10;
  CHECK_THROWS(scan([](double x) { return x; }, cfg));
}

TEST_CASE("limit sign beyond the window") {
  ScanConfig cfg;
  cfg.x_max = 10;
  cfg.limit_sign = Sign::Minus;
  auto p = scan([](double x) { return 15 - x; }, cfg);
  CHECK(p.str() == "+,-");
  CHECK(p.witnesses[1] == 20.0);
  auto q = scan([](double x) { return x < 1e3 ? 1.0 : 0.0; }, cfg);
  CHECK(q.str() == "+,-");
  CHECK(std::isinf(q.witnesses[1]));
}

TEST_CASE("deadband hides noise but keeps touching zeros as no change") {
  ScanConfig cfg;
  cfg.x_max = 5;
  // (x-1)^2 touches zero: one sign
  CHECK(scan([](double x) { return (x - 1) * (x - 1); }, cfg).str() == "+");
  // tiny noise far below the deadband does not make changes
  auto p = scan([](double x) { return x < 2 ? 1.0 : 1e-14 * std::sin(100 * x); }, cfg);
  CHECK(p.str() == "+");
}

TEST_CASE("indeterminate gaps are refined") {
  ScanConfig cfg;
  cfg.x_max = 10;
  cfg.initial_grid = 64;
  // a narrow negative dip in an otherwise flat region
  auto f = [](double x) {
    if (x < 1) return 1.0;
    if (x > 9) return 1.0;
    if (std::fabs(x - 5.01) < 0.02) return -1.0;
    return 0.0;
  };
  CHECK(scan(f, cfg).str() == "+,-,+");
}

TEST_CASE("negation and scaling") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    ExpPoly p = random_exppoly(rng, 5);
    if (p.is_zero()) continue;
    auto a = scan(p, {}), b = scan(-p, {}), c = scan(2.5 * p, {});
    CHECK(negated(a).signs == b.signs);
    CHECK(a.signs == c.signs);
    CHECK(a.witnesses == c.witnesses);
  }
}

TEST_CASE("sampled patterns agree with exact ones") {
  std::mt19937_64 rng(99);
  int mismatches = 0;
  for (int i = 0; i < 300; ++i) {
    ExpPoly p = random_exppoly(rng, 5);
    if (p.is_zero()) continue;
    auto exact = sign_pattern_exact(p);
    if (exact.uncertain) continue;
    auto sampled = scan(p, {});
    if (exact.signs != sampled.signs) {
      ++mismatches;
      MESSAGE("mismatch: ", exact.str(), " vs ", sampled.str());
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("refinement never removes changes") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    ExpPoly p = random_exppoly(rng, 5);
    if (p.is_zero()) continue;
    ScanConfig lo, hi;
    hi.initial_grid = 2048;
    hi.max_refinement_depth = 20;
    CHECK(scan(p, hi).changes() >= scan(p, lo).changes());
  }
}

TEST_CASE("integration lemma") {
  ScanConfig cfg;
  // +,-,+ with all three final parts reachable
  CHECK(check_integration_lemma(ExpPoly{{1, 1}}, cfg));
  ExpPoly f{{1, 0.5}, {-3, 1}, {2.2, 2}};
  CHECK(scan(f, cfg).str() == "+,-,+");
  CHECK(check_integration_lemma(f, cfg));
  std::mt19937_64 rng(123);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    ExpPoly p = random_exppoly(rng, 4);
    if (p.is_zero()) continue;
    if (!check_integration_lemma(p, cfg)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("trace receives ordered samples") {
  ScanConfig cfg;
  cfg.x_max = 3;
  std::size_t n = 0;
  bool sorted = true;
  cfg.trace = [&](std::span<const ScanSample> s) {
    n = s.size();
    for (std::size_t i = 1; i < s.size(); ++i) sorted = sorted && s[i - 1].x < s[i].x;
  };
  scan([](double x) { return x - 1; }, cfg);
  CHECK(n >= 512);
  CHECK(sorted);
}
