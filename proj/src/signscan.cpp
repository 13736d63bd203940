#include "ittail/signscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ittail/errors.hpp"
#include "ittail/parallel.hpp"

namespace ittail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr unsigned kGapBudget = 64;
constexpr int kLimitProbes = 24;

std::vector<double> initial_grid(double x_min, double x_max, unsigned n, std::span<const double> breaks) {
  std::vector<double> xs;
  unsigned n_log = 3 * n / 4, n_uni = n - n_log;
  double l0 = std::log(x_min), l1 = std::log(x_max);
  for (unsigned i = 0; i < n_log; ++i) xs.push_back(std::exp(l0 + (l1 - l0) * i / (n_log - 1)));
  for (unsigned i = 1; i <= n_uni; ++i) xs.push_back(x_max * i / n_uni);
  for (double b : breaks) {
    if (!(b > 0.0 && b < x_max)) continue;
    xs.push_back(b);
    xs.push_back(b * (1 - 1e-9));
    xs.push_back(b * (1 + 1e-9));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.back() = x_max;
  return xs;
}

double midpoint(double a, double b) {
  // geometric midpoint across wide ranges so refinement follows the log grid
  if (a > 0.0 && b > 4.0 * a) return std::sqrt(a * b);
  return 0.5 * (a + b);
}

class Scanner {
 public:
  Scanner(const std::function<double(double)>& f, const ScanConfig& cfg) : f_(f), cfg_(cfg) {}

  SignPattern run(std::span<const double> breaks) {
    double x_max = cfg_.x_max > 0 ? cfg_.x_max : 50.0;
    double x_min = cfg_.x_min > 0 ? cfg_.x_min : 1e-7 * x_max;
    if (!(x_min < x_max)) throw std::invalid_argument("scan: x_min must be below x_max");

    auto xs = initial_grid(x_min, x_max, cfg_.initial_grid, breaks);
    samples_.resize(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { samples_[i] = {xs[i], f_(xs[i]), 0}; });

    for (const auto& s : samples_)
      if (std::isfinite(s.value)) scale_ = std::max(scale_, std::fabs(s.value));
    threshold_ = cfg_.deadband * scale_;
    classify_all();
    bool any = std::any_of(samples_.begin(), samples_.end(), [](const ScanSample& s) { return s.sign != 0; });
    if (!any) throw IndeterminateFunction("scan: every sample lies inside the deadband");

    densify_gaps();
    bisect_changes();

    SignPattern out;
    out.confidence = Confidence::Sampled;
    double last_x = 0.0;
    for (const auto& s : samples_) {
      if (s.sign == 0) continue;
      out.push(s.sign > 0 ? Sign::Plus : Sign::Minus, s.x, s.value, {last_x, s.x});
      last_x = s.x;
    }
    if (cfg_.limit_sign && !out.signs.empty() && out.signs.back() != *cfg_.limit_sign) extend_to_limit(out, x_max);

    if (cfg_.trace) cfg_.trace(samples_);
    return out;
  }

 private:
  int classify(double v) const {
    if (std::isnan(v)) return 0;
    if (std::isinf(v)) return v > 0 ? 1 : -1;
    if (std::fabs(v) <= threshold_) return 0;
    return v > 0 ? 1 : -1;
  }

  void classify_all() {
    for (auto& s : samples_) s.sign = classify(s.value);
  }

  ScanSample eval(double x) const {
    double v = f_(x);
    return {x, v, classify(v)};
  }

  void insert(std::vector<ScanSample> extra) {
    samples_.insert(samples_.end(), extra.begin(), extra.end());
    std::stable_sort(samples_.begin(), samples_.end(),
                     [](const ScanSample& a, const ScanSample& b) { return a.x < b.x; });
    auto same = [](const ScanSample& a, const ScanSample& b) { return a.x == b.x; };
    samples_.erase(std::unique(samples_.begin(), samples_.end(), same), samples_.end());
  }

  // Breadth-first subdivision of every run of indeterminate samples that
  // sits between two signed ones, looking for hidden signed values.
  void densify_gaps() {
    std::vector<std::pair<std::size_t, std::size_t>> gaps;  // [first, last] signed neighbours
    std::size_t prev = samples_.size();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (samples_[i].sign == 0) continue;
      if (prev != samples_.size() && i > prev + 1) gaps.push_back({prev, i});
      prev = i;
    }
    std::vector<ScanSample> extra;
    for (auto [a, b] : gaps) {
      std::vector<double> pts;
      for (std::size_t i = a; i <= b; ++i) pts.push_back(samples_[i].x);
      unsigned used = 0;
      bool found = false;
      for (unsigned depth = 0; depth < cfg_.max_refinement_depth && used < kGapBudget && !found; ++depth) {
        std::vector<double> mids;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) mids.push_back(midpoint(pts[i], pts[i + 1]));
        if (mids.size() > kGapBudget - used) {
          // spread the remaining budget evenly over the gap
          std::vector<double> pick;
          std::size_t room = kGapBudget - used;
          for (std::size_t k = 0; k < room; ++k) pick.push_back(mids[(2 * k + 1) * mids.size() / (2 * room)]);
          mids.swap(pick);
        }
        std::vector<ScanSample> got(mids.size());
        parallel_for(mids.size(), [&](std::size_t i) { got[i] = eval(mids[i]); });
        used += static_cast<unsigned>(mids.size());
        for (const auto& g : got) {
          if (g.sign != 0) found = true;
          pts.push_back(g.x);
        }
        std::sort(pts.begin(), pts.end());
        extra.insert(extra.end(), got.begin(), got.end());
      }
    }
    if (!extra.empty()) insert(std::move(extra));
  }

  void bisect_changes() {
    std::vector<ScanSample> extra;
    std::size_t prev = samples_.size();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (samples_[i].sign == 0) continue;
      if (prev != samples_.size() && samples_[prev].sign != samples_[i].sign) {
        ScanSample l = samples_[prev], r = samples_[i];
        for (unsigned d = 0; d < cfg_.max_refinement_depth; ++d) {
          double m = 0.5 * (l.x + r.x);
          if (!(m > l.x && m < r.x)) break;
          ScanSample s = eval(m);
          extra.push_back(s);
          if (s.sign == 0) break;
          (s.sign == l.sign ? l : r) = s;
        }
      }
      prev = i;
    }
    if (!extra.empty()) insert(std::move(extra));
  }

  void extend_to_limit(SignPattern& out, double x_max) {
    Sign want = *cfg_.limit_sign;
    double x = x_max;
    for (int k = 0; k < kLimitProbes; ++k) {
      x *= 2.0;
      ScanSample s = eval(x);
      samples_.push_back(s);
      if (s.sign != 0 && (s.sign > 0) == (want == Sign::Plus)) {
        out.push(want, x, s.value, {out.witnesses.back(), x});
        return;
      }
    }
    out.push(want, kInf, std::numeric_limits<double>::quiet_NaN(), {out.witnesses.back(), kInf});
  }

  const std::function<double(double)>& f_;
  const ScanConfig& cfg_;
  std::vector<ScanSample> samples_;
  double scale_ = 0.0;
  double threshold_ = 0.0;
};

}  // namespace

void validate(const ScanConfig& cfg) {
  if (cfg.x_max < 0 || cfg.x_min < 0 || !std::isfinite(cfg.x_max) || !std::isfinite(cfg.x_min))
    throw std::invalid_argument("ScanConfig: x_max and x_min must be finite and nonnegative");
  if (cfg.initial_grid < 64) throw std::invalid_argument("ScanConfig: initial_grid must be at least 64");
  if (!(cfg.deadband > 0.0)) throw std::invalid_argument("ScanConfig: deadband must be positive");
}

SignPattern scan(const std::function<double(double)>& f, const ScanConfig& cfg, std::span<const double> breakpoints) {
  validate(cfg);
  Scanner s(f, cfg);
  return s.run(breakpoints);
}

SignPattern scan(const ExpPoly& p, ScanConfig cfg) {
  if (p.is_zero()) throw IndeterminateFunction("scan: zero exponential polynomial");
  if (cfg.x_max == 0.0) cfg.x_max = std::max(50.0, p.min_rate() > 0 ? 20.0 / p.min_rate() : 50.0);
  if (!cfg.limit_sign) cfg.limit_sign = p.limit_sign();
  auto f = [&p](double x) {
    double v = p(x);
    return std::fabs(v) <= p.noise(x) ? 0.0 : v;
  };
  return scan(f, cfg);
}

bool check_integration_lemma(const ExpPoly& f, const ScanConfig& cfg) {
  ExpPoly g = f.tail_integral();
  ScanConfig c = cfg;
  if (c.x_max == 0.0) c.x_max = std::max(50.0, 20.0 / f.min_rate());
  auto pf = scan(f, c);
  auto pg = scan(g, c);
  return is_final_part(pg.signs, pf.signs);
}

}  // namespace ittail
