#include "ittail/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ittail/errors.hpp"
#include "ittail/log.hpp"

namespace ittail {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRelPrune = 1e-14;
constexpr double kRelMerge = 1e-14;
constexpr double kNoiseFactor = 32.0;

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// exp(rate0 * x) * p(x): same sign as p, first rate shifted to zero, so it
// stays representable far into the tail.
struct Normalized {
  std::vector<ExpTerm> t;

  double operator()(double x) const {
    Neumaier acc;
    for (const auto& e : t) acc.add(e.rate == 0.0 ? e.coef : e.coef * std::exp(-e.rate * x));
    return acc.value();
  }

  double noise(double x) const {
    double s = 0.0;
    for (const auto& e : t) {
      double m = e.rate == 0.0 ? std::fabs(e.coef) : std::fabs(e.coef) * std::exp(-e.rate * x);
      s += m * (kNoiseFactor + 2.0 * std::fabs(e.rate * x));
    }
    return kEps * s;
  }

  int sign_at(double x) const {
    double v = (*this)(x);
    if (std::isnan(v)) return 0;
    if (std::fabs(v) <= noise(x)) return 0;
    return v > 0 ? 1 : -1;
  }

  // Derivative of the normalized form, renormalized: one term fewer.
  Normalized rolle() const {
    Normalized d;
    if (t.size() <= 1) return d;
    double shift = t[1].rate;
    for (std::size_t j = 1; j < t.size(); ++j) d.t.push_back({-t[j].rate * t[j].coef, t[j].rate - shift});
    return d;
  }
};

Normalized normalize(const ExpPoly& p) {
  Normalized n;
  if (p.is_zero()) return n;
  double r0 = p.terms().front().rate;
  for (const auto& e : p.terms()) n.t.push_back({e.coef, e.rate - r0});
  n.t.front().rate = 0.0;
  return n;
}

struct Isolation {
  std::vector<Interval> roots;
  std::vector<Interval> suspects;
  std::vector<double> critical;  // abscissae of extrema of g inside the domain
};

double bisect_tol(double x) {
  double ax = std::fabs(x);
  double ulp = std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
  return std::max(2e-13, 4.0 * ulp);
}

// Moves from `in` (inside the noise band) towards `out` (outside it, or the
// edge of a monotone piece) and returns the nearest point beyond the band.
double band_edge(const Normalized& g, double in, double out) {
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (in + out);
    if (std::fabs(out - in) <= bisect_tol(m) || m == in || m == out) break;
    if (g.sign_at(m) == 0)
      in = m;
    else
      out = m;
  }
  return out;
}

Interval bisect(const Normalized& g, double l, int sl, double r) {
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (l + r);
    if (r - l <= bisect_tol(m) || m <= l || m >= r) break;
    int sm = g.sign_at(m);
    if (sm == 0) return {band_edge(g, m, l), band_edge(g, m, r)};
    if (sm == sl)
      l = m;
    else
      r = m;
  }
  return {l, r};
}

Isolation isolate_rec(const Normalized& g, double lo, double hi) {
  Isolation out;
  if (g.t.size() <= 1) return out;

  Isolation d = isolate_rec(g.rolle(), lo, hi);
  std::vector<double> pts;
  pts.push_back(lo);
  for (const auto& iv : d.roots) pts.push_back(iv.mid());
  for (const auto& iv : d.suspects) pts.push_back(iv.mid());
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  for (std::size_t i = 1; i + 1 < pts.size(); ++i) out.critical.push_back(pts[i]);

  std::vector<int> sg(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) sg[i] = g.sign_at(pts[i]);

  for (std::size_t i = 1; i + 1 < pts.size(); ++i)
    if (sg[i] == 0) out.suspects.push_back({band_edge(g, pts[i], pts[i - 1]), band_edge(g, pts[i], pts[i + 1])});

  std::size_t prev = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (sg[i] == 0) continue;
    if (prev != pts.size() && sg[prev] != sg[i]) out.roots.push_back(bisect(g, pts[prev], sg[prev], pts[i]));
    prev = i;
  }
  return out;
}

void check_domain(Interval domain) {
  if (!(std::isfinite(domain.lo) && std::isfinite(domain.hi)) || !(domain.lo < domain.hi))
    throw std::invalid_argument("isolate_roots: domain must be a bounded, nonempty interval");
}

}  // namespace

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) {
  for (const auto& e : terms)
    if (!std::isfinite(e.coef) || !std::isfinite(e.rate))
      throw std::invalid_argument("ExpPoly: non-finite coefficient or rate");
  std::erase_if(terms, [](const ExpTerm& e) { return e.coef == 0.0; });
  std::sort(terms.begin(), terms.end(), [](const ExpTerm& a, const ExpTerm& b) { return a.rate < b.rate; });

  std::vector<ExpTerm> merged;
  for (const auto& e : terms) {
    if (!merged.empty()) {
      auto& last = merged.back();
      double scale = std::max(std::fabs(last.rate), std::fabs(e.rate));
      if (std::fabs(e.rate - last.rate) <= kRelMerge * scale) {
        last.coef += e.coef;
        continue;
      }
    }
    merged.push_back(e);
  }

  double big = 0.0;
  for (const auto& e : merged) big = std::max(big, std::fabs(e.coef));
  for (const auto& e : merged) {
    if (e.coef == 0.0) continue;
    if (std::fabs(e.coef) < kRelPrune * big) {
      if (log_level() <= LogLevel::Warning)
        log(LogLevel::Warning, "exppoly: pruned coefficient " + std::to_string(e.coef) + " at rate " +
                                   std::to_string(e.rate));
      continue;
    }
    terms_.push_back(e);
  }
}

double ExpPoly::operator()(double x) const {
  Neumaier acc;
  for (const auto& e : terms_) acc.add(e.coef * std::exp(-e.rate * x));
  return acc.value();
}

double ExpPoly::magnitude(double x) const {
  double s = 0.0;
  for (const auto& e : terms_) s += std::fabs(e.coef) * std::exp(-e.rate * x);
  return s;
}

double ExpPoly::noise(double x) const {
  double s = 0.0;
  for (const auto& e : terms_)
    s += std::fabs(e.coef) * std::exp(-e.rate * x) * (kNoiseFactor + 2.0 * std::fabs(e.rate * x));
  return kEps * s;
}

double ExpPoly::min_rate() const {
  if (terms_.empty()) throw std::logic_error("ExpPoly::min_rate on zero polynomial");
  return terms_.front().rate;
}

double ExpPoly::max_rate() const {
  if (terms_.empty()) throw std::logic_error("ExpPoly::max_rate on zero polynomial");
  return terms_.back().rate;
}

Sign ExpPoly::limit_sign() const {
  if (terms_.empty()) throw std::logic_error("ExpPoly::limit_sign on zero polynomial");
  return terms_.front().coef > 0 ? Sign::Plus : Sign::Minus;
}

ExpPoly ExpPoly::derivative(unsigned k) const {
  std::vector<ExpTerm> out;
  out.reserve(terms_.size());
  for (const auto& e : terms_) {
    // Repeated multiplication keeps derivative(j + k) bitwise equal to
    // derivative(j).derivative(k).
    double c = e.coef;
    for (unsigned i = 0; i < k; ++i) c *= -e.rate;
    out.push_back({c, e.rate});
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::tail_integral() const {
  std::vector<ExpTerm> out;
  for (const auto& e : terms_) {
    if (!(e.rate > 0.0)) throw std::domain_error("ExpPoly::tail_integral: rates must be positive");
    out.push_back({e.coef / e.rate, e.rate});
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::compose_affine(double a, double b) const {
  std::vector<ExpTerm> out;
  for (const auto& e : terms_) out.push_back({e.coef * std::exp(-e.rate * b), e.rate * a});
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::scaled(double c) const {
  std::vector<ExpTerm> out;
  for (const auto& e : terms_) out.push_back({e.coef * c, e.rate});
  return ExpPoly(std::move(out));
}

ExpPoly operator+(const ExpPoly& p, const ExpPoly& q) {
  std::vector<ExpTerm> out = p.terms();
  out.insert(out.end(), q.terms().begin(), q.terms().end());
  return ExpPoly(std::move(out));
}

ExpPoly operator-(const ExpPoly& p, const ExpPoly& q) { return p + q.scaled(-1.0); }

ExpPoly operator*(const ExpPoly& p, const ExpPoly& q) {
  std::vector<ExpTerm> out;
  out.reserve(p.size() * q.size());
  for (const auto& a : p.terms())
    for (const auto& b : q.terms()) out.push_back({a.coef * b.coef, a.rate + b.rate});
  // Equal rate sums are merged by the constructor; sort first so partial
  // sums accumulate in a fixed order.
  return ExpPoly(std::move(out));
}

double eval(const ExpPoly& p, double x) { return p(x); }

ExpPoly differentiate(const ExpPoly& p, unsigned k) { return p.derivative(k); }

unsigned sign_change_bound(const ExpPoly& p) {
  unsigned n = 0;
  const auto& t = p.terms();
  for (std::size_t i = 1; i < t.size(); ++i)
    if ((t[i].coef > 0) != (t[i - 1].coef > 0)) ++n;
  return n;
}

RootReport isolate_roots(const ExpPoly& p, Interval domain) {
  check_domain(domain);
  if (p.is_zero()) throw IndeterminateFunction("isolate_roots: zero exponential polynomial");
  RootReport rep;
  rep.sign_change_bound = sign_change_bound(p);
  Isolation iso = isolate_rec(normalize(p), domain.lo, domain.hi);
  rep.isolated_roots = std::move(iso.roots);
  rep.suspects = std::move(iso.suspects);
  rep.residual_uncertainty = !rep.suspects.empty();
  return rep;
}

RootReport isolate_roots_certified(const ExpPoly& p, Interval domain) {
  RootReport rep = isolate_roots(p, domain);
  if (rep.residual_uncertainty)
    throw ResidualUncertainty("isolate_roots: near-double root near x=" + std::to_string(rep.suspects.front().lo));
  return rep;
}

double root_window_end(const ExpPoly& p, double start) {
  if (p.size() <= 1) return start;
  Normalized g = normalize(p);
  double lead = std::fabs(g.t.front().coef);
  double rest = 0.0;
  for (std::size_t j = 1; j < g.t.size(); ++j) rest += std::fabs(g.t[j].coef);
  // For x >= 0 every other term is bounded by |coef| exp(-gap x).
  double gap = g.t[1].rate;
  double x = std::log(2.0 * rest / lead) / gap;
  return std::max({start, x, 0.0});
}

double root_window_start(const ExpPoly& p) {
  const auto& t = p.terms();
  if (t.size() <= 1) return 0.0;
  const ExpTerm& top = t.back();
  const double n = static_cast<double>(t.size() - 1);
  // For x <= -y each other term is at most 1/(2n) of the fastest one.
  double y = 0.0;
  for (std::size_t j = 0; j + 1 < t.size(); ++j)
    y = std::max(y, std::log(2.0 * n * std::fabs(t[j].coef) / std::fabs(top.coef)) / (top.rate - t[j].rate));
  return -y;
}

namespace {

// Pattern of p on [start, end] from the isolated roots, one witness per
// region chosen where |p| is largest among a few candidates.
SignPattern regions_pattern(const ExpPoly& p, const Normalized& g, double start, double end) {
  SignPattern pat;
  pat.confidence = Confidence::Exact;
  auto raw = [&](double x) { return p(x); };

  Isolation iso = isolate_rec(g, start, end);
  pat.uncertain = !iso.suspects.empty();

  const std::size_t k = iso.roots.size();
  for (std::size_t region = 0; region <= k; ++region) {
    double lo = region == 0 ? start : iso.roots[region - 1].hi;
    double hi = region == k ? end : iso.roots[region].lo;
    std::vector<double> cand{lo, hi, 0.5 * (lo + hi), lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)};
    for (double c : iso.critical)
      if (c > lo && c < hi) cand.push_back(c);
    double best_x = 0.0, best_v = 0.0;
    int best_s = 0;
    for (double c : cand) {
      int s = g.sign_at(c);
      if (s == 0) continue;
      double v = raw(c);
      if (best_s == 0 || std::fabs(v) > std::fabs(best_v)) {
        best_x = c;
        best_v = v;
        best_s = s;
      }
    }
    if (best_s == 0) {
      // Region too thin to show determinate samples: widen the search.
      for (int i = 1; i <= 64 && best_s == 0; ++i) {
        double c = lo + (hi - lo) * i / 65.0;
        int s = g.sign_at(c);
        if (s) {
          best_x = c;
          best_v = raw(c);
          best_s = s;
        }
      }
    }
    if (best_s == 0) {
      pat.uncertain = true;
      continue;
    }
    // Underflowed raw values keep the sign of the normalized form.
    if (best_v == 0.0) best_v = std::copysign(0.0, best_s);
    Interval br = region == 0 ? Interval{start, start} : iso.roots[region - 1];
    pat.push(best_s > 0 ? Sign::Plus : Sign::Minus, best_x, best_v, br);
  }
  return pat;
}

}  // namespace

SignPattern sign_pattern_exact(const ExpPoly& p, double start) {
  SignPattern pat;
  pat.confidence = Confidence::Exact;
  if (p.is_zero()) return pat;

  Normalized g = normalize(p);
  if (g.t.size() == 1) {
    double w = start + 1.0;
    pat.push(p.limit_sign(), w, p(w), {});
    return pat;
  }

  double end = root_window_end(p, start);
  end = std::max(end, start + 1.0);
  // Guarantee the window end is itself determinate.
  for (int i = 0; i < 60 && g.sign_at(end) == 0; ++i) end = start + 2.0 * (end - start);
  return regions_pattern(p, g, start, end);
}

SignPattern sign_pattern_on(const ExpPoly& p, Interval domain) {
  check_domain(domain);
  SignPattern pat;
  pat.confidence = Confidence::Exact;
  if (p.is_zero()) return pat;
  return regions_pattern(p, normalize(p), domain.lo, domain.hi);
}

}  // namespace ittail
