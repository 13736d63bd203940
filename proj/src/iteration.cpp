#include "ittail/iteration.hpp"

#include <algorithm>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "detail/quadrature.hpp"
#include "ittail/errors.hpp"

namespace ittail {

struct IteratedTail::State {
  explicit State(DistributionSpec b) : base(std::move(b)) {}
  DistributionSpec base;
  unsigned s = 1;
  Representation rep = Representation::Quadrature;
  std::vector<double> moments;
  std::vector<double> normalizers;
  std::optional<ExpPoly> ep;
  std::shared_ptr<const State> lower;
  bool force_quadrature = false;
};

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kQuadTol = 1e-13;
// Beyond this cancellation ratio the incomplete-gamma sums lose too many
// digits and the integral is evaluated numerically instead.
constexpr double kMaxCancellation = 1e3;

struct Value {
  double v = 0.0;
  double err = 0.0;
};

Value quad_residual(const DistributionSpec& d, unsigned k, double x) {
  std::vector<double> breaks;
  for (double b : breakpoints(d))
    if (b > x) breaks.push_back(b - x);
  double hi = std::numeric_limits<double>::infinity();
  std::function<double(double)> f;
  if (auto n = d.get_if<NumericDensity>()) {
    hi = std::max(0.0, n->x_max - x);
    f = [&, k](double u) { return n->density(x + u) * (k ? std::pow(u, static_cast<double>(k)) : 1.0); };
  } else {
    f = [&, k](double u) {
      double lf = log_density(d, x + u);
      if (k == 0) return std::exp(lf);
      return std::exp(lf + k * std::log(u));
    };
  }
  if (hi <= 0.0) return {};
  double scale = std::max(1e-6, d.mean());
  auto r = detail::integrate(f, 0.0, hi, breaks, scale, kQuadTol);
  return {r.value, std::max(r.error, kQuadTol * std::fabs(r.value))};
}

// E[X^j 1{X > x}] / E X^k pieces for Gamma and Weibull, combined with the
// binomial expansion of (t - x)^k.
std::optional<Value> special_tail(const DistributionSpec& d, unsigned k, double x) {
  std::vector<double> partial(k + 1);  // E[X^j ; X > x] / E X^k
  double z = 0.0;
  if (auto g = d.get_if<Gamma>()) {
    z = x / g->scale;
    // prod_{i<j}(a+i) / prod_{i<k}(a+i)
    for (unsigned j = 0; j <= k; ++j) {
      double ratio = 1.0;
      for (unsigned i = j; i < k; ++i) ratio /= (g->shape + i);
      partial[j] = ratio * boost::math::gamma_q(g->shape + j, z);
    }
  } else if (auto w = d.get_if<Weibull>()) {
    z = x / w->scale;
    double za = std::pow(z, w->shape);
    double gk = boost::math::tgamma(1.0 + k / w->shape);
    for (unsigned j = 0; j <= k; ++j) {
      double a = 1.0 + j / w->shape;
      partial[j] = boost::math::tgamma(a) / gk * boost::math::gamma_q(a, za);
    }
  } else {
    return std::nullopt;
  }
  double sum = 0.0, mag = 0.0;
  for (unsigned j = 0; j <= k; ++j) {
    double term = boost::math::binomial_coefficient<double>(k, j) * std::pow(-z, static_cast<double>(k - j)) * partial[j];
    sum += term;
    mag += std::fabs(term);
  }
  if (x > 0 && !(sum > 0.0 && mag <= kMaxCancellation * sum)) return std::nullopt;
  return Value{sum, 16 * kEps * mag};
}

Value eval_state(const IteratedTail::State& st, double x) {
  if (x < 0.0) return {1.0, 0.0};
  const unsigned s = st.s;
  switch (st.rep) {
    case Representation::ClosedFormExpPoly: {
      double v = (*st.ep)(x);
      return {std::clamp(v, 0.0, 1.0), st.ep->noise(x)};
    }
    case Representation::ClosedFormPolyExp: {
      double c = st.base.get_if<PolyExpExample>()->c;
      double k = s * (s + 1.0) + c;
      double v = std::exp(-x) * (x * x + 2.0 * s * x + k) / k;
      return {v, 8 * kEps * v};
    }
    case Representation::ClosedFormPiecewise: {
      const auto& b = *st.base.get_if<BranchedPareto>();
      double v = 0.0;
      if (s == 1) {
        v = tail(st.base, x);
      } else if (x <= b.c1) {
        v = 4.0 / (3.0 * b.c1 + b.c2) * (b.c1 * b.c1 / (x + b.c1) + (b.c2 - b.c1) / 4.0);
      } else {
        v = (b.c1 + b.c2) * (b.c1 + b.c2) / ((3.0 * b.c1 + b.c2) * (x + b.c2));
      }
      return {v, 8 * kEps * v};
    }
    case Representation::SpecialFunction: {
      if (s == 1) {
        double v = tail(st.base, x);
        return {v, 64 * kEps * v};
      }
      if (auto r = special_tail(st.base, s - 1, x)) return *r;
      Value q = quad_residual(st.base, s - 1, x);
      double m = st.moments[s - 1];
      return {q.v / m, q.err / m};
    }
    case Representation::Quadrature: {
      if (s == 1 && !st.base.get_if<NumericDensity>()) {
        double v = tail(st.base, x);
        return {v, 64 * kEps * v};
      }
      Value q = quad_residual(st.base, s - 1, x);
      double m = st.moments[s - 1];
      return {std::clamp(q.v / m, 0.0, 1.0), q.err / m};
    }
  }
  return {};
}

Representation choose(const DistributionSpec& d, unsigned s, const IterationOptions& o) {
  if (d.tail_exppoly()) return (o.force_quadrature && s > 1) ? Representation::Quadrature : Representation::ClosedFormExpPoly;
  if (o.force_quadrature && s > 1) return Representation::Quadrature;
  switch (d.family()) {
    case Family::PolyExp: return Representation::ClosedFormPolyExp;
    case Family::BranchedPareto: return Representation::ClosedFormPiecewise;
    case Family::Gamma:
    case Family::Weibull: return Representation::SpecialFunction;
    default: return Representation::Quadrature;
  }
}

double generic_inverse(const IteratedTail& t, double p) {
  double lo = 0.0, hi = std::max(1e-3, t.base().mean() * t.order());
  for (int i = 0; i < 2000 && t(hi) > p; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi || hi - lo <= 4e-16 * hi) break;
    if (t(m) > p)
      lo = m;
    else
      hi = m;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    double dv = t.derivative(x);
    if (!(dv < 0.0) || !std::isfinite(dv)) break;
    double nx = x - (t(x) - p) / dv;
    if (!(nx >= lo && nx <= hi)) break;
    x = nx;
  }
  return x;
}

void cross_check_piecewise(const IteratedTail& t) {
  const auto& b = *t.base().get_if<BranchedPareto>();
  for (double x : {0.0, 0.5 * b.c1, b.c1, 2.0 * b.c1, 10.0 * (b.c1 + b.c2)}) {
    double closed = t(x);
    double quad = tail_by_quadrature(t.base(), t.order(), x);
    if (std::fabs(closed - quad) > 1e-7 * std::max(closed, 1e-300))
      throw std::logic_error("branched Pareto closed form disagrees with quadrature at x=" + std::to_string(x));
  }
}

}  // namespace

std::string to_string(Representation r) {
  switch (r) {
    case Representation::ClosedFormExpPoly: return "closed_form_exppoly";
    case Representation::ClosedFormPolyExp: return "closed_form_polyexp";
    case Representation::ClosedFormPiecewise: return "closed_form_piecewise";
    case Representation::SpecialFunction: return "special_function";
    case Representation::Quadrature: return "quadrature";
  }
  return "?";
}

IteratedTail iterate(const DistributionSpec& d, unsigned s, IterationOptions opts) {
  if (s == 0) throw std::invalid_argument("iterate: s must be >= 1");
  if (s - 1 > d.max_finite_moment())
    throw InfiniteMoment("iterate: E X^" + std::to_string(s - 1) + " diverges for " + d.literal());

  std::shared_ptr<const IteratedTail::State> lower;
  if (s > 1) lower = iterate(d, s - 1, opts).st_;

  auto st = std::make_shared<IteratedTail::State>(d);
  st->s = s;
  st->force_quadrature = opts.force_quadrature;
  st->lower = lower;
  st->rep = choose(d, s, opts);
  if (st->rep == Representation::ClosedFormPiecewise && s > 2) st->rep = Representation::Quadrature;
  if (lower) {
    st->moments = lower->moments;
    st->normalizers = lower->normalizers;
    st->moments.push_back(raw_moment(d, s - 1));
    st->normalizers.push_back(st->moments[s - 1] / ((s - 1) * st->moments[s - 2]));
  } else {
    st->moments = {1.0};
  }

  if (st->rep == Representation::ClosedFormExpPoly) {
    std::vector<ExpTerm> terms;
    double norm = 0.0;
    for (const auto& t : d.tail_exppoly()->terms()) {
      double c = t.coef / std::pow(t.rate, static_cast<double>(s - 1));
      terms.push_back({c, t.rate});
      norm += c;
    }
    for (auto& t : terms) t.coef /= norm;
    st->ep = ExpPoly(std::move(terms));
  }

  IteratedTail out(std::move(st));
  if (out.representation() == Representation::ClosedFormPiecewise && s == 2) cross_check_piecewise(out);
  return out;
}

const DistributionSpec& IteratedTail::base() const { return st_->base; }
unsigned IteratedTail::order() const { return st_->s; }
Representation IteratedTail::representation() const { return st_->rep; }
const std::vector<double>& IteratedTail::normalizers() const { return st_->normalizers; }
const std::vector<double>& IteratedTail::moments() const { return st_->moments; }
const ExpPoly* IteratedTail::exppoly() const { return st_->ep ? &*st_->ep : nullptr; }

double IteratedTail::operator()(double x) const { return eval_state(*st_, x).v; }
double IteratedTail::error_bound(double x) const { return eval_state(*st_, x).err; }

std::optional<IteratedTail> IteratedTail::lower() const {
  if (!st_->lower) return std::nullopt;
  return IteratedTail(st_->lower);
}

double IteratedTail::derivative(double x) const {
  if (x < 0.0) return 0.0;
  if (st_->s == 1) return -density(st_->base, x);
  double lo = eval_state(*st_->lower, x).v;
  return -lo / st_->normalizers.back();
}

double IteratedTail::inverse(double p) const {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("IteratedTail::inverse: p must lie in (0, 1]");
  if (p == 1.0) return 0.0;
  const unsigned s = st_->s;
  if (s == 1) return tail_inverse(st_->base, p);
  if (auto e = st_->base.get_if<Exponential>()) return -std::log(p) / e->rate;
  if (st_->rep == Representation::ClosedFormPiecewise) {
    const auto& b = *st_->base.get_if<BranchedPareto>();
    double k = 3.0 * b.c1 + b.c2;
    if (p <= (b.c1 + b.c2) / k) return (b.c1 + b.c2) * (b.c1 + b.c2) / (k * p) - b.c2;
    return 4.0 * b.c1 * b.c1 / (k * p - (b.c2 - b.c1)) - b.c1;
  }
  return generic_inverse(*this, p);
}

double IteratedTail::failure_rate(double x) const {
  if (x < 0.0) x = 0.0;
  const unsigned s = st_->s;
  if (s == 1) {
    double lt = log_tail(st_->base, x);
    if (!std::isfinite(lt)) throw TailUnderflow("failure_rate: tail vanishes at x=" + std::to_string(x));
    double ld = log_density(st_->base, x);
    return std::exp(ld - lt);
  }
  double t = eval_state(*st_, x).v;
  if (!(t > 1e-290)) throw TailUnderflow("failure_rate: T_s underflows at x=" + std::to_string(x));
  double lo = eval_state(*st_->lower, x).v;
  return lo / (st_->normalizers.back() * t);
}

double eval_tail(const IteratedTail& t, double x) { return t(x); }

double iterated_moment(const DistributionSpec& d, unsigned s) {
  if (s == 0) throw std::invalid_argument("iterated_moment: s must be >= 1");
  return raw_moment(d, s) / (s * raw_moment(d, s - 1));
}

double residual_partial_moment(const DistributionSpec& d, unsigned k, double x) {
  if (k > d.max_finite_moment())
    throw InfiniteMoment("E (X-x)_+^" + std::to_string(k) + " diverges for " + d.literal());
  if (x < 0.0) throw std::domain_error("residual_partial_moment: x must be >= 0");
  return quad_residual(d, k, x).v;
}

double tail_by_quadrature(const DistributionSpec& d, unsigned s, double x) {
  if (s == 0) throw std::invalid_argument("tail_by_quadrature: s must be >= 1");
  if (x < 0.0) return 1.0;
  return quad_residual(d, s - 1, x).v / raw_moment(d, s - 1);
}

}  // namespace ittail
