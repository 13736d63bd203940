#include "ittail/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <climits>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "detail/quadrature.hpp"
#include "ittail/errors.hpp"
#include "ittail/literal.hpp"

namespace ittail {

struct DistributionSpec::Impl {
  Variant v;
  std::optional<ExpPoly> tail_ep;
  std::optional<ExpPoly> density_ep;
  std::vector<double> breaks;
  unsigned max_moment = UINT_MAX;
  double mean = 0.0;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double factorial(unsigned k) {
  double f = 1.0;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

double exppoly_moment(const ExpPoly& tail, unsigned k) {
  if (k == 0) return 1.0;
  double s = 0.0;
  for (const auto& t : tail.terms()) s += t.coef * factorial(k) / std::pow(t.rate, static_cast<double>(k));
  return s;
}

// log of a positive exponential polynomial without underflow.
double log_positive(const ExpPoly& p, double x) {
  if (p.is_zero()) return -kInf;
  double r0 = p.terms().front().rate;
  double s = 0.0;
  for (const auto& t : p.terms()) s += t.coef * std::exp(-(t.rate - r0) * x);
  if (!(s > 0.0)) return -kInf;
  return std::log(s) - r0 * x;
}

double gamma_density_std(double a, double z) {
  if (z < 0) return 0.0;
  if (z == 0.0) return a < 1 ? kInf : (a == 1 ? 1.0 : 0.0);
  return boost::math::gamma_p_derivative(a, z);
}

double gamma_log_tail_std(double a, double z) {
  if (z <= 0) return 0.0;
  double q = boost::math::gamma_q(a, z);
  if (q > 1e-290) return std::log(q);
  // Asymptotic expansion of the upper incomplete gamma function.
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 12; ++n) {
    term *= (a - n) / z;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return (a - 1) * std::log(z) - z + std::log(sum) - std::lgamma(a);
}

double numeric_integral(const NumericDensity& n, double lo, double hi, unsigned k) {
  std::function<double(double)> f = [&](double t) { return n.density(t); };
  if (k > 0) f = [&](double t) { return std::pow(t, static_cast<double>(k)) * n.density(t); };
  return detail::integrate(f, lo, hi, n.breaks, 1.0, 1e-13).value;
}

double generic_inverse(const DistributionSpec& d, double p) {
  double lo = 0.0, hi = std::max(1e-3, d.mean());
  for (int i = 0; i < 2000 && tail(d, hi) > p; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi || hi - lo <= 1e-15 * hi) break;
    if (tail(d, m) > p)
      lo = m;
    else
      hi = m;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    double f = density(d, x);
    if (!(f > 0.0) || !std::isfinite(f)) break;
    double nx = x + (tail(d, x) - p) / f;
    if (!(nx >= lo && nx <= hi)) break;
    x = nx;
  }
  return x;
}

struct Validate {
  DistributionSpec::Impl& impl;

  void operator()(Exponential& e) {
    require(positive(e.rate), "exponential: rate must be positive");
    impl.tail_ep = ExpPoly{{1.0, e.rate}};
    impl.mean = 1.0 / e.rate;
  }
  void operator()(Gamma& g) {
    require(positive(g.shape) && positive(g.scale), "gamma: shape and scale must be positive");
    impl.mean = g.shape * g.scale;
  }
  void operator()(Weibull& w) {
    require(positive(w.shape) && positive(w.scale), "weibull: shape and scale must be positive");
    impl.mean = w.scale * std::tgamma(1.0 + 1.0 / w.shape);
  }
  void operator()(BranchedPareto& b) {
    require(positive(b.c1) && positive(b.c2), "bpareto: c1 and c2 must be positive");
    impl.breaks = {b.c1};
    impl.max_moment = 1;
    impl.mean = (3.0 * b.c1 + b.c2) / 4.0;
  }
  void operator()(PolyExpExample& p) {
    require(positive(p.c), "polyexp: c must be positive");
    impl.mean = (6.0 + p.c) / (p.c + 2.0);
  }
  void operator()(MaxExp& m) {
    require(m.rates.size() >= 2, "maxexp: needs at least two rates");
    require(m.rates.size() <= 20, "maxexp: at most 20 rates");
    for (double r : m.rates) require(positive(r), "maxexp: rates must be positive");
    std::sort(m.rates.begin(), m.rates.end());
    impl.tail_ep = maxexp_tail(m.rates);
    impl.mean = exppoly_moment(*impl.tail_ep, 1);
  }
  void operator()(ExpPolyTail& e) {
    const ExpPoly& p = e.tail;
    require(!p.is_zero(), "exptail: zero tail");
    for (const auto& t : p.terms()) require(t.rate > 0.0, "exptail: rates must be positive");
    require(std::fabs(p(0.0) - 1.0) <= 1e-12, "exptail: tail(0) must equal 1");
    ExpPoly dens = -p.derivative(1);
    double span = std::max(50.0, 40.0 / p.min_rate());
    for (int i = 0; i <= 400; ++i) {
      double x = span * i / 400.0;
      require(dens(x) >= -dens.noise(x) - 1e-15, "exptail: tail must be nonincreasing");
    }
    impl.tail_ep = p;
    impl.mean = exppoly_moment(p, 1);
  }
  void operator()(NumericDensity& n) {
    require(static_cast<bool>(n.density), "numeric: density callable required");
    require(positive(n.x_max), "numeric: x_max must be positive");
    std::sort(n.breaks.begin(), n.breaks.end());
    for (double b : n.breaks) require(b >= 0.0 && b <= n.x_max, "numeric: breaks must lie in [0, x_max]");
    for (int i = 0; i <= 256; ++i) {
      double x = n.x_max * i / 256.0;
      double f = n.density(x);
      require(std::isfinite(f) || i == 0, "numeric: density must be finite");
      require(!(f < 0.0), "numeric: density must be nonnegative");
    }
    double mass = numeric_integral(n, 0.0, n.x_max, 0);
    require(std::fabs(mass - 1.0) <= 1e-8, "numeric: density must integrate to 1 on [0, x_max]");
    impl.breaks = n.breaks;
    impl.mean = numeric_integral(n, 0.0, n.x_max, 1);
  }
};

}  // namespace

ExpPoly maxexp_tail(const std::vector<double>& rates) {
  const std::size_t n = rates.size();
  if (n == 0 || n > 20) throw std::invalid_argument("maxexp_tail: 1..20 rates");
  std::vector<ExpTerm> terms;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    double r = 0.0;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ul << i)) {
        r += rates[i];
        ++bits;
      }
    terms.push_back({bits % 2 ? 1.0 : -1.0, r});
  }
  return ExpPoly(std::move(terms));
}

DistributionSpec::DistributionSpec(Variant v) {
  auto impl = std::make_shared<Impl>();
  std::visit(Validate{*impl}, v);
  impl->v = std::move(v);
  if (impl->tail_ep) impl->density_ep = -impl->tail_ep->derivative(1);
  impl_ = std::move(impl);
}

DistributionSpec::DistributionSpec(Exponential v) : DistributionSpec(Variant(v)) {}
DistributionSpec::DistributionSpec(Gamma v) : DistributionSpec(Variant(v)) {}
DistributionSpec::DistributionSpec(Weibull v) : DistributionSpec(Variant(v)) {}
DistributionSpec::DistributionSpec(BranchedPareto v) : DistributionSpec(Variant(v)) {}
DistributionSpec::DistributionSpec(PolyExpExample v) : DistributionSpec(Variant(v)) {}
DistributionSpec::DistributionSpec(MaxExp v) : DistributionSpec(Variant(std::move(v))) {}
DistributionSpec::DistributionSpec(ExpPolyTail v) : DistributionSpec(Variant(std::move(v))) {}
DistributionSpec::DistributionSpec(NumericDensity v) : DistributionSpec(Variant(std::move(v))) {}

Family DistributionSpec::family() const { return static_cast<Family>(impl_->v.index()); }
const DistributionSpec::Variant& DistributionSpec::variant() const { return impl_->v; }
const std::optional<ExpPoly>& DistributionSpec::tail_exppoly() const { return impl_->tail_ep; }
unsigned DistributionSpec::max_finite_moment() const { return impl_->max_moment; }
double DistributionSpec::mean() const { return impl_->mean; }

std::string DistributionSpec::literal() const {
  auto f = [](double v) { return format_number(v); };
  struct Lit {
    decltype(f)& fmt;
    std::string operator()(const Exponential& e) const { return "exp(" + fmt(e.rate) + ")"; }
    std::string operator()(const Gamma& g) const { return "gamma(" + fmt(g.shape) + "," + fmt(g.scale) + ")"; }
    std::string operator()(const Weibull& w) const { return "weibull(" + fmt(w.shape) + "," + fmt(w.scale) + ")"; }
    std::string operator()(const BranchedPareto& b) const { return "bpareto(" + fmt(b.c1) + "," + fmt(b.c2) + ")"; }
    std::string operator()(const PolyExpExample& p) const { return "polyexp(" + fmt(p.c) + ")"; }
    std::string operator()(const MaxExp& m) const {
      std::string s = "maxexp(";
      for (std::size_t i = 0; i < m.rates.size(); ++i) s += (i ? "," : "") + fmt(m.rates[i]);
      return s + ")";
    }
    std::string operator()(const ExpPolyTail& e) const { return "exptail(" + format_exppoly(e.tail) + ")"; }
    std::string operator()(const NumericDensity& n) const { return n.name; }
  };
  return std::visit(Lit{f}, impl_->v);
}

double density(const DistributionSpec& d, double x) {
  if (x < 0.0) return 0.0;
  const auto& impl = d.impl();
  if (impl.density_ep) return std::max(0.0, (*impl.density_ep)(x));
  struct D {
    double x;
    double operator()(const Gamma& g) const { return gamma_density_std(g.shape, x / g.scale) / g.scale; }
    double operator()(const Weibull& w) const {
      double z = x / w.scale;
      if (z == 0.0) return w.shape < 1 ? kInf : (w.shape == 1 ? 1.0 / w.scale : 0.0);
      return w.shape / w.scale * std::pow(z, w.shape - 1) * std::exp(-std::pow(z, w.shape));
    }
    double operator()(const BranchedPareto& b) const {
      if (x < b.c1) return 2.0 * b.c1 * b.c1 / std::pow(x + b.c1, 3);
      return (b.c1 + b.c2) * (b.c1 + b.c2) / (2.0 * std::pow(x + b.c2, 3));
    }
    double operator()(const PolyExpExample& p) const { return (x * x + p.c) * std::exp(-x) / (p.c + 2.0); }
    double operator()(const NumericDensity& n) const { return x > n.x_max ? 0.0 : n.density(x); }
    double operator()(const Exponential&) const { return 0.0; }
    double operator()(const MaxExp&) const { return 0.0; }
    double operator()(const ExpPolyTail&) const { return 0.0; }
  };
  return std::visit(D{x}, impl.v);
}

double log_density(const DistributionSpec& d, double x) {
  if (x < 0.0) return -kInf;
  const auto& impl = d.impl();
  if (impl.density_ep) return log_positive(*impl.density_ep, x);
  struct D {
    double x;
    double operator()(const Gamma& g) const {
      double z = x / g.scale;
      if (z == 0.0) return g.shape < 1 ? kInf : (g.shape == 1 ? -std::log(g.scale) : -kInf);
      return (g.shape - 1) * std::log(z) - z - std::lgamma(g.shape) - std::log(g.scale);
    }
    double operator()(const Weibull& w) const {
      double z = x / w.scale;
      if (z == 0.0) return w.shape < 1 ? kInf : (w.shape == 1 ? -std::log(w.scale) : -kInf);
      return std::log(w.shape / w.scale) + (w.shape - 1) * std::log(z) - std::pow(z, w.shape);
    }
    double operator()(const BranchedPareto& b) const {
      if (x < b.c1) return std::log(2.0 * b.c1 * b.c1) - 3.0 * std::log(x + b.c1);
      return 2.0 * std::log(b.c1 + b.c2) - std::log(2.0) - 3.0 * std::log(x + b.c2);
    }
    double operator()(const PolyExpExample& p) const { return std::log(x * x + p.c) - x - std::log(p.c + 2.0); }
    double operator()(const NumericDensity& n) const { return x > n.x_max ? -kInf : std::log(n.density(x)); }
    double operator()(const Exponential&) const { return -kInf; }
    double operator()(const MaxExp&) const { return -kInf; }
    double operator()(const ExpPolyTail&) const { return -kInf; }
  };
  return std::visit(D{x}, impl.v);
}

double tail(const DistributionSpec& d, double x) {
  if (x < 0.0) return 1.0;
  const auto& impl = d.impl();
  if (impl.tail_ep) return std::clamp((*impl.tail_ep)(x), 0.0, 1.0);
  struct T {
    double x;
    double operator()(const Gamma& g) const { return boost::math::gamma_q(g.shape, x / g.scale); }
    double operator()(const Weibull& w) const { return std::exp(-std::pow(x / w.scale, w.shape)); }
    double operator()(const BranchedPareto& b) const {
      if (x <= b.c1) return b.c1 * b.c1 / ((x + b.c1) * (x + b.c1));
      return (b.c1 + b.c2) * (b.c1 + b.c2) / (4.0 * (x + b.c2) * (x + b.c2));
    }
    double operator()(const PolyExpExample& p) const {
      return (x * x + 2.0 * x + 2.0 + p.c) * std::exp(-x) / (p.c + 2.0);
    }
    double operator()(const NumericDensity& n) const {
      if (x >= n.x_max) return 0.0;
      return std::clamp(numeric_integral(n, x, n.x_max, 0), 0.0, 1.0);
    }
    double operator()(const Exponential&) const { return 0.0; }
    double operator()(const MaxExp&) const { return 0.0; }
    double operator()(const ExpPolyTail&) const { return 0.0; }
  };
  return std::visit(T{x}, impl.v);
}

double log_tail(const DistributionSpec& d, double x) {
  if (x <= 0.0) return 0.0;
  const auto& impl = d.impl();
  if (impl.tail_ep) return log_positive(*impl.tail_ep, x);
  struct T {
    double x;
    double operator()(const Gamma& g) const { return gamma_log_tail_std(g.shape, x / g.scale); }
    double operator()(const Weibull& w) const { return -std::pow(x / w.scale, w.shape); }
    double operator()(const BranchedPareto& b) const {
      if (x <= b.c1) return 2.0 * (std::log(b.c1) - std::log(x + b.c1));
      return 2.0 * (std::log(b.c1 + b.c2) - std::log(x + b.c2)) - std::log(4.0);
    }
    double operator()(const PolyExpExample& p) const {
      return std::log(x * x + 2.0 * x + 2.0 + p.c) - x - std::log(p.c + 2.0);
    }
    double operator()(const NumericDensity& n) const {
      if (x >= n.x_max) return -kInf;
      return std::log(numeric_integral(n, x, n.x_max, 0));
    }
    double operator()(const Exponential&) const { return -kInf; }
    double operator()(const MaxExp&) const { return -kInf; }
    double operator()(const ExpPolyTail&) const { return -kInf; }
  };
  return std::visit(T{x}, impl.v);
}

double raw_moment(const DistributionSpec& d, unsigned k) {
  if (k == 0) return 1.0;
  const auto& impl = d.impl();
  if (k > impl.max_moment)
    throw InfiniteMoment("E X^" + std::to_string(k) + " diverges for " + d.literal());
  if (impl.tail_ep) return exppoly_moment(*impl.tail_ep, k);
  struct M {
    unsigned k;
    double operator()(const Gamma& g) const {
      double m = 1.0;
      for (unsigned i = 0; i < k; ++i) m *= (g.shape + i) * g.scale;
      return m;
    }
    double operator()(const Weibull& w) const {
      return std::pow(w.scale, static_cast<double>(k)) * boost::math::tgamma(1.0 + k / w.shape);
    }
    double operator()(const BranchedPareto& b) const { return (3.0 * b.c1 + b.c2) / 4.0; }
    double operator()(const PolyExpExample& p) const {
      return (factorial(k + 2) + p.c * factorial(k)) / (p.c + 2.0);
    }
    double operator()(const NumericDensity& n) const { return numeric_integral(n, 0.0, n.x_max, k); }
    double operator()(const Exponential&) const { return 0.0; }
    double operator()(const MaxExp&) const { return 0.0; }
    double operator()(const ExpPolyTail&) const { return 0.0; }
  };
  return std::visit(M{k}, impl.v);
}

double tail_inverse(const DistributionSpec& d, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("tail_inverse: p must lie in (0, 1]");
  if (p == 1.0) return 0.0;
  if (auto e = d.get_if<Exponential>()) return -std::log(p) / e->rate;
  if (auto b = d.get_if<BranchedPareto>()) {
    if (p <= 0.25) return (b->c1 + b->c2) / (2.0 * std::sqrt(p)) - b->c2;
    return b->c1 / std::sqrt(p) - b->c1;
  }
  if (auto w = d.get_if<Weibull>()) return w->scale * std::pow(-std::log(p), 1.0 / w->shape);
  if (auto g = d.get_if<Gamma>()) return g->scale * boost::math::gamma_q_inv(g->shape, p);
  return generic_inverse(d, p);
}

std::vector<double> breakpoints(const DistributionSpec& d) { return d.impl().breaks; }

DistributionSpec scaled(const DistributionSpec& d, double k) {
  require(positive(k), "scaled: factor must be positive");
  struct S {
    double k;
    DistributionSpec operator()(const Exponential& e) const { return Exponential{e.rate / k}; }
    DistributionSpec operator()(const Gamma& g) const { return Gamma{g.shape, g.scale * k}; }
    DistributionSpec operator()(const Weibull& w) const { return Weibull{w.shape, w.scale * k}; }
    DistributionSpec operator()(const BranchedPareto& b) const { return BranchedPareto{b.c1 * k, b.c2 * k}; }
    DistributionSpec operator()(const MaxExp& m) const {
      MaxExp out = m;
      for (auto& r : out.rates) r /= k;
      return out;
    }
    DistributionSpec operator()(const ExpPolyTail& e) const { return ExpPolyTail{e.tail.compose_affine(1.0 / k, 0.0)}; }
    [[noreturn]] static DistributionSpec fail() { throw std::invalid_argument("scaled: family has no closed scale form"); }
    DistributionSpec operator()(const PolyExpExample&) const { fail(); }
    DistributionSpec operator()(const NumericDensity&) const { fail(); }
  };
  return std::visit(S{k}, d.variant());
}

}  // namespace ittail
