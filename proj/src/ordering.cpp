#include "ittail/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ittail/errors.hpp"
#include "ittail/iteration.hpp"
#include "ittail/parallel.hpp"

namespace ittail {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuantile = 1e-10;
constexpr std::size_t kChunk = 64;

const SignSequence kIfr{Sign::Plus, Sign::Minus, Sign::Plus};
const SignSequence kIfra{Sign::Minus, Sign::Plus};

double quantile(const IteratedTail& t) {
  if (auto n = t.base().get_if<NumericDensity>()) return n->x_max;
  return t.inverse(kQuantile);
}

// Everything a cell needs about one (X, Y, s) triple, computed once.
struct Pair {
  DistributionSpec X, Y;
  unsigned s;
  IteratedTail tx, ty;
  double qx, qy;        // 1e-10 quantiles of the s-iterates
  double log_mx, log_my;  // log E X^{s-1}, log E Y^{s-1}
  double x_floor;
  std::vector<double> bx, by;

  Pair(const DistributionSpec& x, const DistributionSpec& y, unsigned s_)
      : X(x), Y(y), s(s_), tx(iterate(x, s_)), ty(iterate(y, s_)) {
    qx = quantile(tx);
    qy = quantile(ty);
    log_mx = std::log(tx.moments().back());
    log_my = std::log(ty.moments().back());
    x_floor = 1e-6 * std::min(X.mean(), Y.mean());
    bx = breakpoints(X);
    by = breakpoints(Y);
  }

  ScanConfig cell_config(const ScanConfig& base, double a, double b) const {
    ScanConfig c = base;
    c.trace = nullptr;
    if (c.x_max <= 0.0) c.x_max = std::max(qy, (qx - b) / a);
    if (c.x_max <= 0.0) c.x_max = qy;
    if (c.x_min <= 0.0) c.x_min = std::min(x_floor, 1e-7 * c.x_max);
    return c;
  }

  std::vector<double> cell_breaks(double a, double b) const {
    std::vector<double> out = by;
    for (double p : bx)
      if ((p - b) / a > 0.0) out.push_back((p - b) / a);
    if (b < 0.0) out.push_back(-b / a);
    return out;
  }

  const ExpPoly* ex() const { return X.tail_exppoly() ? &*X.tail_exppoly() : nullptr; }
  const ExpPoly* ey() const { return Y.tail_exppoly() ? &*Y.tail_exppoly() : nullptr; }
};

// cy*py(x) - cx*px(a x + b) on (0, inf), px replaced by the constant `neg`
// for negative arguments.
SignPattern affine_exact(const ExpPoly& py, double cy, const ExpPoly& px, double cx, double neg, double a,
                         double b) {
  ExpPoly body = cy * py - cx * px.compose_affine(a, b);
  if (b >= 0.0) return sign_pattern_exact(body, 0.0);
  double x0 = -b / a;
  ExpPoly head = cy * py;
  if (neg != 0.0) head = head - ExpPoly{{cx * neg, 0.0}};
  return concatenate(sign_pattern_on(head, {0.0, x0}), sign_pattern_exact(body, x0), {x0, x0});
}

SignPattern v_pattern(const Pair& p, double a, double b, const ScanConfig& base, bool keep_trace = false) {
  if (p.tx.exppoly() && p.ty.exppoly())
    return affine_exact(*p.ty.exppoly(), 1.0, *p.tx.exppoly(), 1.0, 1.0, a, b);
  auto f = [&](double x) {
    double z = a * x + b;
    double ty = p.ty(x), tx = p.tx(z);
    double v = ty - tx;
    double noise = p.ty.error_bound(x) + (z > 0.0 ? p.tx.error_bound(z) : 0.0) + 4 * kEps * (ty + tx);
    return std::fabs(v) <= noise ? 0.0 : v;
  };
  ScanConfig cfg = p.cell_config(base, a, b);
  cfg.limit_sign.reset();
  if (keep_trace) cfg.trace = base.trace;
  return scan(f, cfg, p.cell_breaks(a, b));
}

std::string form_name(HForm f) {
  switch (f) {
    case HForm::Hs: return "H_s";
    case HForm::HsMinus1: return "H_{s-1}";
    case HForm::Ps: return "P_s";
    case HForm::PsMinus1: return "P_{s-1}";
  }
  return "?";
}

bool density_form(HForm f) { return f == HForm::Hs || f == HForm::Ps; }
bool log_form(HForm f) { return f == HForm::Ps || f == HForm::PsMinus1; }

// Value of an H/P form at x; for log forms a vanishing Y density is an error.
double h_value(const Pair& p, HForm form, double a, double b, double x) {
  const double k = density_form(form) ? p.s : p.s - 1.0;
  const double z = a * x + b;
  if (log_form(form)) {
    double ly = density_form(form) ? log_density(p.Y, x) : log_tail(p.Y, x);
    double lx = z < 0.0 ? (density_form(form) ? -kInf : 0.0)
                        : (density_form(form) ? log_density(p.X, z) : log_tail(p.X, z));
    if (ly == -kInf) throw std::domain_error(form_name(form) + ": Y density vanishes at x = " + std::to_string(x));
    if (lx == -kInf) return kInf;
    double c = p.log_mx - k * std::log(a) - p.log_my;
    double v = ly - lx + c;
    double noise = 64 * kEps * (std::fabs(ly) + std::fabs(lx) + std::fabs(c));
    return std::fabs(v) <= noise ? 0.0 : v;
  }
  double ty = std::exp((density_form(form) ? log_density(p.Y, x) : log_tail(p.Y, x)) - p.log_my);
  double lx = z < 0.0 ? (density_form(form) ? -kInf : 0.0)
                      : (density_form(form) ? log_density(p.X, z) : log_tail(p.X, z));
  double tx = std::exp(k * std::log(a) + lx - p.log_mx);
  double v = ty - tx;
  double noise = 64 * kEps * (ty + tx);
  return std::fabs(v) <= noise ? 0.0 : v;
}

SignPattern h_pattern(const Pair& p, HForm form, double a, double b, const ScanConfig& base) {
  if (p.ex() && p.ey()) {
    const double k = density_form(form) ? p.s : p.s - 1.0;
    ExpPoly fy = density_form(form) ? -p.ey()->derivative() : *p.ey();
    ExpPoly fx = density_form(form) ? -p.ex()->derivative() : *p.ex();
    double cy = std::exp(-p.log_my), cx = std::exp(k * std::log(a) - p.log_mx);
    SignPattern pat = affine_exact(fy, cy, fx, cx, density_form(form) ? 0.0 : 1.0, a, b);
    if (log_form(form))
      for (std::size_t i = 0; i < pat.witnesses.size(); ++i)
        if (pat.witnesses[i] > 0.0) pat.witness_values[i] = h_value(p, form, a, b, pat.witnesses[i]);
    return pat;
  }
  auto f = [&](double x) { return h_value(p, form, a, b, x); };
  ScanConfig cfg = p.cell_config(base, a, b);
  cfg.limit_sign.reset();
  return scan(f, cfg, p.cell_breaks(a, b));
}

struct CellResult {
  enum Kind { Pass, Degenerate, Fail, Unknown } kind = Pass;
  std::string function;
  SignPattern pattern;
  std::string reason;
};

CellResult judge(std::string function, SignPattern pat, std::span<const SignSequence> allowed) {
  CellResult r;
  r.function = std::move(function);
  if (pat.degenerate())
    r.kind = CellResult::Degenerate;
  else
    r.kind = matches(pat, allowed) ? CellResult::Pass : CellResult::Fail;
  r.pattern = std::move(pat);
  return r;
}

double pattern_margin(const SignPattern& pat) {
  double m = kInf;
  for (double v : pat.witness_values)
    if (std::isfinite(v)) m = std::min(m, std::fabs(v));
  return m;
}

using Cell = std::pair<double, double>;
using CellFn = std::function<CellResult(double, double)>;

// Runs cells in lexicographic (a, b) order, chunk by chunk; the first
// failing cell in that order decides the verdict.
void run_cells(const std::vector<Cell>& cells, const CellFn& eval, Verdict& v) {
  v.cells_scanned = 0;
  v.degenerate_cells = 0;
  v.worst_margin = kInf;
  std::optional<std::string> unknown;
  for (std::size_t start = 0; start < cells.size(); start += kChunk) {
    std::size_t n = std::min(kChunk, cells.size() - start);
    std::vector<CellResult> out(n);
    parallel_for(n, [&](std::size_t i) {
      auto [a, b] = cells[start + i];
      try {
        out[i] = eval(a, b);
      } catch (const IndeterminateFunction&) {
        out[i].kind = CellResult::Degenerate;
      } catch (const Error& e) {
        out[i].kind = CellResult::Unknown;
        out[i].reason = e.what();
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      ++v.cells_scanned;
      auto [a, b] = cells[start + i];
      CellResult& r = out[i];
      switch (r.kind) {
        case CellResult::Pass: v.worst_margin = std::min(v.worst_margin, pattern_margin(r.pattern)); break;
        case CellResult::Degenerate: ++v.degenerate_cells; break;
        case CellResult::Unknown:
          if (!unknown) unknown = "cell a=" + std::to_string(a) + " b=" + std::to_string(b) + ": " + r.reason;
          break;
        case CellResult::Fail:
          v.outcome = Outcome::Refuted;
          v.witness = Witness{a, b, r.function, std::move(r.pattern), {}};
          v.reason = "pattern " + v.witness->pattern.str() + " of " + v.witness->function + " not allowed";
          return;
      }
    }
  }
  if (unknown) {
    v.outcome = Outcome::Inconclusive;
    v.reason = *unknown;
  } else {
    v.outcome = Outcome::Supported;
  }
}

std::vector<Cell> cells_of(const std::vector<double>& as, const std::vector<double>& bs,
                           const std::vector<Cell>& extra = {}) {
  std::vector<Cell> out;
  out.reserve(as.size() * bs.size() + extra.size());
  for (double a : as)
    for (double b : bs) out.emplace_back(a, b);
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

std::vector<double> extra_a(const GridSpec& g) {
  std::vector<double> out;
  for (auto [a, b] : g.cells) out.push_back(a);
  return out;
}

std::vector<Cell> extra_nonnegative(const GridSpec& g) {
  std::vector<Cell> out;
  for (auto c : g.cells)
    if (c.second >= 0.0) out.push_back(c);
  return out;
}

Verdict inconclusive(Verdict v, const std::string& why) {
  v.outcome = Outcome::Inconclusive;
  v.reason = why;
  return v;
}

std::vector<double> nonnegative(const std::vector<double>& bs) {
  std::vector<double> out;
  for (double b : bs)
    if (b >= 0.0) out.push_back(b);
  return out;
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Supported: return "supported";
    case Outcome::Refuted: return "refuted";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::PatternVs: return "pattern_vs";
    case Criterion::CriterionH: return "criterion_h";
    case Criterion::CriterionP: return "criterion_p";
    case Criterion::NewCrit: return "newcrit";
    case Criterion::Convexity: return "convexity";
    case Criterion::DMRL: return "dmrl";
  }
  return "?";
}

std::string to_string(HForm f) {
  switch (f) {
    case HForm::Hs: return "hs";
    case HForm::HsMinus1: return "hs_minus_1";
    case HForm::Ps: return "ps";
    case HForm::PsMinus1: return "ps_minus_1";
  }
  return "?";
}

void validate(const GridSpec& g) {
  if (g.a.empty() && g.cells.empty()) throw std::invalid_argument("grid: no a values");
  auto check_a = [](double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("grid: a values must be positive");
  };
  auto check_b = [](double b) {
    if (!std::isfinite(b)) throw std::invalid_argument("grid: b values must be finite");
  };
  for (double a : g.a) check_a(a);
  for (double b : g.b) check_b(b);
  for (auto [a, b] : g.cells) {
    check_a(a);
    check_b(b);
  }
  validate(g.scan);
}

std::vector<double> log_space(double lo, double hi, unsigned n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw std::invalid_argument("log_space: need 0 < lo <= hi, n >= 1");
  std::vector<double> out(n);
  for (unsigned i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
  return out;
}

std::vector<double> lin_space(double lo, double hi, unsigned n) {
  if (!(hi >= lo) || n == 0) throw std::invalid_argument("lin_space: need lo <= hi, n >= 1");
  std::vector<double> out(n);
  for (unsigned i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

GridSpec default_grid(const DistributionSpec& X, const DistributionSpec& Y, bool negative_b) {
  GridSpec g;
  g.a = log_space(0.05, 20.0, 64);
  if (negative_b) {
    double lo = -5.0 * X.mean();
    for (unsigned i = 0; i < 16; ++i) g.b.push_back(lo * (16 - i) / 16.0);
  }
  for (double b : lin_space(0.0, 5.0 * Y.mean(), 32)) g.b.push_back(b);
  return g;
}

Verdict compare_ifr(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g) {
  validate(g);
  Verdict v;
  v.criterion = Criterion::PatternVs;
  v.s = s;
  v.grid = g;
  v.allowed = {kIfr};
  if (g.b.empty() && g.cells.empty()) throw std::invalid_argument("compare_ifr: no b values");
  Pair p(X, Y, s);
  run_cells(cells_of(g.a, g.b, g.cells),
            [&](double a, double b) { return judge("V_s", v_pattern(p, a, b, g.scan), v.allowed); }, v);
  return v;
}

Verdict compare_ifra(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g) {
  validate(g);
  Verdict v;
  v.criterion = Criterion::PatternVs;
  v.s = s;
  v.grid = g;
  v.grid.b = {0.0};
  v.grid.cells.clear();
  for (double a : extra_a(g)) v.grid.cells.emplace_back(a, 0.0);
  v.allowed = {kIfra};
  Pair p(X, Y, s);
  run_cells(cells_of(g.a, {0.0}, v.grid.cells),
            [&](double a, double b) { return judge("V_s", v_pattern(p, a, b, g.scan), v.allowed); }, v);
  return v;
}

Verdict criterion_h(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g,
                    HForm form) {
  validate(g);
  if (g.b.empty() && g.cells.empty()) throw std::invalid_argument("criterion_h: no b values");
  Verdict v;
  v.criterion = log_form(form) ? Criterion::CriterionP : Criterion::CriterionH;
  v.s = s;
  v.grid = g;
  v.allowed = {kIfr};
  Pair p(X, Y, s);
  run_cells(cells_of(g.a, g.b, g.cells),
            [&](double a, double b) { return judge(form_name(form), h_pattern(p, form, a, b, g.scan), v.allowed); },
            v);
  return v;
}

Verdict newcrit(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const GridSpec& g) {
  validate(g);
  Verdict v;
  v.criterion = Criterion::NewCrit;
  v.s = s;
  v.grid = g;
  v.grid.b = nonnegative(g.b);
  if (v.grid.b.empty()) v.grid.b = {0.0};
  v.grid.cells = extra_nonnegative(g);
  v.allowed = {kIfr};
  Pair p(X, Y, s);

  // Stage 1: s-IFRA order on b = 0, by the P criterion or a direct scan.
  Verdict ifra;
  ifra.criterion = Criterion::PatternVs;
  ifra.s = s;
  ifra.grid = g;
  ifra.grid.b = {0.0};
  ifra.grid.cells.clear();
  for (double a : extra_a(g)) ifra.grid.cells.emplace_back(a, 0.0);
  ifra.allowed = {kIfra};
  run_cells(cells_of(g.a, {0.0}, ifra.grid.cells),
            [&](double a, double b) {
              auto h = judge("P_s", h_pattern(p, HForm::Ps, a, b, g.scan), ifra.allowed);
              if (h.kind != CellResult::Fail) return h;
              return judge("V_s", v_pattern(p, a, b, g.scan), ifra.allowed);
            },
            ifra);
  v.stages.push_back(ifra);
  if (ifra.outcome == Outcome::Refuted) {
    v.outcome = Outcome::Refuted;
    v.witness = ifra.witness;
    v.cells_scanned = ifra.cells_scanned;
    v.reason = "s-IFRA stage: " + ifra.reason;
    return v;
  }

  // Stage 2: the P criterion on b >= 0. For b > 0, V_s(0) > 0 so only the
  // final parts of the criterion pattern starting with "+" can occur.
  Verdict crit;
  crit.criterion = Criterion::CriterionP;
  crit.s = s;
  crit.grid = v.grid;
  crit.allowed = {kIfr};
  run_cells(cells_of(g.a, v.grid.b, v.grid.cells),
            [&](double a, double b) {
              auto h = judge("P_s", h_pattern(p, HForm::Ps, a, b, g.scan), crit.allowed);
              if (h.kind == CellResult::Fail && b > 0.0) {
                bool ok = true;
                for (const auto& part : final_parts(h.pattern.signs))
                  if (part.front() == Sign::Plus && !matches(part, crit.allowed)) ok = false;
                if (ok) h.kind = CellResult::Pass;
              }
              if (h.kind != CellResult::Fail) return h;
              return judge("V_s", v_pattern(p, a, b, g.scan), crit.allowed);
            },
            crit);
  v.stages.push_back(crit);

  v.cells_scanned = ifra.cells_scanned + crit.cells_scanned;
  v.degenerate_cells = ifra.degenerate_cells + crit.degenerate_cells;
  v.worst_margin = std::min(ifra.worst_margin, crit.worst_margin);
  if (crit.outcome == Outcome::Refuted) {
    v.outcome = Outcome::Refuted;
    v.witness = crit.witness;
    v.reason = "b >= 0 stage: " + crit.reason;
  } else if (ifra.outcome == Outcome::Inconclusive || crit.outcome == Outcome::Inconclusive) {
    v.outcome = Outcome::Inconclusive;
    v.reason = ifra.outcome == Outcome::Inconclusive ? ifra.reason : crit.reason;
  } else {
    v.outcome = Outcome::Supported;
  }
  return v;
}

Verdict compare_dmrl(const DistributionSpec& X, const DistributionSpec& Y, const ScanConfig& cfg_in) {
  Verdict v;
  v.criterion = Criterion::DMRL;
  v.s = 2;
  v.allowed = {{Sign::Minus}};
  v.grid.a = {1.0};
  v.grid.b = {0.0};
  auto x2 = iterate(X, 2), y2 = iterate(Y, 2);
  // sign d'(u) = sign of log(r1/r2)_X(x_X(u)) - log(r1/r2)_Y(x_Y(u)), with
  // r1/r2 = f mu T_2 / T_1^2 at the u-quantile of T_1.
  double lmx = std::log(x2.normalizers().back()), lmy = std::log(y2.normalizers().back());
  auto term = [](const DistributionSpec& d, const IteratedTail& t2, double lmu, double x) {
    return log_density(d, x) + lmu + std::log(t2(x)) - 2.0 * log_tail(d, x);
  };
  auto g = [&](double u) {
    double xx = tail_inverse(X, u), xy = tail_inverse(Y, u);
    double tx = term(X, x2, lmx, xx), ty = term(Y, y2, lmy, xy);
    double d = tx - ty;
    if (std::isnan(d)) return 0.0;
    double noise = 1e-9 * (1.0 + std::fabs(tx) + std::fabs(ty));
    return std::fabs(d) <= noise ? 0.0 : d;
  };
  ScanConfig cfg = cfg_in;
  cfg.x_max = 1.0 - 1e-9;
  if (cfg.x_min <= 0.0) cfg.x_min = 1e-10;
  cfg.limit_sign.reset();
  v.grid.scan = cfg;
  v.cells_scanned = 1;
  v.worst_margin = kInf;
  SignPattern pat;
  try {
    pat = scan(g, cfg);
  } catch (const IndeterminateFunction&) {
    v.outcome = Outcome::Supported;
    v.degenerate_cells = 1;
    v.reason = "d constant";
    return v;
  } catch (const Error& e) {
    return inconclusive(v, e.what());
  }
  if (pat.signs.size() == 1 && pat.signs[0] == Sign::Minus) {
    v.outcome = Outcome::Supported;
    v.worst_margin = pattern_margin(pat);
    return v;
  }
  v.outcome = Outcome::Refuted;
  v.reason = "d' has pattern " + pat.str();
  Witness w{1.0, 0.0, "d'", pat, pat.witnesses};
  v.witness = std::move(w);
  return v;
}

SignPattern scan_v(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, double a, double b,
                   const ScanConfig& cfg) {
  if (!(a > 0.0)) throw std::invalid_argument("scan_v: a must be positive");
  validate(cfg);
  return v_pattern(Pair(X, Y, s), a, b, cfg, true);
}

TransformPoint convex_transform(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, double x) {
  auto tx = iterate(X, s), ty = iterate(Y, s);
  TransformPoint p;
  p.x = x;
  p.u = tx(x);
  p.c = ty.inverse(p.u);
  p.slope = tx.derivative(x) / ty.derivative(p.c);
  return p;
}

Verdict convexity_check(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const ScanConfig& cfg,
                        Shape shape) {
  validate(cfg);
  Verdict v;
  v.criterion = Criterion::Convexity;
  v.s = s;
  v.allowed = {{Sign::Plus}};
  v.grid.a = {1.0};
  v.grid.b = {0.0};
  v.grid.scan = cfg;
  v.cells_scanned = 1;
  v.worst_margin = kInf;
  const std::string name = shape == Shape::Convex ? "c_s'" : "c_s/x";
  try {
    auto tx = iterate(X, s), ty = iterate(Y, s);
    double x_max = cfg.x_max > 0 ? cfg.x_max : quantile(tx);
    double x_min = cfg.x_min > 0 ? cfg.x_min : 1e-6 * X.mean();
    std::vector<double> xs;
    unsigned n_log = cfg.initial_grid * 3 / 4, n_lin = cfg.initial_grid - n_log;
    for (double x : log_space(x_min, x_max, n_log)) xs.push_back(x);
    for (double x : lin_space(x_max / n_lin, x_max, n_lin)) xs.push_back(x);
    for (double b : breakpoints(X)) xs.push_back(b);
    for (double b : breakpoints(Y)) {
      double u = ty(b);
      if (u > 0.0 && u < 1.0) xs.push_back(tx.inverse(u));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !(x > 0.0) || x > x_max; }), xs.end());

    // Per-point noise: the rounding of u moves c by about dc.
    std::vector<double> gv(xs.size()), noise(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      double x = xs[i];
      double u = tx(x);
      if (!(u > 1e-290)) throw TailUnderflow("convexity_check: tail underflow at x = " + std::to_string(x));
      double c = ty.inverse(u);
      double dy = ty.derivative(c);
      double dc = (8 * kEps * u + tx.error_bound(x) + ty.error_bound(c)) / std::fabs(dy) + 4 * kEps * c;
      auto value = [&](double cc) { return shape == Shape::Convex ? tx.derivative(x) / ty.derivative(cc) : cc / x; };
      gv[i] = value(c);
      noise[i] = std::max(std::fabs(value(c + dc) - gv[i]), std::fabs(value(std::max(0.0, c - dc)) - gv[i]));
    });
    SignPattern pat;
    std::vector<ScanSample> trace;
    double last = xs.front();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      double d = gv[i + 1] - gv[i];
      double tol = 1e-9 * std::max(std::fabs(gv[i]), std::fabs(gv[i + 1])) + 2.0 * (noise[i] + noise[i + 1]);
      int sg = std::fabs(d) <= tol || !std::isfinite(d) ? 0 : (d > 0 ? 1 : -1);
      if (cfg.trace) trace.push_back({xs[i], gv[i], sg});
      if (sg == 0) continue;
      pat.push(sg > 0 ? Sign::Plus : Sign::Minus, xs[i], d, {last, xs[i + 1]});
      last = xs[i];
    }
    if (cfg.trace) cfg.trace(trace);
    bool bad = std::find(pat.signs.begin(), pat.signs.end(), Sign::Minus) != pat.signs.end();
    if (!bad) {
      v.outcome = Outcome::Supported;
      if (pat.degenerate()) v.degenerate_cells = 1;
      v.worst_margin = pattern_margin(pat);
      return v;
    }
    Witness w{1.0, 0.0, name, pat, {}};
    for (double x : pat.witnesses) w.u.push_back(tx(x));
    v.outcome = Outcome::Refuted;
    v.reason = name + " differences have pattern " + pat.str();
    v.witness = std::move(w);
    return v;
  } catch (const Error& e) {
    return inconclusive(v, e.what());
  }
}

ReferenceReport exponential_reference(const DistributionSpec& X, unsigned s, const GridSpec& g_in) {
  DistributionSpec E(Exponential{1.0});
  ReferenceReport r;
  r.s = s;
  GridSpec below = g_in, above = g_in;
  if (g_in.a.empty() && g_in.cells.empty()) {
    below = default_grid(X, E, true);
    above = default_grid(E, X, true);
    below.scan = above.scan = g_in.scan;
    // Against Exp(1), c_s is H = -log T_{X,s} or its inverse, so violations
    // sit on lines near tangents of H and near chords through the origin.
    auto t = iterate(X, s);
    for (double y : log_space(1e-3 * X.mean(), quantile(t), 48)) {
      double H = -std::log(t(y)), rate = t.failure_rate(y);
      if (!(H > 0.0) || !(rate > 0.0) || !std::isfinite(H)) continue;
      below.cells.emplace_back(y / H, 0.0);
      above.cells.emplace_back(H / y, 0.0);
      for (double e : {-1e-2, -1e-3, 1e-3, 1e-2}) {
        below.cells.emplace_back(1.0 / rate, y - (H + e) / rate);
        above.cells.emplace_back(rate, H - rate * y + e);
      }
    }
  }
  r.ifr_below = compare_ifr(X, E, s, below);
  r.ifr_above = compare_ifr(E, X, s, above);
  r.ifra_below = compare_ifra(X, E, s, below);
  r.ifra_above = compare_ifra(E, X, s, above);
  r.ifr = classify_ifr(X, s);
  r.ifra = classify_ifra(X, s);

  auto check = [&](const char* what, const Verdict& v, Monotonicity m, bool expect) {
    if (v.outcome == Outcome::Inconclusive || m == Monotonicity::Inconclusive) return;
    bool supported = v.outcome == Outcome::Supported;
    if (supported == expect) return;
    r.agrees = false;
    if (!r.discrepancy.empty()) r.discrepancy += "; ";
    r.discrepancy += std::string(what) + " is " + to_string(v.outcome) + " but the classifier reports " + to_string(m);
    if (v.witness) r.discrepancy += " (witness a=" + std::to_string(v.witness->a) + ", b=" + std::to_string(v.witness->b) + ", " + v.witness->pattern.str() + ")";
  };
  auto up = [](Monotonicity m) { return m == Monotonicity::Increasing || m == Monotonicity::Constant; };
  auto down = [](Monotonicity m) { return m == Monotonicity::Decreasing || m == Monotonicity::Constant; };
  check("X <= Exp (s-IFR order)", r.ifr_below, r.ifr.verdict, up(r.ifr.verdict));
  check("Exp <= X (s-IFR order)", r.ifr_above, r.ifr.verdict, down(r.ifr.verdict));
  check("X <= Exp (s-IFRA order)", r.ifra_below, r.ifra.verdict, up(r.ifra.verdict));
  check("Exp <= X (s-IFRA order)", r.ifra_above, r.ifra.verdict, down(r.ifra.verdict));
  return r;
}

}  // namespace ittail
