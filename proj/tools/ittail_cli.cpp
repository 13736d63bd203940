#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ittail/ageing.hpp"
#include "ittail/casebook.hpp"
#include "ittail/errors.hpp"
#include "ittail/literal.hpp"
#include "ittail/ordering.hpp"
#include "ittail/parallel.hpp"
#include "ittail/report.hpp"

using namespace ittail;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3, kIo = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* kGrammar = R"txt(Distribution literals (whitespace-insensitive, decimal parameters):
  exp(rate)  gamma(shape[,scale])  weibull(shape[,scale])  bpareto(c1,c2)
  polyexp(c)  maxexp(r1,r2[,...])  exptail(EXPPOLY)
Exponential polynomials: sums of coef*e(-rate) terms, e.g. "1*e(-1)+(-1)*e(-2)".
Exit codes: 0 supported/pass, 1 refuted/fail, 2 usage error, 3 inconclusive, 4 I/O error.)txt";

struct Globals {
  std::string json_path;
  std::string csv_path;
  bool trace = false;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  bool verbose = false;
};

struct TraceRows {
  std::vector<ScanSample> rows;
  TraceSink sink() {
    return [this](std::span<const ScanSample> s) { rows.insert(rows.end(), s.begin(), s.end()); };
  }
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void emit(const Globals& g, Json doc, double runtime_ms, const TraceRows* trace) {
  doc["runtime_ms"] = runtime_ms;
  if (!g.json_path.empty()) write_text(g.json_path, doc.dump(2) + "\n");
  if (trace && (g.trace || !g.csv_path.empty())) {
    std::ostringstream csv;
    csv << "x,value,sign\n";
    for (const auto& r : trace->rows) csv << g17(r.x) << ',' << g17(r.value) << ',' << r.sign << '\n';
    if (!g.csv_path.empty()) write_text(g.csv_path, csv.str());
    if (g.trace) std::cerr << csv.str();
  }
}

int exit_for(Outcome o) {
  switch (o) {
    case Outcome::Supported: return kPass;
    case Outcome::Refuted: return kFail;
    case Outcome::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// ---- analyze ----

struct AnalyzeOpts {
  std::string dist;
  unsigned s_max = 3;
  bool reference = false;
};

int run_analyze(const Globals& g, const AnalyzeOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  DistributionSpec d = parse_distribution(o.dist);
  TraceRows trace;
  ScanConfig cfg;
  if (g.trace || !g.csv_path.empty()) cfg.trace = trace.sink();
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = "analyze";
  doc["dist"] = d.literal();
  Json rows = Json::array();
  bool inconclusive = false;
  unsigned s_top = std::min(o.s_max, d.max_finite_moment() == UINT_MAX ? o.s_max : d.max_finite_moment() + 1);
  for (unsigned s = 1; s <= s_top; ++s) {
    auto ifr = classify_ifr(d, s, cfg);
    auto ifra = classify_ifra(d, s, cfg);
    inconclusive = inconclusive || ifr.verdict == Monotonicity::Inconclusive || ifra.verdict == Monotonicity::Inconclusive;
    Json row{{"s", s}, {"ifr", to_json(ifr)}, {"ifra", to_json(ifra)}};
    if (o.reference) row["reference"] = to_json(exponential_reference(d, s, {}));
    rows.push_back(row);
    std::cout << "s=" << s << "  rate: " << to_string(ifr.verdict) << " (" << ifr.slope.str()
              << ")  average rate: " << to_string(ifra.verdict) << "\n";
  }
  if (s_top < o.s_max) doc["note"] = "iterates beyond s=" + std::to_string(s_top) + " need infinite moments";
  doc["classifications"] = rows;
  if (auto m = d.get_if<MaxExp>(); m && m->rates.size() == 2 && m->rates[0] != m->rates[1]) {
    double lam = std::max(m->rates[0], m->rates[1]) / std::min(m->rates[0], m->rates[1]);
    auto on = dfr_onset(lam, 64);
    doc["dfr_onset"] = on ? Json(*on) : Json(nullptr);
  }
  emit(g, doc, elapsed_ms(t0), &trace);
  return inconclusive ? kInconclusive : kPass;
}

// ---- compare ----

struct CompareOpts {
  std::string x, y;
  unsigned s = 1;
  std::string criterion = "ifr";
  std::vector<double> a, b;
  std::vector<double> a_range, b_range;
  bool no_negative_b = false;
  double x_max = 0.0;
  unsigned points = 512;
  double deadband = 1e-11;
  unsigned depth = 12;
  std::string replay;
};

const std::vector<std::string> kCriteria{"ifr", "ifra", "h", "h1", "p", "p1", "newcrit", "dmrl", "convexity", "star"};

Verdict dispatch(const DistributionSpec& X, const DistributionSpec& Y, unsigned s, const std::string& c,
                 const GridSpec& grid) {
  if (c == "ifr") return compare_ifr(X, Y, s, grid);
  if (c == "ifra") return compare_ifra(X, Y, s, grid);
  if (c == "h") return criterion_h(X, Y, s, grid, HForm::Hs);
  if (c == "h1") return criterion_h(X, Y, s, grid, HForm::HsMinus1);
  if (c == "p") return criterion_h(X, Y, s, grid, HForm::Ps);
  if (c == "p1") return criterion_h(X, Y, s, grid, HForm::PsMinus1);
  if (c == "newcrit") return newcrit(X, Y, s, grid);
  if (c == "dmrl") return compare_dmrl(X, Y, grid.scan);
  if (c == "convexity") return convexity_check(X, Y, s, grid.scan, Shape::Convex);
  if (c == "star") return convexity_check(X, Y, s, grid.scan, Shape::StarShaped);
  throw CLI::ValidationError("--criterion", "unknown criterion " + c);
}

GridSpec build_grid(const DistributionSpec& X, const DistributionSpec& Y, const CompareOpts& o) {
  bool negative = !o.no_negative_b && (o.criterion == "ifr" || o.criterion[0] == 'h' || o.criterion[0] == 'p');
  GridSpec g = default_grid(X, Y, negative);
  if (!o.a_range.empty()) {
    if (o.a_range.size() != 3) throw CLI::ValidationError("--a-range", "expects min,max,count");
    g.a = log_space(o.a_range[0], o.a_range[1], static_cast<unsigned>(o.a_range[2]));
  }
  if (!o.b_range.empty()) {
    if (o.b_range.size() != 3) throw CLI::ValidationError("--b-range", "expects min,max,count");
    g.b = lin_space(o.b_range[0], o.b_range[1], static_cast<unsigned>(o.b_range[2]));
  }
  if (!o.a.empty()) g.a = o.a;
  if (!o.b.empty()) g.b = o.b;
  g.scan.x_max = o.x_max;
  g.scan.initial_grid = o.points;
  g.scan.deadband = o.deadband;
  g.scan.max_refinement_depth = o.depth;
  validate(g);
  return g;
}

int run_compare(const Globals& g, CompareOpts o) {
  auto t0 = std::chrono::steady_clock::now();
  GridSpec grid;
  std::optional<std::string> replayed;
  if (!o.replay.empty()) {
    std::ifstream in(o.replay);
    if (!in) throw IoError("cannot read " + o.replay);
    Json prev;
    try {
      prev = Json::parse(in);
      o.x = prev.at("x").get<std::string>();
      o.y = prev.at("y").get<std::string>();
      o.s = prev.at("s").get<unsigned>();
      o.criterion = prev.at("criterion_name").get<std::string>();
      grid = grid_from_json(prev.at("grid"));
      replayed = prev.at("outcome").get<std::string>();
    } catch (const Json::exception& e) {
      throw ParseError(std::string("replay document: ") + e.what());
    }
  }
  if (std::find(kCriteria.begin(), kCriteria.end(), o.criterion) == kCriteria.end())
    throw CLI::ValidationError("--criterion", "unknown criterion " + o.criterion);
  DistributionSpec X = parse_distribution(o.x), Y = parse_distribution(o.y);
  if (!replayed) grid = build_grid(X, Y, o);

  Verdict v = dispatch(X, Y, o.s, o.criterion, grid);

  TraceRows trace;
  if ((g.trace || !g.csv_path.empty()) && v.witness && v.witness->function == "V_s") {
    ScanConfig cfg = grid.scan;
    cfg.trace = trace.sink();
    scan_v(X, Y, o.s, v.witness->a, v.witness->b, cfg);
  }

  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = "compare";
  doc["x"] = X.literal();
  doc["y"] = Y.literal();
  doc["criterion_name"] = o.criterion;
  Json body = to_json(v);
  for (auto& [k, val] : body.items()) doc[k] = val;
  if (replayed) doc["replay_matches"] = *replayed == to_string(v.outcome);

  std::cout << o.criterion << " s=" << o.s << ": " << to_string(v.outcome) << " (" << v.cells_scanned << " cells";
  if (v.degenerate_cells) std::cout << ", " << v.degenerate_cells << " degenerate";
  std::cout << ")";
  if (v.witness)
    std::cout << "  witness a=" << format_number(v.witness->a) << " b=" << format_number(v.witness->b) << " "
              << v.witness->function << " " << v.witness->pattern.str();
  if (!v.reason.empty() && g.verbose) std::cout << "  [" << v.reason << "]";
  std::cout << "\n";
  emit(g, doc, elapsed_ms(t0), &trace);
  if (replayed && *replayed != to_string(v.outcome)) {
    std::cerr << "replay outcome differs from the document (" << *replayed << ")\n";
    return kFail;
  }
  return exit_for(v.outcome);
}

// ---- roots ----

struct RootsOpts {
  std::string exppoly;
  std::vector<double> window;
  unsigned random = 0;
};

ExpPoly random_exppoly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n(2, 7);
  std::uniform_real_distribution<double> rate(0.05, 6.0);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<ExpTerm> t;
  for (int i = n(rng); i > 0; --i) t.push_back({coef(rng), rate(rng)});
  return ExpPoly(t);
}

int run_roots(const Globals& g, const RootsOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = "roots";
  if (o.random > 0) {
    std::mt19937_64 rng(g.seed);
    unsigned violations = 0, uncertain = 0;
    Json bad = Json::array();
    for (unsigned i = 0; i < o.random; ++i) {
      ExpPoly p = random_exppoly(rng);
      if (p.is_zero()) continue;
      auto r = isolate_roots(p, {0.0, std::max(1.0, root_window_end(p, 0.0))});
      if (r.residual_uncertainty) ++uncertain;
      if (r.isolated_roots.size() > r.sign_change_bound) {
        ++violations;
        bad.push_back(format_exppoly(p));
      }
    }
    doc["seed"] = g.seed;
    doc["instances"] = o.random;
    doc["violations"] = violations;
    doc["uncertain"] = uncertain;
    doc["violating"] = bad;
    std::cout << o.random << " instances, " << violations << " violations of the sign-change bound\n";
    emit(g, doc, elapsed_ms(t0), nullptr);
    return violations == 0 ? kPass : kFail;
  }
  if (o.exppoly.empty()) throw CLI::ValidationError("roots", "give --exppoly or --random");
  ExpPoly p = parse_exppoly(o.exppoly);
  if (!o.window.empty() && o.window.size() != 2) throw CLI::ValidationError("--window", "expects lo,hi");
  Interval w{0.0, 0.0};
  if (o.window.empty()) {
    // All real roots, with room around both dominance points.
    w.lo = root_window_start(p) - 1.0;
    w.hi = root_window_end(p, 0.0) + 1.0;
  } else {
    w = {o.window[0], o.window[1]};
  }
  auto r = isolate_roots(p, w);
  doc["exppoly"] = format_exppoly(p);
  doc["window"] = Json::array({number(w.lo), number(w.hi)});
  Json body = to_json(r);
  for (auto& [k, val] : body.items()) doc[k] = val;
  std::cout << "bound " << r.sign_change_bound << ", " << r.isolated_roots.size() << " isolated root(s)";
  for (const auto& i : r.isolated_roots) std::cout << " [" << g17(i.lo) << ", " << g17(i.hi) << "]";
  std::cout << "\n";
  emit(g, doc, elapsed_ms(t0), nullptr);
  return r.residual_uncertainty ? kInconclusive : kPass;
}

// ---- casebook ----

int run_casebook(const Globals& g, const std::string& id) {
  auto t0 = std::chrono::steady_clock::now();
  Json doc;
  bool ok;
  if (!id.empty()) {
    auto r = run_case(id);
    doc = to_json(r);
    ok = r.pass;
    std::cout << r.id << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    for (const auto& c : r.checks)
      if (!c.pass || g.verbose)
        std::cout << "  " << c.name << ": expected " << c.expected << ", observed " << c.observed << "\n";
  } else {
    auto s = run_all();
    doc = to_json(s);
    ok = s.failed == 0;
    for (const auto& r : s.results) {
      std::cout << (r.pass ? "pass  " : "FAIL  ") << r.id << "\n";
      for (const auto& c : r.checks)
        if (!c.pass) std::cout << "      " << c.name << ": expected " << c.expected << ", observed " << c.observed << "\n";
    }
    std::cout << s.passed << " passed, " << s.failed << " failed\n";
  }
  emit(g, doc, elapsed_ms(t0), nullptr);
  return ok ? kPass : kFail;
}

// ---- scan ----

struct ScanOpts {
  std::string exppoly;
  std::string x, y;
  unsigned s = 1;
  double a = 1.0, b = 0.0;
  double x_max = 0.0;
  unsigned points = 512;
  double deadband = 1e-11;
  unsigned depth = 12;
};

int run_scan(const Globals& g, const ScanOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  TraceRows trace;
  ScanConfig cfg;
  cfg.x_max = o.x_max;
  cfg.initial_grid = o.points;
  cfg.deadband = o.deadband;
  cfg.max_refinement_depth = o.depth;
  if (g.trace || !g.csv_path.empty()) cfg.trace = trace.sink();
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = "scan";
  SignPattern p;
  if (!o.exppoly.empty()) {
    if (!o.x.empty() || !o.y.empty()) throw CLI::ValidationError("scan", "give either --exppoly or --x/--y");
    ExpPoly e = parse_exppoly(o.exppoly);
    doc["function"] = format_exppoly(e);
    p = scan(e, cfg);
  } else {
    if (o.x.empty() || o.y.empty()) throw CLI::ValidationError("scan", "give --exppoly or both --x and --y");
    DistributionSpec X = parse_distribution(o.x), Y = parse_distribution(o.y);
    doc["function"] = "V_s";
    doc["x"] = X.literal();
    doc["y"] = Y.literal();
    doc["s"] = o.s;
    doc["a"] = o.a;
    doc["b"] = o.b;
    p = scan_v(X, Y, o.s, o.a, o.b, cfg);
  }
  doc["config"] = to_json(ScanConfig{cfg.x_max, cfg.x_min, cfg.initial_grid, cfg.deadband, cfg.max_refinement_depth,
                                     cfg.limit_sign, nullptr});
  doc["pattern"] = to_json(p);
  std::cout << "pattern: " << (p.degenerate() ? "(degenerate)" : p.str()) << "\n";
  emit(g, doc, elapsed_ms(t0), &trace);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated-tail ageing classes and stochastic orders"};
  app.footer(kGrammar);
  app.require_subcommand(1, 1);
  app.fallthrough();
  Globals g;
  app.add_option("--json", g.json_path, "Write the JSON document to PATH ('-' for stdout)");
  app.add_option("--csv", g.csv_path, "Write scan samples as x,value,sign CSV to PATH");
  app.add_flag("--trace", g.trace, "Print scan samples to stderr");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)")->check(CLI::Range(0u, 1024u));
  app.add_option("--seed", g.seed, "Seed for random sweeps");
  app.add_flag("--verbose", g.verbose, "More detail on stdout");

  AnalyzeOpts ao;
  auto* analyze = app.add_subcommand("analyze", "Classify a distribution's s-IFR and s-IFRA behaviour");
  analyze->add_option("--dist", ao.dist, "Distribution literal")->required();
  analyze->add_option("--s-max", ao.s_max, "Largest iteration order")->check(CLI::Range(1u, 64u));
  analyze->add_flag("--reference", ao.reference, "Also order against Exp(1) in both directions");

  CompareOpts co;
  auto* compare = app.add_subcommand("compare", "Check an order between two distributions");
  auto* xo = compare->add_option("--x", co.x, "Distribution literal of X");
  auto* yo = compare->add_option("--y", co.y, "Distribution literal of Y");
  compare->add_option("--s", co.s, "Iteration order (>= 1)")->check(CLI::Range(1u, 64u));
  compare->add_option("--criterion", co.criterion, "ifr|ifra|h|h1|p|p1|newcrit|dmrl|convexity|star")
      ->check(CLI::IsMember(kCriteria));
  compare->add_option("--a", co.a, "Explicit a values")->delimiter(',');
  compare->add_option("--b", co.b, "Explicit b values")->delimiter(',');
  compare->add_option("--a-range", co.a_range, "Log-spaced a: min,max,count")->delimiter(',');
  compare->add_option("--b-range", co.b_range, "Linear b: min,max,count")->delimiter(',');
  compare->add_flag("--no-negative-b", co.no_negative_b, "Drop the negative b values of the default grid");
  compare->add_option("--x-max", co.x_max, "Scan window end (0 = automatic)");
  compare->add_option("--grid-points", co.points, "Initial samples per scan")->check(CLI::Range(64u, 1u << 20));
  compare->add_option("--deadband", co.deadband, "Relative deadband");
  compare->add_option("--depth", co.depth, "Refinement depth");
  auto* rp = compare->add_option("--replay", co.replay, "Re-run the grid of a compare JSON document");
  xo->excludes(rp);
  yo->excludes(rp);

  RootsOpts ro;
  auto* roots = app.add_subcommand("roots", "Isolate the real roots of an exponential polynomial");
  roots->add_option("--exppoly", ro.exppoly, "Exponential-polynomial literal");
  roots->add_option("--window", ro.window, "lo,hi (default: a window holding every real root)")->delimiter(',');
  roots->add_option("--random", ro.random, "Sweep N random instances against the sign-change bound");

  std::string case_id;
  auto* casebook = app.add_subcommand("casebook", "Run the registered cases");
  casebook->add_option("--id", case_id, "Run one case");

  ScanOpts so;
  auto* scan_cmd = app.add_subcommand("scan", "Sign pattern of an exponential polynomial or of V_s on one cell");
  scan_cmd->add_option("--exppoly", so.exppoly, "Exponential-polynomial literal");
  scan_cmd->add_option("--x", so.x, "X for V_s");
  scan_cmd->add_option("--y", so.y, "Y for V_s");
  scan_cmd->add_option("--s", so.s, "Iteration order")->check(CLI::Range(1u, 64u));
  scan_cmd->add_option("--a", so.a, "Slope a > 0")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--b", so.b, "Shift b");
  scan_cmd->add_option("--x-max", so.x_max, "Window end (0 = automatic)");
  scan_cmd->add_option("--grid-points", so.points, "Initial samples")->check(CLI::Range(64u, 1u << 20));
  scan_cmd->add_option("--deadband", so.deadband, "Relative deadband");
  scan_cmd->add_option("--depth", so.depth, "Refinement depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    set_thread_count(g.threads);
    if (*analyze) return run_analyze(g, ao);
    if (*compare) {
      if (co.replay.empty() && (co.x.empty() || co.y.empty()))
        throw CLI::ValidationError("compare", "--x and --y are required unless --replay is given");
      return run_compare(g, co);
    }
    if (*roots) return run_roots(g, ro);
    if (*casebook) return run_casebook(g, case_id);
    if (*scan_cmd) return run_scan(g, so);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownCase& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kUsage;
}
