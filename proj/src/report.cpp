#include "ittail/report.hpp"

#include <cmath>
#include <stdexcept>

namespace ittail {
namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

double read_number(const Json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

std::vector<double> read_numbers(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(read_number(x));
  return out;
}

std::string confidence_name(Confidence c) { return c == Confidence::Exact ? "exact" : "sampled"; }

}  // namespace

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json to_json(const SignPattern& p) {
  Json j;
  j["signs"] = p.str();
  j["witnesses"] = numbers(p.witnesses);
  j["values"] = numbers(p.witness_values);
  Json cp = Json::array();
  for (const auto& i : p.change_points) cp.push_back(Json::array({number(i.lo), number(i.hi)}));
  j["change_points"] = cp;
  j["confidence"] = confidence_name(p.confidence);
  j["uncertain"] = p.uncertain;
  return j;
}

Json to_json(const ScanConfig& c) {
  Json j;
  j["x_max"] = number(c.x_max);
  j["x_min"] = number(c.x_min);
  j["initial_grid"] = c.initial_grid;
  j["deadband"] = number(c.deadband);
  j["max_refinement_depth"] = c.max_refinement_depth;
  if (c.limit_sign)
    j["limit_sign"] = *c.limit_sign == Sign::Plus ? "+" : "-";
  else
    j["limit_sign"] = nullptr;
  return j;
}

Json to_json(const GridSpec& g) {
  Json j;
  j["a"] = numbers(g.a);
  j["b"] = numbers(g.b);
  Json cells = Json::array();
  for (auto [a, b] : g.cells) cells.push_back(Json::array({number(a), number(b)}));
  j["cells"] = cells;
  j["scan"] = to_json(g.scan);
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["criterion"] = to_string(v.criterion);
  j["s"] = v.s;
  j["outcome"] = to_string(v.outcome);
  if (v.witness) {
    Json w;
    w["a"] = number(v.witness->a);
    w["b"] = number(v.witness->b);
    w["function"] = v.witness->function;
    w["pattern"] = to_json(v.witness->pattern);
    if (!v.witness->u.empty()) w["u"] = numbers(v.witness->u);
    j["witness"] = w;
  }
  j["cells_scanned"] = v.cells_scanned;
  j["degenerate_cells"] = v.degenerate_cells;
  j["worst_margin"] = number(v.worst_margin);
  if (!v.reason.empty()) j["reason"] = v.reason;
  Json allowed = Json::array();
  for (const auto& a : v.allowed) allowed.push_back(to_string(a));
  j["allowed"] = allowed;
  j["grid"] = to_json(v.grid);
  if (!v.stages.empty()) {
    Json st = Json::array();
    for (const auto& s : v.stages) st.push_back(to_json(s));
    j["stages"] = st;
  }
  return j;
}

Json to_json(const MonotoneClass& m) {
  Json j;
  j["s"] = m.s;
  j["verdict"] = to_string(m.verdict);
  j["confidence"] = confidence_name(m.confidence);
  Json w = Json::array();
  for (const auto& t : m.witnesses) w.push_back({{"x", number(t.x)}, {"direction", t.direction == Sign::Plus ? "+" : "-"}});
  j["witnesses"] = w;
  j["slope"] = to_json(m.slope);
  if (!m.reason.empty()) j["reason"] = m.reason;
  return j;
}

Json to_json(const ReferenceReport& r) {
  Json j;
  j["s"] = r.s;
  j["ifr_below_exp"] = to_json(r.ifr_below);
  j["ifr_above_exp"] = to_json(r.ifr_above);
  j["ifra_below_exp"] = to_json(r.ifra_below);
  j["ifra_above_exp"] = to_json(r.ifra_above);
  j["ifr"] = to_json(r.ifr);
  j["ifra"] = to_json(r.ifra);
  j["agrees"] = r.agrees;
  if (!r.discrepancy.empty()) j["discrepancy"] = r.discrepancy;
  return j;
}

Json to_json(const RootReport& r) {
  Json j;
  j["bound"] = r.sign_change_bound;
  Json roots = Json::array();
  for (const auto& i : r.isolated_roots) roots.push_back(Json::array({number(i.lo), number(i.hi)}));
  j["roots"] = roots;
  Json sus = Json::array();
  for (const auto& i : r.suspects) sus.push_back(Json::array({number(i.lo), number(i.hi)}));
  j["suspects"] = sus;
  j["residual_uncertainty"] = r.residual_uncertainty;
  return j;
}

Json to_json(const HolderReport& h) {
  Json j;
  j["s"] = h.s;
  j["x"] = number(h.x);
  j["moments"] = numbers({h.m_lo, h.m_mid, h.m_hi});
  j["lower"] = number(h.lower);
  j["square"] = number(h.square);
  j["upper"] = number(h.upper);
  j["ifr_lower_holds"] = h.ifr_lower_holds;
  j["ifr_upper_holds"] = h.ifr_upper_holds;
  j["dfr_holds"] = h.dfr_holds;
  j["ifr_lower_margin"] = number(h.ifr_lower_margin);
  j["ifr_upper_margin"] = number(h.ifr_upper_margin);
  j["tolerance"] = number(h.tolerance);
  return j;
}

ScanConfig scan_config_from_json(const Json& j) {
  ScanConfig c;
  if (j.contains("x_max")) c.x_max = read_number(j["x_max"]);
  if (j.contains("x_min")) c.x_min = read_number(j["x_min"]);
  if (j.contains("initial_grid")) c.initial_grid = j["initial_grid"].get<unsigned>();
  if (j.contains("deadband")) c.deadband = read_number(j["deadband"]);
  if (j.contains("max_refinement_depth")) c.max_refinement_depth = j["max_refinement_depth"].get<unsigned>();
  if (j.contains("limit_sign") && !j["limit_sign"].is_null())
    c.limit_sign = j["limit_sign"].get<std::string>() == "+" ? Sign::Plus : Sign::Minus;
  return c;
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  if (j.contains("a")) g.a = read_numbers(j["a"]);
  if (j.contains("b")) g.b = read_numbers(j["b"]);
  if (j.contains("cells"))
    for (const auto& c : j["cells"]) g.cells.emplace_back(read_number(c.at(0)), read_number(c.at(1)));
  if (j.contains("scan")) g.scan = scan_config_from_json(j["scan"]);
  return g;
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "supported") return Outcome::Supported;
  if (s == "refuted") return Outcome::Refuted;
  if (s == "inconclusive") return Outcome::Inconclusive;
  throw std::invalid_argument("unknown outcome: " + s);
}

}  // namespace ittail
