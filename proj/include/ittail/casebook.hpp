#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ittail/report.hpp"

namespace ittail {

struct CaseInfo {
  std::string id;
  std::string description;
};

/// One expectation of a case.
struct CaseCheck {
  std::string name;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct CaseResult {
  std::string id;
  std::string description;
  bool pass = false;
  std::vector<CaseCheck> checks;
  /// Full verdicts and classifications behind the checks.
  Json details = Json::object();
};

struct CasebookSummary {
  std::vector<CaseResult> results;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double runtime_ms = 0.0;
};

/// Registered cases in registry order.
std::vector<CaseInfo> list_cases();

/// Runs one case with its frozen grids. Throws UnknownCase.
CaseResult run_case(std::string_view id);

CasebookSummary run_all();

/// Deterministic document (no timings): identical across runs.
Json to_json(const CaseResult& r);
Json to_json(const CasebookSummary& s);

}  // namespace ittail
