#pragma once

#include "json.hpp"

#include "ittail/ageing.hpp"
#include "ittail/exppoly.hpp"
#include "ittail/ordering.hpp"
#include "ittail/sign_pattern.hpp"

namespace ittail {

using Json = nlohmann::ordered_json;

/// Version tag written as "schema" in every top-level document.
inline constexpr int kSchemaVersion = 1;

/// Finite numbers as is (shortest round-trip form), non-finite as null.
Json number(double v);

Json to_json(const SignPattern& p);
Json to_json(const ScanConfig& c);
Json to_json(const GridSpec& g);
Json to_json(const Verdict& v);
Json to_json(const MonotoneClass& m);
Json to_json(const ReferenceReport& r);
Json to_json(const RootReport& r);
Json to_json(const HolderReport& h);

/// Inverse of to_json for configurations; missing keys keep defaults.
ScanConfig scan_config_from_json(const Json& j);
GridSpec grid_from_json(const Json& j);

/// Parses the outcome names written by to_json.
Outcome outcome_from_string(const std::string& s);

}  // namespace ittail
