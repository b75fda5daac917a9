#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "kronred/crn_model.hpp"

namespace kronred {

/// JSON network format:
///
///   {
///     "species":   ["x1", "x2", ...],
///     "complexes": [{"x1": 1}, {"x2": 1, "x3": 2}, ...],
///     "reactions": [{"substrate": 0, "product": 1, "rate": 7.19}, ...],
///     "inflow":    [{"complex": 0, "channel": 0, "gain": 4.8}, ...],
///     "outflow":   [{"complex": 2, "rate": 7.64}, ...],
///     "outputs":   [[2], ...]
///   }
///
/// All indices are 0-based. `gain` is optional (default 1). `inflow` and
/// `outflow` may be omitted for a closed network; an optional top-level
/// "name" string is ignored.
CrnNetwork network_from_json(const nlohmann::json& doc);

/// Parses `text`; syntax errors report line and column, schema errors the
/// offending field path. Both raise InputError.
CrnNetwork parse_network(std::string_view text, const std::string& source = "<input>");

CrnNetwork load_network(const std::filesystem::path& path);

nlohmann::json network_to_json(const CrnNetwork& net);

}  // namespace kronred
