// Report envelope for the command-line front end: a stable JSON wire shape
// that round-trips exactly, so scripts can archive and replay tool output.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"

namespace fiblab::report {

inline constexpr const char* kToolVersion = "fiblab 0.1.0";

struct Report {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json result = nlohmann::json::object();
    std::vector<std::string> citations;
    std::string tool_version = kToolVersion;

    bool operator==(const Report& o) const = default;
};

// Wire shape: {"command", "params", "result", "citations", "tool_version"}.
nlohmann::json to_json(const Report& r);
// Exact inverse of to_json; wrong shapes throw ParseError.
Report from_json(const nlohmann::json& j);

// {"free_rank": r, "torsion": [d1, ...], "name": "Z^r + Z_d1 + ..."}.
nlohmann::json group_json(const fgab::AbGroup& g);

}  // namespace fiblab::report
