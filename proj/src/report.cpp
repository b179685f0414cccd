#include "fiblab/report.hpp"

namespace fiblab::report {

nlohmann::json to_json(const Report& r) {
    return nlohmann::json{{"command", r.command},
                          {"params", r.params},
                          {"result", r.result},
                          {"citations", r.citations},
                          {"tool_version", r.tool_version}};
}

Report from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("report: not a JSON object");
    for (const char* field : {"command", "params", "result", "citations", "tool_version"})
        if (!j.contains(field))
            throw ParseError(std::string("report: missing field '") + field + "'");
    if (!j["command"].is_string() || !j["tool_version"].is_string() ||
        !j["citations"].is_array())
        throw ParseError("report: field with wrong type");
    Report r;
    r.command = j["command"].get<std::string>();
    r.params = j["params"];
    r.result = j["result"];
    for (const auto& c : j["citations"]) {
        if (!c.is_string()) throw ParseError("report: citation is not a string");
        r.citations.push_back(c.get<std::string>());
    }
    r.tool_version = j["tool_version"].get<std::string>();
    return r;
}

nlohmann::json group_json(const fgab::AbGroup& g) {
    return nlohmann::json{{"free_rank", g.free_rank},
                          {"torsion", g.torsion},
                          {"name", g.to_string()}};
}

}  // namespace fiblab::report
