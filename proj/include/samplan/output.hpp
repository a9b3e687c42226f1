#ifndef SAMPLAN_OUTPUT_HPP
#define SAMPLAN_OUTPUT_HPP

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "samplan/simulator.hpp"
#include "samplan/tables.hpp"

namespace samplan {

enum class OutputFormat { json, csv, text };

inline OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    if (name == "text") return OutputFormat::text;
    throw std::domain_error("format must be json, csv or text");
}

/// Resolution order: explicit flag, SAMPLAN_DEFAULT_FORMAT, then json.
inline OutputFormat default_format() {
    if (const char* env = std::getenv("SAMPLAN_DEFAULT_FORMAT"))
        return parse_format(env);
    return OutputFormat::json;
}

inline constexpr const char* kSchemaVersion = "1.0";

/// Envelope every command emits in JSON mode.  Readers must tolerate unknown
/// fields; schema_version gates breaking changes.
struct OutputRecord {
    std::string command;
    nlohmann::json inputs;
    nlohmann::json result;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const {
        return {
            {"schema_version", kSchemaVersion},
            {"command", command},
            {"inputs", inputs},
            {"result", result},
            {"warnings", warnings},
        };
    }
};

inline nlohmann::json to_json(const SimResult& s) {
    return {
        {"lots_counted", s.lots_counted},
        {"accepted", s.accepted},
        {"rate", s.rate},
        {"std_err", s.std_err},
        {"seed", s.seed},
    };
}

inline nlohmann::json to_json(const AnalyticComparison& c) {
    return {
        {"analytic", c.analytic},
        {"empirical", c.empirical},
        {"std_err", c.std_err},
        {"z", c.exact_disagreement ? nlohmann::json(nullptr) : nlohmann::json(c.z)},
        {"flagged", c.flagged},
        {"exact_disagreement", c.exact_disagreement},
        {"simulation", to_json(c.sim)},
    };
}

} // namespace samplan

#endif // SAMPLAN_OUTPUT_HPP
