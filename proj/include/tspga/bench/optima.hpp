#pragma once

#include <optional>
#include <string_view>

namespace tspga::bench {

/// Known optimal closed-tour length for the stock benchmark instances, keyed
/// by instance name. Values follow the TSPLIB rounding conventions, so every
/// evaluated tour on these instances is bounded below by them.
inline std::optional<double> known_optimum(std::string_view instance_name) {
    struct Entry {
        std::string_view name;
        double optimum;
    };
    static constexpr Entry table[] = {
        {"rat783", 8806},  {"a280", 2579},    {"u159", 42080},  {"ch130", 6110},
        {"bier127", 118282}, {"kroA100", 21282}, {"pr76", 108159}, {"berlin52", 7542},
        {"att48", 10628},  {"eil51", 426},    {"pr144", 58537},
    };
    for (const auto& entry : table)
        if (entry.name == instance_name) return entry.optimum;
    return std::nullopt;
}

}  // namespace tspga::bench
