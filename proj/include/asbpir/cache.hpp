#pragma once

// Append-only JSONL result cache. One JSON record per line; lookups scan the
// whole file and the last matching record wins, so re-running a search simply
// appends a fresher record.

#include "json.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace asbpir {

inline std::optional<nlohmann::json> cache_lookup_raw(
    const std::string& path, const std::function<bool(const nlohmann::json&)>& match) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::optional<nlohmann::json> hit;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded()) continue;  // tolerate torn writes
        if (match(rec)) hit = std::move(rec);
    }
    return hit;
}

inline void cache_append_raw(const std::string& path, const nlohmann::json& record) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::invalid_argument("cache: cannot open " + path + " for append");
    out << record.dump() << "\n";
}

}  // namespace asbpir
