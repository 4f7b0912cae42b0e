#pragma once
// Simulation configuration: key=value file, keys named exactly after the
// fields below. Unknown keys are errors so typos cannot silently fall back
// to defaults.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fcaroute/errors.hpp"

namespace fcaroute {

enum class Strategy { Flooding, LpsV1, LpsV2 };
enum class MaintenanceMode { Static, Incremental };
enum class UpdateCountMode { Global, PerPeer };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Flooding: return "flooding";
        case Strategy::LpsV1: return "lps_v1";
        case Strategy::LpsV2: return "lps_v2";
    }
    return "?";
}

inline const char* to_string(MaintenanceMode m) {
    return m == MaintenanceMode::Static ? "static" : "incremental";
}

inline Strategy parse_strategy(const std::string& name) {
    if (name == "flooding") return Strategy::Flooding;
    if (name == "lps_v1") return Strategy::LpsV1;
    if (name == "lps_v2") return Strategy::LpsV2;
    throw DataError("unknown strategy '" + name +
                    "' (expected flooding|lps_v1|lps_v2)");
}

inline MaintenanceMode parse_maintenance_mode(const std::string& name) {
    if (name == "static") return MaintenanceMode::Static;
    if (name == "incremental") return MaintenanceMode::Incremental;
    throw DataError("unknown maintenance_mode '" + name +
                    "' (expected static|incremental)");
}

struct SimConfig {
    int ttl = 4;
    int pmax = 3;
    std::size_t overlay_size = 0;  // 0 = take from the dataset
    std::size_t warmup_queries = 0;
    std::vector<std::size_t> update_schedule;  // post-warmup query counts, increasing
    Strategy strategy = Strategy::LpsV2;
    Strategy intermediate_strategy = Strategy::LpsV2;
    bool intermediate_strategy_set = false;  // defaults to `strategy` otherwise
    MaintenanceMode maintenance_mode = MaintenanceMode::Static;
    UpdateCountMode update_count_mode = UpdateCountMode::Global;
    std::uint64_t seed = 1;
    std::size_t interval = 2000;  // metrics bucket, in queries
    double sqpc_min_overlap = 0.0;
    bool fallback_fill = true;       // pad short selections with random neighbors
    bool log_at_intermediate = false;  // reserved; only the origin logs by default

    Strategy effective_intermediate() const {
        return intermediate_strategy_set ? intermediate_strategy : strategy;
    }
};

inline void validate_config(const SimConfig& c) {
    auto fail = [](const std::string& m) { throw DataError("config: " + m); };
    if (c.ttl < 1) fail("ttl must be >= 1");
    if (c.pmax < 1) fail("pmax must be >= 1");
    if (c.interval == 0) fail("interval must be positive");
    for (std::size_t i = 1; i < c.update_schedule.size(); ++i)
        if (c.update_schedule[i] <= c.update_schedule[i - 1])
            fail("update_schedule must be strictly increasing");
    if (!c.update_schedule.empty() && c.update_schedule.front() == 0)
        fail("update_schedule offsets must be positive");
    if (c.sqpc_min_overlap < 0.0 || c.sqpc_min_overlap >= 1.0)
        fail("sqpc_min_overlap must lie in [0,1)");
}

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw DataError("config: bad boolean for " + key + ": '" + v + "'");
}

inline std::vector<std::size_t> parse_size_list(const std::string& v) {
    std::vector<std::size_t> out;
    std::string tok;
    std::istringstream ss(v);
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoull(tok));
    return out;
}

}  // namespace detail

inline void apply_config_key(SimConfig& c, const std::string& key,
                             const std::string& value) {
    try {
        if (key == "ttl") c.ttl = std::stoi(value);
        else if (key == "pmax") c.pmax = std::stoi(value);
        else if (key == "overlay_size") c.overlay_size = std::stoull(value);
        else if (key == "warmup_queries") c.warmup_queries = std::stoull(value);
        else if (key == "update_schedule") c.update_schedule = detail::parse_size_list(value);
        else if (key == "strategy") c.strategy = parse_strategy(value);
        else if (key == "intermediate_strategy") {
            c.intermediate_strategy = parse_strategy(value);
            c.intermediate_strategy_set = true;
        }
        else if (key == "maintenance_mode") c.maintenance_mode = parse_maintenance_mode(value);
        else if (key == "update_count_mode") {
            if (value == "global") c.update_count_mode = UpdateCountMode::Global;
            else if (value == "per_peer") c.update_count_mode = UpdateCountMode::PerPeer;
            else throw DataError("unknown update_count_mode '" + value + "'");
        }
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "interval") c.interval = std::stoull(value);
        else if (key == "sqpc_min_overlap") c.sqpc_min_overlap = std::stod(value);
        else if (key == "fallback_fill") c.fallback_fill = detail::parse_bool(value, key);
        else if (key == "log_at_intermediate")
            c.log_at_intermediate = detail::parse_bool(value, key);
        else throw DataError("unknown config key '" + key + "'");
    } catch (const DataError&) {
        throw;
    } catch (const std::exception&) {
        throw DataError("config: bad value for " + key + ": '" + value + "'");
    }
}

inline SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    SimConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, lineno, "expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        try {
            apply_config_key(c, key, value);
        } catch (const DataError& e) {
            throw ParseError(path, lineno, e.what());
        }
    }
    validate_config(c);
    return c;
}

}  // namespace fcaroute
