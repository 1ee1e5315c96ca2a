#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

// Configuration record for one CLI run. Flag values are kept as the raw
// strings the user typed: exact decimals survive serialization untouched, so
// parse(print(config)) is the identity byte for byte.

namespace psb {

struct experiment_config {
    std::string command;
    std::map<std::string, std::string> flags;
    std::vector<uint64_t> seed_list;
    std::string output_dir;
    int parallelism = 1;

    bool operator==(const experiment_config&) const = default;
};

inline std::string config_to_json(const experiment_config& cfg) {
    nlohmann::json j;
    j["command"] = cfg.command;
    j["flags"] = cfg.flags;
    j["seedList"] = cfg.seed_list;
    j["outputDir"] = cfg.output_dir;
    j["parallelism"] = cfg.parallelism;
    return j.dump();
}

inline experiment_config config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    experiment_config cfg;
    cfg.command = j.at("command").get<std::string>();
    cfg.flags = j.at("flags").get<std::map<std::string, std::string>>();
    cfg.seed_list = j.at("seedList").get<std::vector<uint64_t>>();
    cfg.output_dir = j.at("outputDir").get<std::string>();
    cfg.parallelism = j.at("parallelism").get<int>();
    return cfg;
}

// FNV-1a over the canonical serialization; stable across runs and platforms.
inline uint64_t config_hash(const experiment_config& cfg) {
    const std::string s = config_to_json(cfg);
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace psb
