#pragma once

// Experiment configuration files (JSON). See README for the format.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacuna/geometry.hpp"
#include "lacuna/spectral.hpp"

namespace lacuna {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Experiment names, identical to the CLI subcommands.
const std::vector<std::string>& experiment_names();

/// Builds a direction set in R^n from a spec object:
///   {"type":"planar","order":L,"branching":b[,"separation":g]}
///   {"type":"dyadic","levels":[l,...][,"factor":c]}      -> (1, c 2^-l, ..., c 2^-l)
///   {"type":"product","lists":[[a,...],...]}
///   {"type":"equispaced","count":N}
///   {"type":"explicit","vectors":[[x,...],...][,"order":L]}
DirectionSet build_directions(const nlohmann::json& spec, int n);

struct ExperimentConfig {
    std::string experiment;
    TorusGrid grid;
    nlohmann::json directions;  // null when unused
    std::string profile = "hilbert_sign";
    std::string weight = "constant";
    std::vector<int> sweep;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;
    nlohmann::json params = nlohmann::json::object();

    /// Canonical JSON (sorted keys, no whitespace).
    nlohmann::json to_json() const;
    std::string hash() const;

    DirectionSet direction_set() const;
    double tolerance(const std::string& name, double fallback) const;

    int param_int(const std::string& key, int fallback) const;
    double param_double(const std::string& key, double fallback) const;
    bool param_bool(const std::string& key, bool fallback) const;
    std::string param_string(const std::string& key, const std::string& fallback) const;
    std::vector<int> param_ints(const std::string& key, const std::vector<int>& fallback) const;
    std::vector<std::string> param_strings(const std::string& key, const std::vector<std::string>& fallback) const;
    const nlohmann::json* param(const std::string& key) const;
};

/// Parses and validates; throws ConfigError on any schema violation.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace lacuna
