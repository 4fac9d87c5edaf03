#pragma once

// Experiment reports: tidy CSV (one row per measurement) plus a JSON summary.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace lacuna {

/// Shortest round-trip decimal form ("%.17g"); "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

struct ToleranceCheck {
    std::string name;
    double measured = 0.0;
    double limit = 0.0;
    std::string relation;  // "<=", ">=", "<", ">" or "=="
    bool passed = false;
};

class Report {
public:
    Report(std::string experiment, std::string config_hash, std::uint64_t seed, int threads);

    void add(const std::string& section, const std::string& item, const std::string& metric, double value);
    void add_text(const std::string& section, const std::string& item, const std::string& metric,
                  const std::string& value);

    /// Records a check and returns whether it passed.
    bool check(const std::string& name, double measured, const std::string& relation, double limit);
    /// Records a boolean condition as a check against 1.
    bool check_true(const std::string& name, bool condition);

    nlohmann::json& summary() { return summary_; }
    const nlohmann::json& summary() const { return summary_; }

    bool passed() const;
    const std::vector<ToleranceCheck>& checks() const { return checks_; }
    const std::string& experiment() const { return experiment_; }

    /// Columns: experiment,section,item,metric,value,config_hash,seed
    std::string csv() const;
    nlohmann::json summary_json() const;
    /// Looks up a numeric row; throws std::out_of_range when absent.
    double value(const std::string& section, const std::string& item, const std::string& metric) const;

    /// One line: experiment name, PASS/FAIL and the checks.
    std::string one_line() const;

    static const char* version();

private:
    struct Row {
        std::string section, item, metric, value;
    };
    std::string experiment_, config_hash_;
    std::uint64_t seed_;
    int threads_;
    std::vector<Row> rows_;
    std::vector<ToleranceCheck> checks_;
    nlohmann::json summary_ = nlohmann::json::object();
};

}  // namespace lacuna
