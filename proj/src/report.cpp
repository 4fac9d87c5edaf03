#include "lacuna/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifndef LACUNA_VERSION
#define LACUNA_VERSION "0.0.0"
#endif

namespace lacuna {

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Report::Report(std::string experiment, std::string config_hash, std::uint64_t seed, int threads)
    : experiment_(std::move(experiment)), config_hash_(std::move(config_hash)), seed_(seed), threads_(threads)
{
}

void Report::add(const std::string& section, const std::string& item, const std::string& metric, double value)
{
    rows_.push_back({section, item, metric, format_double(value)});
}

void Report::add_text(const std::string& section, const std::string& item, const std::string& metric,
                      const std::string& value)
{
    rows_.push_back({section, item, metric, value});
}

bool Report::check(const std::string& name, double measured, const std::string& relation, double limit)
{
    bool ok = false;
    if (relation == "<=") ok = measured <= limit;
    else if (relation == ">=") ok = measured >= limit;
    else if (relation == "<") ok = measured < limit;
    else if (relation == ">") ok = measured > limit;
    else if (relation == "==") ok = measured == limit;
    else throw std::invalid_argument("unknown relation " + relation);
    checks_.push_back({name, measured, limit, relation, ok});
    return ok;
}

bool Report::check_true(const std::string& name, bool condition)
{
    return check(name, condition ? 1.0 : 0.0, "==", 1.0);
}

bool Report::passed() const
{
    for (const auto& c : checks_)
        if (!c.passed) return false;
    return true;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string Report::csv() const
{
    std::ostringstream os;
    os << "experiment,section,item,metric,value,config_hash,seed\n";
    for (const auto& r : rows_)
        os << csv_field(experiment_) << ',' << csv_field(r.section) << ',' << csv_field(r.item) << ','
           << csv_field(r.metric) << ',' << csv_field(r.value) << ',' << config_hash_ << ',' << seed_ << '\n';
    return os.str();
}

nlohmann::json Report::summary_json() const
{
    nlohmann::json j;
    j["experiment"] = experiment_;
    j["passed"] = passed();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : checks_)
        checks.push_back({{"name", c.name},
                          {"measured", format_double(c.measured)},
                          {"relation", c.relation},
                          {"limit", format_double(c.limit)},
                          {"passed", c.passed}});
    j["checks"] = checks;
    j["summary"] = summary_;
    j["provenance"] = {{"config_hash", config_hash_}, {"seed", seed_}, {"threads", threads_}, {"version", version()}};
    return j;
}

double Report::value(const std::string& section, const std::string& item, const std::string& metric) const
{
    for (const auto& r : rows_)
        if (r.section == section && r.item == item && r.metric == metric) return std::stod(r.value);
    throw std::out_of_range("no row " + section + "/" + item + "/" + metric);
}

std::string Report::one_line() const
{
    std::ostringstream os;
    os << experiment_ << ": " << (passed() ? "PASS" : "FAIL");
    for (const auto& c : checks_)
        os << " | " << c.name << " " << format_double(c.measured) << " " << c.relation << " " << format_double(c.limit)
           << (c.passed ? "" : " (failed)");
    return os.str();
}

const char* Report::version() { return LACUNA_VERSION; }

}  // namespace lacuna
