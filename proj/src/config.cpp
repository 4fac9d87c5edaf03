#include "lacuna/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lacuna/report.hpp"
#include "lacuna/symbols.hpp"
#include "lacuna/weights.hpp"

namespace lacuna {

using nlohmann::json;

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names = {"dissect",     "gen-directions", "verify-covering", "verify-ie",
                                                   "apply",       "sweep-norms",    "kernel-decay",    "cww",
                                                   "almost-ortho", "maximal-avg",   "a2"};
    return names;
}

namespace {

enum class T { integer, number, boolean, string, ints, numbers, strings, object, array };

const std::map<std::string, std::map<std::string, T>>& param_schema()
{
    static const std::map<std::string, std::map<std::string, T>> s = {
        {"dissect", {{"max_order", T::integer}}},
        {"gen-directions", {}},
        {"verify-covering", {{"dims", T::ints}, {"direction_samples", T::integer}, {"xi_samples", T::integer}}},
        {"verify-ie",
         {{"trials", T::integer}, {"band", T::integer}, {"directions_used", T::integer}, {"hyperplane_trial", T::boolean}}},
        {"apply",
         {{"operator", T::object}, {"input", T::string}, {"band", T::integer}, {"ball_radius", T::number},
          {"export", T::boolean}}},
        {"sweep-norms",
         {{"p", T::numbers}, {"random_functions", T::integer}, {"band", T::integer}, {"pieces", T::strings},
          {"maximal_average", T::boolean}, {"ball_radius", T::number}}},
        {"kernel-decay",
         {{"axis", T::integer}, {"t", T::ints}, {"refine", T::boolean}, {"pointwise", T::boolean},
          {"pointwise_functions", T::integer}, {"pointwise_M", T::integer}}},
        {"cww", {{"axis", T::integer}, {"random_functions", T::integer}, {"band", T::integer}}},
        {"almost-ortho", {{"families", T::array}, {"random_functions", T::integer}, {"band", T::integer}}},
        {"maximal-avg", {{"ball_radius", T::number}}},
        {"a2",
         {{"weights", T::strings}, {"samples", T::integer}, {"radii", T::numbers}, {"smoke_directions", T::integer},
          {"smoke_functions", T::integer}, {"smoke_M", T::integer}}},
    };
    return s;
}

bool has_type(const json& v, T t)
{
    auto all = [&](auto pred) {
        if (!v.is_array()) return false;
        for (const auto& e : v)
            if (!pred(e)) return false;
        return true;
    };
    switch (t) {
    case T::integer: return v.is_number_integer();
    case T::number: return v.is_number();
    case T::boolean: return v.is_boolean();
    case T::string: return v.is_string();
    case T::ints: return all([](const json& e) { return e.is_number_integer(); });
    case T::numbers: return all([](const json& e) { return e.is_number(); });
    case T::strings: return all([](const json& e) { return e.is_string(); });
    case T::object: return v.is_object();
    case T::array: return v.is_array();
    }
    return false;
}

template <class F>
auto wrap_errors(const std::string& what, F&& f)
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

void require_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || a == it.key();
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

DirectionSet build_directions(const json& spec, int n)
{
    if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string())
        throw ConfigError("directions must be an object with a string 'type'");
    const std::string type = spec["type"];
    return wrap_errors("directions", [&]() -> DirectionSet {
        if (type == "planar") {
            require_keys(spec, {"type", "order", "branching", "separation"}, "directions");
            return generate_planar_lacunary(spec.at("order").get<int>(), spec.at("branching").get<int>(), n,
                                            spec.value("separation", 4));
        }
        if (type == "dyadic") {
            require_keys(spec, {"type", "levels", "factor"}, "directions");
            const double c = spec.value("factor", 1.0);
            std::vector<Direction> dirs;
            for (int l : spec.at("levels").get<std::vector<int>>()) {
                std::vector<double> v(static_cast<std::size_t>(n), c * std::ldexp(1.0, -l));
                v[0] = 1.0;
                dirs.push_back(Direction::from_coords(v));
            }
            return DirectionSet(std::move(dirs));
        }
        if (type == "product") {
            require_keys(spec, {"type", "lists"}, "directions");
            return generate_product_lacunary(n, spec.at("lists").get<std::vector<std::vector<int>>>());
        }
        if (type == "equispaced") {
            require_keys(spec, {"type", "count"}, "directions");
            return generate_equispaced(spec.at("count").get<int>(), n);
        }
        if (type == "explicit") {
            require_keys(spec, {"type", "vectors", "order"}, "directions");
            std::vector<Direction> dirs;
            for (const auto& row : spec.at("vectors")) {
                const auto v = row.get<std::vector<double>>();
                if (static_cast<int>(v.size()) != n) throw ConfigError("explicit direction has the wrong dimension");
                dirs.push_back(Direction::from_coords(v));
            }
            std::optional<int> order;
            if (spec.contains("order")) order = spec["order"].get<int>();
            return DirectionSet(std::move(dirs), order);
        }
        throw ConfigError("unknown direction set type '" + type + "'");
    });
}

json ExperimentConfig::to_json() const
{
    json j;
    j["experiment"] = experiment;
    j["grid"] = {{"n", grid.n}, {"M", grid.M}};
    if (!directions.is_null()) j["directions"] = directions;
    j["profile"] = profile;
    j["weight"] = weight;
    j["sweep"] = sweep;
    j["seed"] = seed;
    j["tolerances"] = tolerances;
    j["params"] = params;
    return j;
}

std::string ExperimentConfig::hash() const
{
    return fnv1a_hex(to_json().dump());
}

DirectionSet ExperimentConfig::direction_set() const
{
    if (directions.is_null()) throw ConfigError("experiment '" + experiment + "' needs a 'directions' entry");
    return build_directions(directions, grid.n);
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const
{
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

const json* ExperimentConfig::param(const std::string& key) const
{
    auto it = params.find(key);
    return it == params.end() ? nullptr : &*it;
}

int ExperimentConfig::param_int(const std::string& key, int fallback) const
{
    const json* p = param(key);
    return p ? p->get<int>() : fallback;
}

double ExperimentConfig::param_double(const std::string& key, double fallback) const
{
    const json* p = param(key);
    return p ? p->get<double>() : fallback;
}

bool ExperimentConfig::param_bool(const std::string& key, bool fallback) const
{
    const json* p = param(key);
    return p ? p->get<bool>() : fallback;
}

std::string ExperimentConfig::param_string(const std::string& key, const std::string& fallback) const
{
    const json* p = param(key);
    return p ? p->get<std::string>() : fallback;
}

std::vector<int> ExperimentConfig::param_ints(const std::string& key, const std::vector<int>& fallback) const
{
    const json* p = param(key);
    return p ? p->get<std::vector<int>>() : fallback;
}

std::vector<std::string> ExperimentConfig::param_strings(const std::string& key,
                                                         const std::vector<std::string>& fallback) const
{
    const json* p = param(key);
    return p ? p->get<std::vector<std::string>>() : fallback;
}

ExperimentConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    require_keys(j, {"experiment", "grid", "directions", "profile", "weight", "sweep", "seed", "tolerances", "params"},
                 "config");

    ExperimentConfig c;
    if (!j.contains("experiment") || !j["experiment"].is_string()) throw ConfigError("'experiment' must be a string");
    c.experiment = j["experiment"];
    const auto& schema = param_schema();
    if (!schema.count(c.experiment)) throw ConfigError("unknown experiment '" + c.experiment + "'");

    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) throw ConfigError("'seed' is mandatory and must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object() || !g.contains("n") || !g.contains("M") || !g["n"].is_number_integer() ||
            !g["M"].is_number_integer())
            throw ConfigError("'grid' must be an object with integer n and M");
        require_keys(g, {"n", "M"}, "grid");
        c.grid = wrap_errors("grid", [&] { return TorusGrid(g["n"].get<int>(), g["M"].get<int>()); });
    }

    if (j.contains("directions")) {
        c.directions = j["directions"];
        build_directions(c.directions, c.grid.n);  // validate now
    }

    if (j.contains("profile")) {
        if (!j["profile"].is_string()) throw ConfigError("'profile' must be a string");
        c.profile = j["profile"];
    }
    wrap_errors("profile", [&] { return hm_profile(c.profile); });

    if (j.contains("weight")) {
        if (!j["weight"].is_string()) throw ConfigError("'weight' must be a string");
        c.weight = j["weight"];
    }
    wrap_errors("weight", [&] { return make_weight(c.weight, c.grid.n); });

    if (j.contains("sweep")) {
        if (!has_type(j["sweep"], T::ints)) throw ConfigError("'sweep' must be a list of integers");
        c.sweep = j["sweep"].get<std::vector<int>>();
        for (int v : c.sweep)
            if (v < 1) throw ConfigError("sweep entries must be >= 1");
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!it->is_number()) throw ConfigError("tolerance '" + it.key() + "' must be a number");
            c.tolerances[it.key()] = it->get<double>();
        }
    }

    if (j.contains("params")) {
        const auto& p = j["params"];
        if (!p.is_object()) throw ConfigError("'params' must be an object");
        const auto& allowed = schema.at(c.experiment);
        for (auto it = p.begin(); it != p.end(); ++it) {
            auto s = allowed.find(it.key());
            if (s == allowed.end())
                throw ConfigError("unknown parameter '" + it.key() + "' for experiment '" + c.experiment + "'");
            if (!has_type(*it, s->second)) throw ConfigError("parameter '" + it.key() + "' has the wrong type");
        }
        c.params = p;
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace lacuna
