#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lacuna/config.hpp"
#include "lacuna/experiments.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/report.hpp"

using namespace lacuna;

namespace {

const char* small_ie = R"({
  "experiment": "verify-ie",
  "grid": {"n": 2, "M": 32},
  "directions": {"type": "planar", "order": 1, "branching": 4},
  "seed": 3,
  "params": {"trials": 4, "band": 12, "directions_used": 2}
})";

}  // namespace

TEST_CASE("config parsing")
{
    auto c = parse_config(small_ie);
    CHECK(c.experiment == "verify-ie");
    CHECK(c.grid == TorusGrid(2, 32));
    CHECK(c.seed == 3);
    CHECK(c.param_int("trials", 0) == 4);
    CHECK(c.param_int("missing", 9) == 9);
    CHECK(c.direction_set().size() == 4);
    CHECK(c.tolerance("max_error", 0.5) == 0.5);
    CHECK(c.hash() == parse_config(small_ie).hash());
    CHECK(c.hash().size() == 16);

    auto d = c;
    d.seed = 4;
    CHECK(d.hash() != c.hash());
}

TEST_CASE("config errors")
{
    const char* bad[] = {
        "not json",
        "[]",
        R"({"experiment": "verify-ie", "grid": {"n": 2, "M": 32}})",
        R"({"experiment": "nope", "seed": 1})",
        R"({"experiment": "verify-ie", "seed": -1})",
        R"({"experiment": "verify-ie", "seed": 1, "grid": {"n": 2, "M": 48}})",
        R"({"experiment": "verify-ie", "seed": 1, "bogus": 1})",
        R"({"experiment": "verify-ie", "seed": 1, "params": {"trials": "four"}})",
        R"({"experiment": "verify-ie", "seed": 1, "params": {"unknown": 1}})",
        R"({"experiment": "verify-ie", "seed": 1, "directions": {"type": "planar", "order": 2, "branching": 4, "separation": 2}})",
        R"({"experiment": "verify-ie", "seed": 1, "directions": {"type": "spiral"}})",
        R"({"experiment": "verify-ie", "seed": 1, "profile": "nope"})",
        R"({"experiment": "a2", "seed": 1, "weight": "power:3"})",
        R"({"experiment": "cww", "seed": 1, "sweep": [0, 2]})",
        R"({"experiment": "cww", "seed": 1, "tolerances": {"x": "y"}})",
        R"({"experiment": "apply", "seed": 1, "grid": {"n": 2, "M": 32}, "directions": {"type": "explicit", "vectors": [[1, 0.5, 1]]}})",
    };
    for (const char* text : bad) CHECK_THROWS_AS(parse_config(text), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    CHECK(experiment_names().size() == 11);
}

TEST_CASE("direction specs")
{
    nlohmann::json dy = {{"type", "dyadic"}, {"levels", {-1, 0, 2}}};
    auto s = build_directions(dy, 2);
    REQUIRE(s.size() == 3);
    CHECK(s[2][1] / s[2][0] == doctest::Approx(0.25));
    nlohmann::json ex = {{"type", "explicit"}, {"vectors", {{1.0, 0.5}, {1.0, 0.1}}}, {"order", 1}};
    CHECK(build_directions(ex, 2).declared_order() == 1);
    nlohmann::json eq = {{"type", "equispaced"}, {"count", 12}};
    CHECK(build_directions(eq, 2).size() == 12);
}

TEST_CASE("report format")
{
    Report r("demo", "00ff", 42, 1);
    r.add("s", "a,b", "m", 0.1);
    r.add_text("s", "q\"x", "m", "text");
    r.add("s", "inf", "m", INFINITY);
    CHECK(r.csv() ==
          "experiment,section,item,metric,value,config_hash,seed\n"
          "demo,s,\"a,b\",m,0.10000000000000001,00ff,42\n"
          "demo,s,\"q\"\"x\",m,text,00ff,42\n"
          "demo,s,inf,m,inf,00ff,42\n");
    CHECK(r.value("s", "a,b", "m") == 0.1);
    CHECK_THROWS(r.value("s", "none", "m"));

    CHECK(r.check("small", 1.0, "<=", 2.0));
    CHECK(r.passed());
    CHECK_FALSE(r.check("big", 3.0, "<", 2.0));
    CHECK_FALSE(r.passed());
    CHECK_THROWS(r.check("odd", 1.0, "~", 1.0));
    auto j = r.summary_json();
    CHECK(j["passed"] == false);
    CHECK(j["checks"].size() == 2);
    CHECK(j["provenance"]["seed"] == 42);
    CHECK(r.one_line().rfind("demo: FAIL", 0) == 0);

    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(NAN) == "nan");
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("model fits")
{
    // y = 2 + 3 sqrt(log N) exactly
    std::vector<double> x, y;
    for (double N = 2; N <= 256; N *= 2) {
        x.push_back(N);
        y.push_back(2.0 + 3.0 * std::sqrt(std::log(N)));
    }
    auto f = fit_model(x, y, sqrt_log);
    CHECK(f.a == doctest::Approx(2.0));
    CHECK(f.c == doctest::Approx(3.0));
    CHECK(f.rss < 1e-20);
    auto l = fit_model(x, y, plain_log);
    CHECK(l.rss > f.rss);
    auto c = fit_model(x, y, nullptr);
    double mean = 0.0;
    for (double v : y) mean += v / static_cast<double>(y.size());
    CHECK(c.a == doctest::Approx(mean));
    CHECK(c.c == 0.0);
    CHECK(c.rss > l.rss);
    CHECK_THROWS(fit_model({}, {}, nullptr));
}

TEST_CASE("axis choice")
{
    auto v = Direction::from_coords({1.0, 0.2, 0.5});
    CHECK(choose_axis(v, 0) == 1);
    CHECK(choose_axis(v, 3) == 2);
    CHECK_THROWS_AS(choose_axis(v, 4), ConfigError);
}

TEST_CASE("decay constants of a separable kernel")
{
    // phi(x) = prod_k s / (1 + s |x_k|)^2 gives exactly 1 wherever the window reaches
    TorusGrid g(2, 64);
    auto v = Direction::from_coords({1.0, 1.0});
    const int t = 3;
    const double s = std::ldexp(1.0, t);
    GridFunction phi(g, Side::physical);
    std::vector<double> x(2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        double p = 1.0;
        for (double c : x) {
            const double d = c - std::floor(c + 0.5);
            p *= s / std::pow(1.0 + s * std::abs(d), 2);
        }
        phi.values[i] = p;
    }
    auto dc = decay_constants(phi, v, 1, t, t);
    CHECK(dc.window == doctest::Approx(1.0));
    CHECK(dc.sup == doctest::Approx(1.0));
}

TEST_CASE("experiments run and are deterministic")
{
    auto c = parse_config(small_ie);
    auto a = run_experiment(c);
    CHECK(a.report.passed());
    set_default_threads(3);
    auto b = run_experiment(c);
    set_default_threads(1);
    CHECK(a.report.csv() == b.report.csv());

    auto d = parse_config(R"({"experiment": "dissect", "grid": {"n": 2, "M": 32},
        "directions": {"type": "planar", "order": 2, "branching": 2}, "seed": 1})");
    auto r = dissect(d);
    CHECK(r.report.passed());

    auto gd = gen_directions(parse_config(R"({"experiment": "gen-directions", "grid": {"n": 2, "M": 32},
        "directions": {"type": "planar", "order": 1, "branching": 5}, "seed": 1})"));
    REQUIRE(gd.files.size() == 1);
    CHECK(DirectionSet::from_json(gd.files.front().second).size() == 5);

    auto wrong = parse_config(R"({"experiment": "kernel-decay", "grid": {"n": 2, "M": 32},
        "directions": {"type": "dyadic", "levels": [0, 1]}, "seed": 1, "params": {"t": [4]}})");
    CHECK_THROWS_AS(run_experiment(wrong), ConfigError);
}
