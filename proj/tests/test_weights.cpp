#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lacuna/operators.hpp"
#include "lacuna/test_functions.hpp"
#include "lacuna/weights.hpp"

using namespace lacuna;

namespace {

std::vector<double> short_radii() { return {1.0 / 256, 1.0 / 128, 1.0 / 64}; }

}  // namespace

TEST_CASE("weight specs")
{
    const double x[] = {0.25, 0.5};
    CHECK(make_weight("constant", 2)(x) == 1.0);
    CHECK(make_weight("constant:4", 2)(x) == 4.0);
    CHECK(make_weight("sinusoidal", 2)(x) == doctest::Approx(3.0));
    CHECK(make_weight("sinusoidal:2", 2)(x) == doctest::Approx(2.0));
    CHECK(make_weight("power:0.5", 2)(x) == doctest::Approx(0.5));
    CHECK(make_weight("power:0.5:2", 2)(x) == doctest::Approx(std::sqrt(0.5)));
    CHECK(make_weight("tensor:0.5", 2)(x) == doctest::Approx(0.5 * std::sqrt(0.5)));
    CHECK(make_weight("constant:4", 2).scaled(0.5)(x) == 2.0);
    for (const char* bad : {"", "nope", "constant:0", "constant:-1", "power", "power:1.5", "power:0.5:3", "sinusoidal:1:2.5",
                            "constant:abc"})
        CHECK_THROWS(make_weight(bad, 2));
    CHECK_THROWS(make_weight("constant", 2).scaled(0.0));
}

TEST_CASE("a2 constant of constants is exactly one")
{
    auto O = generate_planar_lacunary(2, 4);
    for (const char* spec : {"constant", "constant:4", "constant:0.37"}) {
        auto r = a2_constant(make_weight(spec, 2), O, 64, short_radii(), 1);
        CHECK(r.constant_estimate == 1.0);
        CHECK(r.samples == 64);
    }
}

TEST_CASE("a2 constant is scale invariant")
{
    auto O = generate_planar_lacunary(2, 4);
    for (const char* spec : {"sinusoidal", "power:0.5:1:0.1234", "tensor:0.3:0.01"}) {
        auto w = make_weight(spec, 2);
        const double a = a2_constant(w, O, 200, short_radii(), 5).constant_estimate;
        CHECK(a >= 1.0);
        for (double lambda : {0.5, 2.0, 1024.0}) CHECK(a2_constant(w.scaled(lambda), O, 200, short_radii(), 5).constant_estimate == a);
    }
}

TEST_CASE("a2 constant examples")
{
    DirectionSet e2({Direction::from_coords({1e-3, 1.0})});
    CHECK(a2_constant(make_weight("sinusoidal:1", 2), e2, 512, short_radii(), 3).constant_estimate <= 1.01);

    // |t|^(1/2) along an e_1-adjacent direction: intervals at the origin give 1 / ((1 + a)(1 - a)) = 4/3,
    // and the trapezoid rule overshoots when a node falls next to the zero
    DirectionSet e1({Direction::from_coords({1.0, 1e-3})});
    const double est = a2_constant(make_weight("power:0.5", 2), e1, 4096, {1.0 / 64, 1.0 / 16, 1.0 / 8, 1.0 / 4}, 3).constant_estimate;
    CHECK(est > 1.3);
    CHECK(std::isfinite(est));
}

TEST_CASE("a2 estimate is a running maximum")
{
    auto O = generate_planar_lacunary(1, 4);
    auto w = make_weight("power:0.4:1:0.3", 2);
    double last = 0.0;
    for (std::size_t s : {1, 8, 64, 512}) {
        const double a = a2_constant(w, O, s, short_radii(), 9).constant_estimate;
        CHECK(a >= last);
        last = a;
    }
    CHECK_THROWS(a2_constant(w, O, 0, short_radii()));
}

TEST_CASE("weighted norms")
{
    TorusGrid g(2, 32);
    auto f = random_band_limited(g, 4, 10);
    CHECK(weighted_norm(f, make_weight("constant", 2), 2.0) == doctest::Approx(norm(f, 2.0)).epsilon(1e-14));
    CHECK(weighted_norm(f, make_weight("constant", 2), 3.0) == doctest::Approx(norm(f, 3.0)).epsilon(1e-14));
    CHECK(weighted_norm(f, make_weight("constant:4", 2), 2.0) == doctest::Approx(2.0 * norm(f, 2.0)).epsilon(1e-14));
    auto lo = make_weight("sinusoidal:1:0.5", 2);
    auto hi = make_weight("sinusoidal:1:0.5", 2).scaled(1.5);
    CHECK(weighted_norm(f, lo, 2.0) <= weighted_norm(f, hi, 2.0));
    CHECK_THROWS(weighted_norm(f, lo, 0.5));
}

TEST_CASE("weighted cone projection smoke test")
{
    TorusGrid g(2, 64);
    auto w = make_weight("sinusoidal", 2);
    std::vector<double> per_v;
    for (const auto& v : generate_planar_lacunary(2, 4)) {
        double c = 0.0;
        for (std::uint64_t s = 0; s < 8; ++s) {
            // random f seldom sit in the cone; W_v f does
            const auto r = random_band_limited(g, 100 + s, 20);
            for (const auto& f : {r, nsw_projection(r, v)})
                c = std::max(c, weighted_norm(nsw_projection(f, v), w, 2.0) / weighted_norm(f, w, 2.0));
        }
        CHECK(std::isfinite(c));
        per_v.push_back(c);
    }
    const auto [lo, hi] = std::minmax_element(per_v.begin(), per_v.end());
    CHECK(*hi / *lo <= 2.0);
}
