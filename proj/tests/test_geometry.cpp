#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lacuna/geometry.hpp"

using namespace lacuna;

namespace {

// Brute-force level: the unique l with 2^-(l+1) < r <= 2^-l, found by scanning.
int oracle_level(double r)
{
    for (int l = -80; l <= 80; ++l)
        if (std::ldexp(1.0, -(l + 1)) < r && r <= std::ldexp(1.0, -l)) return l;
    return 1000;
}

Direction planar(double a, double b) { return Direction::from_coords({a, b}); }

}  // namespace

TEST_CASE("direction normalization and validation")
{
    auto v = Direction::from_coords({3.0, 4.0});
    CHECK(v[0] == doctest::Approx(0.6));
    CHECK(v[1] == doctest::Approx(0.8));
    CHECK_THROWS(Direction::from_coords({1.0, 0.0}));
    CHECK_THROWS(Direction::from_coords({-1.0, 1.0}));
    CHECK_THROWS(Direction::from_coords({1.0}));
    CHECK_THROWS(Direction::from_unit({0.6, 0.6}));
}

TEST_CASE("sector index examples")
{
    const SigmaIndex s12{0, 1};
    CHECK(sector_index(planar(2, 1), s12) == 1);
    CHECK(sector_index(planar(1, 0.3), s12) == 1);
    CHECK(sector_index(planar(1, 0.2), s12) == 2);
    CHECK(sector_index(planar(1, 1), s12) == 0);
    CHECK(sector_index(planar(1, 3), s12) == -2);
}

TEST_CASE("sector index agrees with a scanning oracle")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> e(-30.0, 30.0);
    for (int i = 0; i < 20000; ++i) {
        const double r = std::exp2(e(rng));
        auto v = planar(1.0, r);
        CHECK(sector_index(v, {0, 1}) == oracle_level(v[1] / v[0]));
    }
    for (int l = -20; l <= 20; ++l) {
        CHECK(sector_index(planar(1.0, std::ldexp(1.0, -l)), {0, 1}) == l);
        CHECK(dyadic_level(std::ldexp(1.0, -l)) == l);
    }
}

TEST_CASE("cell index examples")
{
    auto c = cell_index(Direction::from_coords({4, 2, 1}));
    CHECK(c.at({0, 1}) == 1);
    CHECK(c.at({0, 2}) == 2);
    CHECK(c.at({1, 2}) == 1);
    auto d = cell_index(Direction::from_coords({1, 1, 1}));
    for (auto s : sigma_pairs(3)) CHECK(d.at(s) == 0);
    CHECK(cell_index(planar(2, 1)).at({0, 1}) == 1);
    CHECK(sigma_pairs(4).size() == 6);
    CHECK(SigmaIndex{0, 2}.label() == "(1,3)");
}

TEST_CASE("partition by sector")
{
    DirectionSet two({planar(2, 1), planar(4, 1)});
    auto p = partition_by_sector(two, {0, 1});
    REQUIRE(p.size() == 2);
    CHECK(p.at(1)[0] == two[0]);
    CHECK(p.at(2)[0] == two[1]);

    std::vector<Direction> dirs;
    for (int l = 1; l <= 8; ++l) dirs.push_back(planar(1, std::ldexp(1.0, -l)));
    auto q = partition_by_sector(DirectionSet(dirs), {0, 1});
    CHECK(q.size() == 8);
    for (const auto& [l, s] : q) {
        CHECK(s.size() == 1);
        CHECK(oracle_level(s[0][1] / s[0][0]) == l);
    }
}

TEST_CASE("lacunarity order")
{
    CHECK(lacunarity_order(DirectionSet({planar(1, 0.3)}), 4) == 0);

    std::vector<Direction> one;
    for (int l = 1; l <= 16; ++l) one.push_back(planar(1, std::ldexp(1.0, -l)));
    CHECK(lacunarity_order(DirectionSet(one), 4) == 1);

    std::vector<Direction> two;
    for (int l = 1; l <= 4; ++l)
        for (int m = 1; m <= 4; ++m) two.push_back(planar(1, std::ldexp(1.0, -l) * (1.0 + std::ldexp(1.0, -m - 4))));
    CHECK(lacunarity_order(DirectionSet(two), 4) == 2);
    CHECK(lacunarity_order(DirectionSet(two), 1) == std::nullopt);

    auto eq = generate_equispaced(64);
    CHECK(lacunarity_order(eq, 3) == std::nullopt);
}

TEST_CASE("planar generator")
{
    auto g18 = generate_planar_lacunary(1, 8);
    CHECK(g18.size() == 8);
    for (int l = 1; l <= 8; ++l) {
        bool found = false;
        for (const auto& v : g18) found = found || std::abs(v[1] / v[0] - std::ldexp(1.0, -l)) < 1e-15;
        CHECK(found);
    }
    auto g24 = generate_planar_lacunary(2, 4);
    CHECK(g24.size() == 16);
    CHECK(lacunarity_order(g24, 4) == 2);
    CHECK(lacunarity_order(generate_planar_lacunary(1, 1), 4) == 0);

    for (int L = 1; L <= 3; ++L)
        for (int b : {2, 4, 8}) {
            auto s = generate_planar_lacunary(L, b);
            CHECK(s.size() == static_cast<std::size_t>(std::pow(b, L)));
            auto o = lacunarity_order(s, L);
            REQUIRE(o.has_value());
            CHECK(*o <= L);
        }
    CHECK_THROWS(generate_planar_lacunary(0, 4));
    CHECK_THROWS(generate_planar_lacunary(2, 4, 2, 3));
}

TEST_CASE("nested prefixes never raise the order")
{
    auto s = generate_planar_lacunary(4, 4);
    int last = 0;
    for (std::size_t k : {1, 4, 16, 64, 256}) {
        auto o = lacunarity_order(s.prefix(k), 4);
        REQUIRE(o.has_value());
        CHECK(*o >= last);
        last = *o;
    }
    CHECK(last <= 4);
}

TEST_CASE("product generator")
{
    auto p = generate_product_lacunary(3, {{1, 2, 3}, {5, 6, 7}});
    CHECK(p.size() == 9);
    auto o = lacunarity_order(p, 3);
    REQUIRE(o.has_value());
    CHECK(*o <= 2);

    auto a = generate_product_lacunary(2, {{1, 2, 3, 4, 5, 6, 7, 8}});
    auto b = generate_planar_lacunary(1, 8);
    REQUIRE(a.size() == b.size());
    for (const auto& v : a) {
        bool found = false;
        for (const auto& w : b) found = found || angular_distance(v, w) < 1e-15;
        CHECK(found);
    }
}

TEST_CASE("direction set validation and json")
{
    CHECK_THROWS(DirectionSet({planar(1, 0.5), planar(2, 1)}));
    CHECK_THROWS(DirectionSet({planar(1, 0.5), Direction::from_coords({1, 1, 1})}));
    auto s = generate_planar_lacunary(2, 4);
    auto r = DirectionSet::from_json(s.to_json());
    REQUIRE(r.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(angular_distance(r[i], s[i]) < 1e-15);
    CHECK(s.prefix(5).size() == 5);
}

TEST_CASE("equispaced generator")
{
    auto e = generate_equispaced(16);
    CHECK(e.size() == 16);
    auto e32 = generate_equispaced(32);
    std::size_t shared = 0;
    for (const auto& v : e)
        for (const auto& w : e32) shared += angular_distance(v, w) < 1e-12;
    CHECK(shared == 16);
}

TEST_CASE("cone membership examples")
{
    auto v = planar(1, 1);
    const double a[] = {1, -1}, b[] = {1, 1};
    CHECK(cone_membership(a, v));
    CHECK_FALSE(cone_membership(b, v));
    const double c[] = {1, -2, 0};
    CHECK(cone_membership(c, Direction::from_coords({4, 2, 1})));
}

TEST_CASE("wedge membership examples")
{
    const double a[] = {-1, 1}, b[] = {1, 1}, c[] = {-2.5, 1};
    CHECK(wedge_membership(a, {0, 1}, 0, false));
    CHECK_FALSE(wedge_membership(b, {0, 1}, 0, false));
    CHECK_FALSE(wedge_membership(c, {0, 1}, 0, false));
    CHECK(wedge_membership(c, {0, 1}, 0, true));
}

TEST_CASE("membership is homogeneous")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> xi{g(rng), g(rng), g(rng)};
        auto v = Direction::from_coords({std::abs(g(rng)) + 0.01, std::abs(g(rng)) + 0.01, std::abs(g(rng)) + 0.01});
        const int l = static_cast<int>(rng() % 7) - 3;
        const bool c0 = cone_membership(xi, v);
        const bool w0 = wedge_membership(xi, {0, 2}, l, true);
        for (double t : {1e-6, 1.0, 1e6}) {
            std::vector<double> s{t * xi[0], t * xi[1], t * xi[2]};
            CHECK(cone_membership(s, v) == c0);
            CHECK(wedge_membership(s, {0, 2}, l, true) == w0);
        }
    }
}

TEST_CASE("cone points land in one of their cell's wedges")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int n : {2, 3}) {
        for (int i = 0; i < 500; ++i) {
            std::vector<double> raw(static_cast<std::size_t>(n));
            for (auto& x : raw) x = std::exp2(u(rng));
            auto v = Direction::from_coords(raw);
            auto cell = cell_index(v);
            int tried = 0;
            while (tried < 50) {
                std::vector<double> xi(static_cast<std::size_t>(n));
                for (auto& x : xi) x = g(rng);
                if (!cone_membership(xi, v)) continue;
                ++tried;
                bool covered = false;
                for (auto s : sigma_pairs(n)) covered = covered || wedge_membership(xi, s, cell.at(s), false);
                CHECK(covered);
            }
        }
    }
}
