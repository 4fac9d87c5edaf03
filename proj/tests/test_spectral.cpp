#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "lacuna/spectral.hpp"
#include "lacuna/symbols.hpp"
#include "lacuna/test_functions.hpp"

using namespace lacuna;

namespace {

GridFunction wave(const TorusGrid& g, std::vector<int> k)
{
    GridFunction f(g, Side::physical);
    std::vector<double> x(static_cast<std::size_t>(g.n));
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        double ph = 0.0;
        for (int a = 0; a < g.n; ++a) ph += k[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        f.values[i] = std::polar(1.0, 2.0 * std::numbers::pi * ph);
    }
    return f;
}

double max_diff(const GridFunction& a, const GridFunction& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// Direct O(N^2) transform with the same normalization, n = 2.
std::vector<cplx> naive_dft(const GridFunction& f)
{
    const int M = f.grid.M;
    std::vector<cplx> out(f.values.size());
    for (int k0 = 0; k0 < M; ++k0)
        for (int k1 = 0; k1 < M; ++k1) {
            cplx s = 0.0;
            for (int x0 = 0; x0 < M; ++x0)
                for (int x1 = 0; x1 < M; ++x1)
                    s += f.values[static_cast<std::size_t>(x0 * M + x1)] *
                         std::polar(1.0, -2.0 * std::numbers::pi * (k0 * x0 + k1 * x1) / M);
            out[static_cast<std::size_t>(k0 * M + k1)] = s / double(M * M);
        }
    return out;
}

}  // namespace

TEST_CASE("grid validation")
{
    CHECK_THROWS(TorusGrid(2, 48));
    CHECK_THROWS(TorusGrid(1, 64));
    CHECK_THROWS(TorusGrid(2, 2));
    TorusGrid g(3, 16);
    CHECK(g.size() == 4096);
    CHECK(g.freq_of(8) == -8);
    CHECK(g.freq_of(7) == 7);
    CHECK(TorusGrid(2, 512).max_dyadic_level() == 8);
    const int k[] = {-3, 5, 0};
    std::vector<double> xi(3);
    g.frequency(g.index_of_frequency(k), xi);
    CHECK(xi[0] == -3.0);
    CHECK(xi[1] == 5.0);
    CHECK(xi[2] == 0.0);
}

TEST_CASE("fft examples")
{
    TorusGrid g(2, 16);
    GridFunction one(g, Side::physical, std::vector<cplx>(g.size(), 1.0));
    auto h = fft_forward(one);
    CHECK(h.side == Side::frequency);
    CHECK(std::abs(h.values[0] - 1.0) < 1e-14);
    for (std::size_t i = 1; i < h.values.size(); ++i) CHECK(std::abs(h.values[i]) < 1e-14);

    auto w = fft_forward(wave(g, {3, -2}));
    const int k[] = {3, -2};
    const auto at = g.index_of_frequency(k);
    for (std::size_t i = 0; i < w.values.size(); ++i) CHECK(std::abs(w.values[i] - (i == at ? 1.0 : 0.0)) < 1e-13);
    CHECK_THROWS(fft_forward(w));
    CHECK_THROWS(fft_inverse(one));
}

TEST_CASE("fft matches a direct transform")
{
    TorusGrid g(2, 8);
    auto f = random_band_limited(g, 4, 3, false);
    auto h = fft_forward(f);
    auto d = naive_dft(f);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(h.values[i] - d[i]) < 1e-13);
}

TEST_CASE("round trip and Plancherel")
{
    for (auto g : {TorusGrid(2, 64), TorusGrid(3, 16)}) {
        auto f = random_band_limited(g, 8, g.M / 4);
        auto h = fft_forward(f);
        CHECK(max_diff(fft_inverse(h), f) <= 1e-12);
        double s = 0.0;
        for (auto c : h.values) s += std::norm(c);
        CHECK(std::sqrt(s) == doctest::Approx(norm(f, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("sample symbol")
{
    TorusGrid g(2, 8);
    auto s = sample_symbol([](std::span<const double>) { return cplx(1.0); }, g, 1.0);
    CHECK(s.dc_value == cplx(1.0));
    for (auto v : s.values) CHECK(v == cplx(1.0));
    CHECK_THROWS_AS(sample_symbol([](std::span<const double> xi) { return cplx(1.0 / xi[0]); }, g), NumericalError);
}

TEST_CASE("apply multiplier")
{
    TorusGrid g(2, 32);
    auto f = random_band_limited(g, 2, 8);
    auto id = sample_symbol([](std::span<const double>) { return cplx(1.0); }, g, 1.0);
    CHECK(max_diff(apply_multiplier(id, f), f) <= 1e-12);
    auto zero = sample_symbol([](std::span<const double>) { return cplx(0.0); }, g, 0.0);
    CHECK(norm(apply_multiplier(zero, f), 2.0) == 0.0);

    auto a = sample_symbol([](std::span<const double> xi) { return cplx(std::cos(xi[0]), xi[1] / 40.0); }, g);
    auto b = sample_symbol([](std::span<const double> xi) { return cplx(1.0 / (1.0 + xi[0] * xi[0] + xi[1] * xi[1])); }, g);
    auto ab = apply_multiplier(a, apply_multiplier(b, f));
    auto ba = apply_multiplier(b, apply_multiplier(a, f));
    CHECK(max_diff(ab, ba) <= 1e-12);
    CHECK(max_diff(ab, apply_multiplier(multiply(a, b), f)) <= 1e-12);
}

TEST_CASE("littlewood-paley projections")
{
    TorusGrid g(2, 64);
    auto w = wave(g, {5, 8});
    auto p = lp_projection(w, 1, 3);
    const double p1 = lp_bump(1.0, BumpKind::p);
    CHECK(max_diff(p, GridFunction(g, Side::physical, [&] {
                       auto v = w.values;
                       for (auto& c : v) c *= p1;
                       return v;
                   }())) <= 1e-12);

    auto flat = wave(g, {7, 0});
    for (int t = 0; t <= g.max_dyadic_level(); ++t) CHECK(norm(lp_projection(flat, 1, t), 2.0) <= 1e-12);

    // the pieces over t = 0..max rebuild f minus its xi_j = 0 part
    auto f = random_band_limited(g, 12, 31, true);
    for (int j = 0; j < 2; ++j) {
        GridFunction sum(g, Side::physical);
        for (int t = 0; t <= g.max_dyadic_level(); ++t) {
            auto pt = lp_projection(f, j, t);
            for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += pt.values[i];
        }
        CHECK(max_diff(sum, f) <= 1e-11);
    }
    CHECK_THROWS(lp_projection(f, 2, 0));
}

TEST_CASE("norms")
{
    TorusGrid g(2, 16);
    GridFunction c(g, Side::physical, std::vector<cplx>(g.size(), cplx(0.0, -3.0)));
    for (double p : {1.0, 2.0, 3.5, double(INFINITY)}) CHECK(norm(c, p) == doctest::Approx(3.0));
    GridFunction half(g, Side::physical);
    for (std::size_t i = 0; i < half.values.size() / 2; ++i) half.values[i] = 1.0;
    CHECK(norm(half, 1.0) == doctest::Approx(0.5));
    CHECK(norm(half, 2.0) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS(norm(half, 0.5));
    auto f = random_band_limited(g, 1, 4);
    auto f2 = f;
    for (auto& v : f2.values) v *= -2.5;
    CHECK(norm(f2, 3.0) == doctest::Approx(2.5 * norm(f, 3.0)));
}

TEST_CASE("grid files round trip")
{
    TorusGrid g(3, 8);
    auto f = random_band_limited(g, 6, 3);
    const auto path = (std::filesystem::temp_directory_path() / "lacuna_test_grid.bin").string();
    write_grid_function(path, f);
    auto r = read_grid_function(path);
    CHECK(r.grid == g);
    CHECK(r.side == f.side);
    CHECK(r.values == f.values);
    std::filesystem::remove(path);
    CHECK_THROWS(read_grid_function(path));
}

TEST_CASE("random test functions are deterministic and band limited")
{
    TorusGrid g(2, 32);
    auto a = random_band_limited(g, 99, 5);
    auto b = random_band_limited(g, 99, 5);
    CHECK(a.values == b.values);
    auto h = fft_forward(a);
    std::vector<double> xi(2);
    for (std::size_t i = 0; i < h.values.size(); ++i) {
        g.frequency(i, xi);
        if (std::abs(xi[0]) > 5 || std::abs(xi[1]) > 5 || xi[0] == 0 || xi[1] == 0) CHECK(std::abs(h.values[i]) < 1e-12);
    }
}
