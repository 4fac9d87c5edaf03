#include "lacuna/weights.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lacuna {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad " + what + " '" + s + "' in weight spec");
    }
}

int parse_axis(const std::string& s, int n)
{
    const double a = parse_number(s, "axis");
    if (a != std::floor(a) || a < 1 || a > n) throw std::invalid_argument("weight axis out of range");
    return static_cast<int>(a) - 1;
}

double dist_to_integer(double x)
{
    const double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

}  // namespace

Weight Weight::scaled(double lambda) const
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("scale must be positive");
    std::ostringstream os;
    os << description << "*" << lambda;
    auto inner = eval;
    return {os.str(), [inner, lambda](std::span<const double> x) { return lambda * inner(x); }};
}

Weight make_weight(const std::string& spec, int n)
{
    const auto parts = split(spec, ':');
    if (parts.empty()) throw std::invalid_argument("empty weight spec");
    const std::string& name = parts[0];
    if (name == "constant") {
        if (parts.size() > 2) throw std::invalid_argument("constant takes one parameter");
        const double c = parts.size() == 2 ? parse_number(parts[1], "constant") : 1.0;
        if (!(c > 0.0)) throw std::invalid_argument("constant weight must be positive");
        return {spec, [c](std::span<const double>) { return c; }};
    }
    if (name == "sinusoidal") {
        if (parts.size() > 3) throw std::invalid_argument("sinusoidal takes at most two parameters");
        const int axis = parts.size() >= 2 ? parse_axis(parts[1], n) : 0;
        const double amp = parts.size() == 3 ? parse_number(parts[2], "amplitude") : 1.0;
        if (amp < 0.0 || amp >= 2.0) throw std::invalid_argument("sinusoidal amplitude must lie in [0, 2)");
        return {spec, [axis, amp](std::span<const double> x) {
                    return 2.0 + amp * std::sin(2.0 * std::numbers::pi * x[static_cast<std::size_t>(axis)]);
                }};
    }
    if (name == "power" || name == "tensor") {
        if (parts.size() < 2) throw std::invalid_argument(name + " needs an exponent");
        const double a = parse_number(parts[1], "exponent");
        if (!(a > -0.5 && a < 1.0)) throw std::invalid_argument("power exponent must lie in (-1/2, 1)");
        if (name == "power") {
            if (parts.size() > 4) throw std::invalid_argument("power takes at most three parameters");
            const int axis = parts.size() >= 3 ? parse_axis(parts[2], n) : 0;
            const double shift = parts.size() == 4 ? parse_number(parts[3], "shift") : 0.0;
            return {spec, [a, axis, shift](std::span<const double> x) {
                        return std::pow(dist_to_integer(x[static_cast<std::size_t>(axis)] - shift), a);
                    }};
        }
        if (parts.size() > 3) throw std::invalid_argument("tensor takes at most two parameters");
        const double shift = parts.size() == 3 ? parse_number(parts[2], "shift") : 0.0;
        return {spec, [a, shift](std::span<const double> x) {
                    double p = 1.0;
                    for (double c : x) p *= std::pow(dist_to_integer(c - shift), a);
                    return p;
                }};
    }
    throw std::invalid_argument("unknown weight '" + name + "'");
}

A2Report a2_constant(const Weight& w, const DirectionSet& Omega, std::size_t samples, const std::vector<double>& radii,
                     std::uint64_t seed)
{
    if (samples < 1) throw std::invalid_argument("a2_constant needs at least one sample");
    if (Omega.empty()) throw std::invalid_argument("a2_constant needs a nonempty direction set");
    if (radii.empty()) throw std::invalid_argument("a2_constant needs at least one radius");
    const int n = Omega.dim();
    const std::size_t nn = static_cast<std::size_t>(n);

    // Kronecker sequence with the generalized golden ratio of dimension n
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (n + 1));
    std::vector<double> alpha(nn), start(nn);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t k = 0; k < nn; ++k) {
        alpha[k] = std::pow(1.0 / phi, static_cast<double>(k + 1));
        start[k] = uni(rng);
    }

    constexpr int nodes = 64;
    A2Report rep;
    rep.samples = samples;
    std::vector<double> x(nn), y(nn);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t k = 0; k < nn; ++k) {
            const double v = start[k] + static_cast<double>(s) * alpha[k];
            x[k] = v - std::floor(v);
        }
        for (std::size_t vi = 0; vi < Omega.size(); ++vi) {
            const Direction& v = Omega[vi];
            for (double t : radii) {
                // values relative to the first node: constant weights then give exactly 1
                double sw = 0.0, si = 0.0, sc = 0.0, w0 = 0.0;
                for (int i = 0; i < nodes; ++i) {
                    const double tau = -t + 2.0 * t * i / (nodes - 1);
                    const double c = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
                    for (std::size_t k = 0; k < nn; ++k) {
                        const double p = x[k] + tau * v[static_cast<int>(k)];
                        y[k] = p - std::floor(p);
                    }
                    const double wv = w(y);
                    if (!(wv > 0.0) || !std::isfinite(wv))
                        throw NumericalError("weight '" + w.description + "' is zero or not finite on a quadrature node");
                    if (i == 0) w0 = wv;
                    sw += c * (wv / w0);
                    si += c * (w0 / wv);
                    sc += c;
                }
                const double prod = (sw / sc) * (si / sc);
                if (prod > rep.constant_estimate) {
                    rep.constant_estimate = prod;
                    rep.argmax_x = x;
                    rep.argmax_t = t;
                    rep.argmax_v = vi;
                }
            }
        }
    }
    return rep;
}

double weighted_norm(const GridFunction& f, const Weight& w, double p)
{
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("weighted norm exponent must be finite and >= 1");
    if (f.side != Side::physical) throw std::invalid_argument("weighted norm needs a physical-side function");
    std::vector<double> x(static_cast<std::size_t>(f.grid.n));
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.grid.point(i, x);
        const double wv = w(x);
        if (!std::isfinite(wv) || wv < 0.0) throw NumericalError("weight is negative or not finite on the grid");
        s += std::pow(std::abs(f.values[i]), p) * wv;
    }
    return std::pow(s / static_cast<double>(f.grid.size()), 1.0 / p);
}

}  // namespace lacuna
