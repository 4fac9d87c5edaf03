#pragma once

// Periodic weights on [0,1)^n and sampled directional A_2 constants.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lacuna/geometry.hpp"
#include "lacuna/spectral.hpp"

namespace lacuna {

struct Weight {
    std::string description;
    std::function<double(std::span<const double>)> eval;  // argument already reduced mod 1

    double operator()(std::span<const double> x) const { return eval(x); }
    /// w -> lambda w
    Weight scaled(double lambda) const;
};

/// Built-in catalog. Accepted forms:
///   constant[:c]                    c (default 1)
///   sinusoidal[:axis[:amp]]         2 + amp sin(2 pi x_axis), amp in [0, 2), default axis 1, amp 1
///   power:a[:axis[:shift]]          d(x_axis - shift)^a, d = distance to the nearest integer, a in (-1/2, 1)
///   tensor:a[:shift]                prod_k d(x_k - shift)^a
/// Axes are 1-based. Throws std::invalid_argument on anything else.
Weight make_weight(const std::string& spec, int n);

struct A2Report {
    double constant_estimate = 0.0;
    std::vector<double> argmax_x;
    double argmax_t = 0.0;
    std::size_t argmax_v = 0;
    std::size_t samples = 0;
};

/// max over sampled (x, t, v) of (avg_I w)(avg_I 1/w) on I = x + [-t, t] v,
/// 64-node trapezoid rule. The x samples are a seeded Kronecker sequence, so
/// a larger sample count only adds points. Throws NumericalError when w is
/// zero or not finite at a node.
A2Report a2_constant(const Weight& w, const DirectionSet& Omega, std::size_t samples, const std::vector<double>& radii,
                     std::uint64_t seed = 0);

/// (M^-n sum |f|^p w)^(1/p) over the grid points.
double weighted_norm(const GridFunction& f, const Weight& w, double p);

}  // namespace lacuna
