#pragma once

// Pointwise frequency symbols. Every bump is built from one C^infinity step.

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lacuna/geometry.hpp"

namespace lacuna {

using cplx = std::complex<double>;

/// s(x) = g(x) / (g(x) + g(1-x)), g(t) = exp(-1/t) for t > 0, else 0.
double smooth_step(double x);

/// Cone cutoff: 1 where |sum xi| < ||xi||_inf / (2n^2), 0 where it is >= ||xi||_inf / n^2.
double nsw_omega(std::span<const double> xi);
/// nsw_omega of (v_1 xi_1, ..., v_n xi_n).
double nsw_omega_v(std::span<const double> xi, const Direction& v);

/// 0 off (1/(2(n+1)), n+1), 1 on [1/(2n), n], smooth ramps between.
double kappa_profile(double s, int n);
/// kappa(-xi_first / (2^-ell xi_second)); 0 when xi_second == 0.
double kappa_sigma_ell(std::span<const double> xi, SigmaIndex sigma, int ell);

/// Even ramp: 0 on [-1/4, 1/4], 1 off (-1/2, 1/2).
double phi_ramp(double s);
/// eta^1..eta^n, telescoping to 1.
std::vector<double> eta_family(std::span<const double> xi, const Direction& v);

enum class BumpKind { p, q };
double lp_bump(double s, BumpKind kind);

struct MultiplierProfile {
    std::string name;
    std::function<cplx(double)> eval;
    int alpha_max = 3;
    bool jump_at_zero = false;

    cplx operator()(double s) const { return eval(s); }
};

/// analytic_projection, hilbert_sign, smooth_odd[:scale], riesz_like.
MultiplierProfile hm_profile(const std::string& name);

/// sup over a geometric grid s in +-[1e-6, 1e6] of |s|^a |d^a m(s)|, a = 0..alpha_max,
/// by central differences with step 1e-3 |s|.
std::vector<double> hm_constants(const MultiplierProfile& m, int points_per_decade = 20);

}  // namespace lacuna
