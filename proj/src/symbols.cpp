#include "lacuna/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lacuna {

namespace {

double g_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double max_abs(std::span<const double> xi)
{
    double m = 0.0;
    for (double x : xi) m = std::max(m, std::abs(x));
    if (m == 0.0) throw std::invalid_argument("symbol evaluated at xi = 0");
    return m;
}

double omega_of(std::span<const double> w)
{
    const double n = static_cast<double>(w.size());
    double sum = 0.0;
    for (double x : w) sum += x;
    const double r = std::abs(sum) / max_abs(w);
    const double inner = 1.0 / (2.0 * n * n);
    return 1.0 - smooth_step((r - inner) / inner);
}

}  // namespace

double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = g_exp(x);
    const double b = g_exp(1.0 - x);
    return a / (a + b);
}

double nsw_omega(std::span<const double> xi)
{
    return omega_of(xi);
}

double nsw_omega_v(std::span<const double> xi, const Direction& v)
{
    if (xi.size() != static_cast<std::size_t>(v.dim())) throw std::invalid_argument("dimension mismatch");
    double w[8];
    if (xi.size() > 8) throw std::invalid_argument("dimension too large");
    for (std::size_t k = 0; k < xi.size(); ++k) w[k] = v[static_cast<int>(k)] * xi[k];
    return omega_of(std::span<const double>(w, xi.size()));
}

double kappa_profile(double s, int n)
{
    if (!(s > 0.0)) return 0.0;
    const double a = 1.0 / (2.0 * (n + 1));
    const double b = 1.0 / (2.0 * n);
    if (s < b) return smooth_step((s - a) / (b - a));
    if (s <= n) return 1.0;
    return 1.0 - smooth_step(s - n);
}

double kappa_sigma_ell(std::span<const double> xi, SigmaIndex sigma, int ell)
{
    const double den = xi[static_cast<std::size_t>(sigma.second)];
    if (den == 0.0) return 0.0;
    const double arg = std::ldexp(-xi[static_cast<std::size_t>(sigma.first)] / den, ell);
    return kappa_profile(arg, static_cast<int>(xi.size()));
}

double phi_ramp(double s)
{
    return smooth_step((std::abs(s) - 0.25) * 4.0);
}

std::vector<double> eta_family(std::span<const double> xi, const Direction& v)
{
    const std::size_t n = xi.size();
    if (n != static_cast<std::size_t>(v.dim())) throw std::invalid_argument("dimension mismatch");
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = v[static_cast<int>(k)] * xi[k];
    const double nrm = max_abs(w);
    std::vector<double> eta(n);
    double rest = 1.0;  // prod_{l<j} (1 - phi^l)
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double ph = phi_ramp(static_cast<double>(n) * w[j] / nrm);
        eta[j] = ph * rest;
        rest *= 1.0 - ph;
    }
    eta[n - 1] = rest;
    return eta;
}

double lp_bump(double s, BumpKind kind)
{
    if (s == 0.0) return 0.0;
    const double u = std::log2(std::abs(s));
    if (kind == BumpKind::p) return smooth_step(u + 1.0) - smooth_step(u);
    return smooth_step(u + 2.0) - smooth_step(u - 1.0);
}

MultiplierProfile hm_profile(const std::string& name)
{
    const auto colon = name.find(':');
    const std::string base = name.substr(0, colon);
    double scale = 1.0;
    if (colon != std::string::npos) {
        if (base != "smooth_odd") throw std::invalid_argument("profile " + base + " takes no parameter");
        try {
            std::size_t used = 0;
            scale = std::stod(name.substr(colon + 1), &used);
            if (used != name.size() - colon - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad smooth_odd scale in '" + name + "'");
        }
        if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("smooth_odd scale must be positive");
    }

    MultiplierProfile m;
    m.name = name;
    if (base == "analytic_projection") {
        m.eval = [](double s) { return s > 0.0 ? cplx(1.0) : cplx(0.0); };
        m.jump_at_zero = true;
    } else if (base == "hilbert_sign") {
        m.eval = [](double s) { return s > 0.0 ? cplx(0.0, -1.0) : (s < 0.0 ? cplx(0.0, 1.0) : cplx(0.0)); };
        m.jump_at_zero = true;
    } else if (base == "smooth_odd") {
        m.eval = [scale](double s) {
            const double x = s / scale;
            return cplx(x / std::sqrt(1.0 + x * x));
        };
    } else if (base == "riesz_like") {
        m.eval = [](double s) {
            if (s == 0.0) return cplx(0.0);
            return cplx(std::copysign(1.0 - 0.5 * std::exp(-s * s), s));
        };
        m.jump_at_zero = true;
    } else {
        throw std::invalid_argument("unknown profile '" + name + "'");
    }
    return m;
}

std::vector<double> hm_constants(const MultiplierProfile& m, int points_per_decade)
{
    std::vector<double> c(static_cast<std::size_t>(m.alpha_max) + 1, 0.0);
    const int decades = 12;
    const int total = decades * points_per_decade;
    for (int i = 0; i <= total; ++i) {
        const double mag = std::pow(10.0, -6.0 + static_cast<double>(i) / points_per_decade);
        for (double s : {mag, -mag}) {
            if (m.jump_at_zero && std::abs(s) < 1e-9) continue;
            const double h = 1e-3 * std::abs(s);
            const cplx f0 = m(s), fp = m(s + h), fm = m(s - h), fpp = m(s + 2 * h), fmm = m(s - 2 * h);
            const double as = std::abs(s);
            const double d[4] = {
                std::abs(f0),
                as * std::abs((fp - fm) / (2.0 * h)),
                as * as * std::abs((fp - 2.0 * f0 + fm) / (h * h)),
                as * as * as * std::abs((fpp - 2.0 * fp + 2.0 * fm - fmm) / (2.0 * h * h * h)),
            };
            for (int a = 0; a <= m.alpha_max && a < 4; ++a) c[static_cast<std::size_t>(a)] = std::max(c[static_cast<std::size_t>(a)], d[a]);
        }
    }
    return c;
}

}  // namespace lacuna
