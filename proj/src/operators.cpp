#include "lacuna/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace lacuna {

namespace {

double dot(std::span<const double> xi, const Direction& v)
{
    double s = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * v[static_cast<int>(k)];
    return s;
}

void check_dim(const TorusGrid& grid, const Direction& v)
{
    if (v.dim() != grid.n) throw std::invalid_argument("direction and grid dimensions differ");
}

void check_sigma(const TorusGrid& grid, SigmaIndex s)
{
    if (s.first < 0 || s.first >= s.second || s.second >= grid.n)
        throw std::invalid_argument("pair " + s.label() + " does not fit the grid dimension");
}

GridFunction real_field(const TorusGrid& grid, const std::vector<double>& v)
{
    GridFunction out(grid, Side::physical);
    for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = v[i];
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Symbols

SymbolField directional_symbol(const TorusGrid& grid, const Direction& v, const MultiplierProfile& m)
{
    check_dim(grid, v);
    return sample_symbol([&](std::span<const double> xi) { return m(dot(xi, v)); }, grid);
}

SymbolField nsw_symbol(const TorusGrid& grid, const Direction& v)
{
    check_dim(grid, v);
    return sample_symbol([&](std::span<const double> xi) { return cplx(nsw_omega_v(xi, v)); }, grid);
}

SymbolField wedge_symbol(const TorusGrid& grid, SigmaIndex sigma, int ell)
{
    check_sigma(grid, sigma);
    return sample_symbol([&](std::span<const double> xi) { return cplx(kappa_sigma_ell(xi, sigma, ell)); }, grid);
}

SymbolField composite_wedge_symbol(const TorusGrid& grid, const std::vector<SigmaIndex>& U, const CellIndex& ell)
{
    if (U.empty()) throw std::invalid_argument("composite wedge needs a nonempty set of pairs");
    if (ell.dim() != grid.n) throw std::invalid_argument("cell index and grid dimensions differ");
    for (auto s : U) check_sigma(grid, s);
    return sample_symbol(
        [&](std::span<const double> xi) {
            double p = 1.0;
            for (auto s : U) p *= kappa_sigma_ell(xi, s, ell.at(s));
            return cplx(p);
        },
        grid);
}

SymbolField eta_symbol(const TorusGrid& grid, const Direction& v, int j)
{
    check_dim(grid, v);
    if (j < 0 || j >= grid.n) throw std::invalid_argument("eta index out of range");
    return sample_symbol([&](std::span<const double> xi) { return cplx(eta_family(xi, v)[static_cast<std::size_t>(j)]); },
                         grid);
}

SymbolField outer_kernel_symbol(const TorusGrid& grid, const Direction& v, int j, int t, const MultiplierProfile& m)
{
    check_dim(grid, v);
    if (j < 0 || j >= grid.n) throw std::invalid_argument("axis out of range");
    return sample_symbol(
        [&](std::span<const double> xi) {
            const double q = lp_bump(std::ldexp(xi[static_cast<std::size_t>(j)], -t), BumpKind::q);
            if (q == 0.0) return cplx(0.0);
            const double e = eta_family(xi, v)[static_cast<std::size_t>(j)];
            if (e == 0.0) return cplx(0.0);
            return m(dot(xi, v)) * ((1.0 - nsw_omega_v(xi, v)) * e * q);
        },
        grid);
}

SymbolField complement(const SymbolField& s)
{
    SymbolField out{s.grid, std::vector<cplx>(s.values.size()), 1.0 - s.dc_value};
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = 1.0 - s.values[i];
    return out;
}

// ---------------------------------------------------------------------------
// Operators

GridFunction directional_multiplier(const GridFunction& f, const Direction& v, const MultiplierProfile& m)
{
    return apply_multiplier(directional_symbol(f.grid, v, m), f);
}

GridFunction nsw_projection(const GridFunction& f, const Direction& v)
{
    return apply_multiplier(nsw_symbol(f.grid, v), f);
}

GridFunction complement_nsw(const GridFunction& f, const Direction& v)
{
    GridFunction w = nsw_projection(f, v);
    for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = f.values[i] - w.values[i];
    return w;
}

GridFunction wedge_projection(const GridFunction& f, SigmaIndex sigma, int ell)
{
    return apply_multiplier(wedge_symbol(f.grid, sigma, ell), f);
}

GridFunction composite_wedge(const GridFunction& f, const std::vector<SigmaIndex>& U, const CellIndex& ell)
{
    return apply_multiplier(composite_wedge_symbol(f.grid, U, ell), f);
}

GridFunction inner_part(const GridFunction& f, const Direction& v, const MultiplierProfile& m)
{
    return apply_multiplier(piece_symbol(f.grid, v, Piece::inner, m), f);
}

GridFunction outer_part(const GridFunction& f, const Direction& v, const MultiplierProfile& m)
{
    GridFunction full = directional_multiplier(f, v, m);
    const GridFunction in = inner_part(f, v, m);
    for (std::size_t i = 0; i < full.values.size(); ++i) full.values[i] -= in.values[i];
    return full;
}

GridFunction eta_multiplier(const GridFunction& f, const Direction& v, int j)
{
    return apply_multiplier(eta_symbol(f.grid, v, j), f);
}

Piece piece_from_string(const std::string& s)
{
    if (s == "full") return Piece::full;
    if (s == "inner") return Piece::inner;
    if (s == "outer") return Piece::outer;
    if (s == "nsw") return Piece::nsw;
    throw std::invalid_argument("unknown piece '" + s + "'");
}

std::string to_string(Piece p)
{
    switch (p) {
    case Piece::full: return "full";
    case Piece::inner: return "inner";
    case Piece::outer: return "outer";
    case Piece::nsw: return "nsw";
    }
    return "?";
}

SymbolField piece_symbol(const TorusGrid& grid, const Direction& v, Piece piece, const MultiplierProfile& m)
{
    check_dim(grid, v);
    switch (piece) {
    case Piece::full: return directional_symbol(grid, v, m);
    case Piece::nsw: return nsw_symbol(grid, v);
    case Piece::inner:
        return sample_symbol([&](std::span<const double> xi) { return m(dot(xi, v)) * nsw_omega_v(xi, v); }, grid);
    case Piece::outer:
        return sample_symbol([&](std::span<const double> xi) { return m(dot(xi, v)) * (1.0 - nsw_omega_v(xi, v)); },
                             grid);
    }
    throw std::logic_error("unreachable");
}

GridFunction maximal_over_directions(const GridFunction& f, const DirectionSet& O, Piece piece,
                                     const MultiplierProfile& m)
{
    if (O.empty()) throw std::invalid_argument("maximal operator needs a nonempty direction set");
    const GridFunction fhat = fft_forward(f);
    std::vector<double> best(f.grid.size(), 0.0);
    for (const auto& v : O) {
        const GridFunction g = apply_to_spectrum(piece_symbol(f.grid, v, piece, m), fhat);
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], std::abs(g.values[i]));
    }
    return real_field(f.grid, best);
}

GridFunction wedge_square_function(const GridFunction& f, const std::vector<SigmaIndex>& U, int lo, int hi)
{
    if (U.empty()) throw std::invalid_argument("wedge square function needs a nonempty set of pairs");
    if (lo > hi) throw std::invalid_argument("empty ell range");
    const GridFunction fhat = fft_forward(f);
    const int n = f.grid.n;
    std::vector<double> acc(f.grid.size(), 0.0);
    std::vector<int> idx(U.size(), lo);
    while (true) {
        std::vector<int> cell(static_cast<std::size_t>(n * (n - 1) / 2), 0);
        for (std::size_t u = 0; u < U.size(); ++u) cell[static_cast<std::size_t>(sigma_ordinal(U[u], n))] = idx[u];
        const GridFunction g = apply_to_spectrum(composite_wedge_symbol(f.grid, U, CellIndex(n, cell)), fhat);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(g.values[i]);
        std::size_t pos = 0;
        while (pos < idx.size() && idx[pos] == hi) idx[pos++] = lo;
        if (pos == idx.size()) break;
        ++idx[pos];
    }
    for (auto& a : acc) a = std::sqrt(a);
    return real_field(f.grid, acc);
}

int wedge_overlap_count(const TorusGrid& grid, const std::vector<SigmaIndex>& U, int lo, int hi)
{
    if (U.empty() || lo > hi) throw std::invalid_argument("bad wedge range");
    std::vector<double> xi(static_cast<std::size_t>(grid.n));
    int best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        grid.frequency(i, xi);
        // the product is nonzero iff every factor is; count per pair and multiply
        int count = 1;
        for (auto s : U) {
            int c = 0;
            for (int ell = lo; ell <= hi; ++ell)
                if (kappa_sigma_ell(xi, s, ell) > 0.0) ++c;
            count *= c;
        }
        best = std::max(best, count);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Strong maximal function

namespace {

/// Centered periodic window average of length 2h + 1 (or the whole axis) along one axis.
std::vector<double> window_average(const std::vector<double>& in, const TorusGrid& g, int axis, int h)
{
    const std::size_t M = static_cast<std::size_t>(g.M);
    std::size_t stride = 1;
    for (int k = g.n - 1; k > axis; --k) stride *= M;
    const std::size_t block = stride * M;
    const bool full = 2 * h + 1 >= g.M;
    const double inv = 1.0 / static_cast<double>(full ? g.M : 2 * h + 1);
    std::vector<double> out(in.size());
    std::vector<double> prefix(3 * M + 1);
    for (std::size_t base = 0; base < in.size(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t start = base + off;
            if (full) {
                double s = 0.0;
                for (std::size_t i = 0; i < M; ++i) s += in[start + i * stride];
                for (std::size_t i = 0; i < M; ++i) out[start + i * stride] = s * inv;
                continue;
            }
            // prefix over three periods so the window never wraps
            prefix[0] = 0.0;
            for (std::size_t i = 0; i < 3 * M; ++i) prefix[i + 1] = prefix[i] + in[start + (i % M) * stride];
            const std::size_t hh = static_cast<std::size_t>(h);
            for (std::size_t i = 0; i < M; ++i) {
                const std::size_t c = i + M;
                out[start + i * stride] = (prefix[c + hh + 1] - prefix[c - hh]) * inv;
            }
        }
    }
    return out;
}

std::vector<int> half_widths(int M)
{
    std::vector<int> hs{0};
    for (int h = 1; 2 * h + 1 < M; h *= 2) hs.push_back(h);
    hs.push_back(M);  // whole axis
    return hs;
}

void strong_recurse(const std::vector<double>& cur, const TorusGrid& g, int axis, std::vector<double>& best)
{
    for (int h : half_widths(g.M)) {
        const auto avg = window_average(cur, g, axis, h);
        if (axis + 1 == g.n) {
            for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], avg[i]);
        } else {
            strong_recurse(avg, g, axis + 1, best);
        }
    }
}

}  // namespace

GridFunction strong_maximal(const GridFunction& f)
{
    if (f.side != Side::physical) throw std::invalid_argument("strong maximal function needs a physical-side input");
    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
    std::vector<double> best(a.size(), 0.0);
    strong_recurse(a, f.grid, 0, best);
    return real_field(f.grid, best);
}

// ---------------------------------------------------------------------------
// Directional maximal function

namespace {

/// dst += weight * src(x + shift), periodic, shift in whole cells per axis.
void add_shifted(std::vector<double>& dst, const std::vector<double>& src, const TorusGrid& g,
                 const std::vector<long>& shift, double weight)
{
    const long M = g.M;
    const std::size_t Mu = static_cast<std::size_t>(M);
    const int n = g.n;
    std::vector<std::size_t> strides(static_cast<std::size_t>(n));
    std::size_t s = 1;
    for (int k = n - 1; k >= 0; --k) {
        strides[static_cast<std::size_t>(k)] = s;
        s *= Mu;
    }
    auto wrap = [M](long i) { return static_cast<std::size_t>(((i % M) + M) % M); };
    const std::size_t last_shift = wrap(shift[static_cast<std::size_t>(n - 1)]);
    std::vector<std::size_t> row(static_cast<std::size_t>(n - 1), 0);
    const std::size_t rows = dst.size() / Mu;
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t src_base = 0;
        for (int k = 0; k < n - 1; ++k)
            src_base += wrap(static_cast<long>(row[static_cast<std::size_t>(k)]) + shift[static_cast<std::size_t>(k)]) *
                        strides[static_cast<std::size_t>(k)];
        double* d = dst.data() + r * Mu;
        const double* sp = src.data() + src_base;
        const std::size_t first = Mu - last_shift;
        for (std::size_t i = 0; i < first; ++i) d[i] += weight * sp[i + last_shift];
        for (std::size_t i = first; i < Mu; ++i) d[i] += weight * sp[i - first];
        for (int k = n - 2; k >= 0; --k) {
            if (++row[static_cast<std::size_t>(k)] < Mu) break;
            row[static_cast<std::size_t>(k)] = 0;
        }
    }
}

/// Multilinear interpolation of src at x + d (d in cells, same for every x).
std::vector<double> sample_displaced(const std::vector<double>& src, const TorusGrid& g, const std::vector<double>& d)
{
    const int n = g.n;
    std::vector<long> base(static_cast<std::size_t>(n));
    std::vector<double> frac(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double fl = std::floor(d[static_cast<std::size_t>(k)]);
        base[static_cast<std::size_t>(k)] = static_cast<long>(fl);
        frac[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(k)] - fl;
    }
    std::vector<double> out(src.size(), 0.0);
    std::vector<long> shift(static_cast<std::size_t>(n));
    for (int corner = 0; corner < (1 << n); ++corner) {
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            const bool up = (corner >> k) & 1;
            const double fk = frac[static_cast<std::size_t>(k)];
            w *= up ? fk : 1.0 - fk;
            shift[static_cast<std::size_t>(k)] = base[static_cast<std::size_t>(k)] + (up ? 1 : 0);
        }
        if (w != 0.0) add_shifted(out, src, g, shift, w);
    }
    return out;
}

}  // namespace

std::vector<double> default_radii(const TorusGrid& grid)
{
    std::vector<double> r;
    for (double s = 1.0 / grid.M; s <= 0.25; s *= 2.0) r.push_back(s);
    return r;
}

GridFunction directional_maximal(const GridFunction& f, const DirectionSet& Omega, const std::vector<double>& radii)
{
    if (radii.empty()) throw std::invalid_argument("directional maximal function needs at least one radius");
    if (Omega.empty()) throw std::invalid_argument("directional maximal function needs a nonempty direction set");
    if (f.side != Side::physical) throw std::invalid_argument("directional maximal function needs a physical-side input");
    const TorusGrid& g = f.grid;
    if (Omega.dim() != g.n) throw std::invalid_argument("direction and grid dimensions differ");
    const double cell = 1.0 / g.M;
    for (double s : radii) {
        if (!(s > 0.0 && s < 0.5)) throw std::invalid_argument("radii must lie in (0, 1/2)");
    }

    // group radii by quadrature step; radii sharing a step share nodes
    std::map<double, std::vector<long>> groups;  // step -> node counts K with s = K step
    for (double s : radii) {
        const double step = std::min(s / 16.0, cell);
        groups[step].push_back(std::lround(s / step));
    }
    for (auto& [step, ks] : groups) {
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    }

    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
    std::vector<double> best(a.size(), 0.0);
    std::vector<double> d(static_cast<std::size_t>(g.n));

    for (const auto& v : Omega) {
        for (const auto& [step, ks] : groups) {
            std::vector<double> interior = a;  // sum over |k| <= K - 1
            std::size_t next = 0;
            for (long k = 1; k <= ks.back(); ++k) {
                for (int c = 0; c < g.n; ++c) d[static_cast<std::size_t>(c)] = static_cast<double>(k) * step * v[c] * g.M;
                std::vector<double> ends = sample_displaced(a, g, d);
                for (auto& x : d) x = -x;
                const std::vector<double> back = sample_displaced(a, g, d);
                for (std::size_t i = 0; i < ends.size(); ++i) ends[i] += back[i];
                if (k == ks[next]) {
                    const double inv = 1.0 / (2.0 * static_cast<double>(k));
                    for (std::size_t i = 0; i < best.size(); ++i)
                        best[i] = std::max(best[i], (interior[i] + 0.5 * ends[i]) * inv);
                    ++next;
                }
                for (std::size_t i = 0; i < interior.size(); ++i) interior[i] += ends[i];
            }
        }
    }
    return real_field(g, best);
}

// ---------------------------------------------------------------------------
// Operator specs

OperatorSpec OperatorSpec::identity()
{
    return {};
}

OperatorSpec OperatorSpec::directional(const Direction& v, const std::string& profile)
{
    OperatorSpec s;
    s.kind = Kind::directional;
    s.directions = {v};
    s.profile = profile;
    return s;
}

OperatorSpec OperatorSpec::outer(const Direction& v, const std::string& profile)
{
    OperatorSpec s = directional(v, profile);
    s.kind = Kind::outer;
    return s;
}

namespace {

const std::vector<std::pair<OperatorSpec::Kind, std::string>> kind_names = {
    {OperatorSpec::Kind::identity, "identity"},   {OperatorSpec::Kind::directional, "directional"},
    {OperatorSpec::Kind::nsw_cone, "nsw_cone"},   {OperatorSpec::Kind::wedge, "wedge"},
    {OperatorSpec::Kind::composite_wedge, "composite_wedge"},
    {OperatorSpec::Kind::inner, "inner"},         {OperatorSpec::Kind::outer, "outer"},
    {OperatorSpec::Kind::eta, "eta"},
};

bool needs_direction(OperatorSpec::Kind k)
{
    using K = OperatorSpec::Kind;
    return k == K::directional || k == K::nsw_cone || k == K::inner || k == K::outer || k == K::eta;
}

nlohmann::json pair_json(SigmaIndex s) { return nlohmann::json::array({s.first + 1, s.second + 1}); }

SigmaIndex pair_from_json(const nlohmann::json& j)
{
    const auto v = j.get<std::vector<int>>();
    if (v.size() != 2) throw std::invalid_argument("a pair needs two entries");
    return {v[0] - 1, v[1] - 1};
}

}  // namespace

void OperatorSpec::validate(int n) const
{
    if (needs_direction(kind)) {
        if (directions.size() != 1) throw std::invalid_argument("operator needs exactly one direction");
        if (directions.front().dim() != n) throw std::invalid_argument("direction dimension differs from the grid");
    }
    if (kind == Kind::directional || kind == Kind::inner || kind == Kind::outer) hm_profile(profile);
    if (kind == Kind::wedge && (sigma.first < 0 || sigma.first >= sigma.second || sigma.second >= n))
        throw std::invalid_argument("wedge pair out of range");
    if (kind == Kind::composite_wedge) {
        if (U.empty()) throw std::invalid_argument("composite wedge needs a nonempty set of pairs");
        if (!cell || cell->dim() != n) throw std::invalid_argument("composite wedge needs a cell index");
        for (auto s : U)
            if (s.first < 0 || s.first >= s.second || s.second >= n) throw std::invalid_argument("pair out of range");
    }
    if (kind == Kind::eta && (j < 0 || j >= n)) throw std::invalid_argument("eta index out of range");
}

SymbolField OperatorSpec::symbol(const TorusGrid& grid) const
{
    validate(grid.n);
    switch (kind) {
    case Kind::identity: return sample_symbol([](std::span<const double>) { return cplx(1.0); }, grid, 1.0);
    case Kind::directional: return directional_symbol(grid, directions.front(), hm_profile(profile));
    case Kind::nsw_cone: return nsw_symbol(grid, directions.front());
    case Kind::wedge: return wedge_symbol(grid, sigma, ell);
    case Kind::composite_wedge: return composite_wedge_symbol(grid, U, *cell);
    case Kind::inner: return piece_symbol(grid, directions.front(), Piece::inner, hm_profile(profile));
    case Kind::outer: return piece_symbol(grid, directions.front(), Piece::outer, hm_profile(profile));
    case Kind::eta: return eta_symbol(grid, directions.front(), j);
    }
    throw std::logic_error("unreachable");
}

std::string OperatorSpec::to_json() const
{
    nlohmann::json out;
    for (const auto& [k, name] : kind_names)
        if (k == kind) out["kind"] = name;
    if (needs_direction(kind)) {
        const auto c = directions.front().coords();
        out["direction"] = std::vector<double>(c.begin(), c.end());
    }
    if (kind == Kind::directional || kind == Kind::inner || kind == Kind::outer) out["profile"] = profile;
    if (kind == Kind::wedge) {
        out["sigma"] = pair_json(sigma);
        out["ell"] = ell;
    }
    if (kind == Kind::composite_wedge) {
        nlohmann::json u = nlohmann::json::array();
        for (auto s : U) u.push_back(pair_json(s));
        out["U"] = u;
        out["n"] = cell->dim();
        out["cell"] = std::vector<int>(cell->values().begin(), cell->values().end());
    }
    if (kind == Kind::eta) out["j"] = j + 1;
    return out.dump();
}

OperatorSpec OperatorSpec::from_json(const std::string& text)
{
    const auto in = nlohmann::json::parse(text);
    OperatorSpec s;
    const std::string name = in.at("kind").get<std::string>();
    bool found = false;
    for (const auto& [k, kn] : kind_names)
        if (kn == name) {
            s.kind = k;
            found = true;
        }
    if (!found) throw std::invalid_argument("unknown operator kind '" + name + "'");
    if (in.contains("direction")) s.directions = {Direction::from_coords(in.at("direction").get<std::vector<double>>())};
    if (in.contains("profile")) s.profile = in.at("profile").get<std::string>();
    if (in.contains("sigma")) s.sigma = pair_from_json(in.at("sigma"));
    if (in.contains("ell")) s.ell = in.at("ell").get<int>();
    if (in.contains("U"))
        for (const auto& p : in.at("U")) s.U.push_back(pair_from_json(p));
    if (in.contains("cell")) s.cell = CellIndex(in.at("n").get<int>(), in.at("cell").get<std::vector<int>>());
    if (in.contains("j")) s.j = in.at("j").get<int>() - 1;
    return s;
}

GridFunction cww_square_function(const GridFunction& f, const std::vector<OperatorSpec>& ops, int j)
{
    if (ops.empty()) throw std::invalid_argument("square function needs at least one operator");
    std::vector<SymbolField> symbols;
    for (const auto& op : ops) symbols.push_back(op.symbol(f.grid));
    return cww_square_function(f, symbols, j);
}

GridFunction cww_square_function(const GridFunction& f, const std::vector<SymbolField>& symbols, int j)
{
    if (symbols.empty()) throw std::invalid_argument("square function needs at least one operator");
    const TorusGrid& g = f.grid;
    const GridFunction fhat = fft_forward(f);
    std::vector<double> acc(g.size(), 0.0), sup(g.size());
    for (int t = 0; t <= g.max_dyadic_level(); ++t) {
        const SymbolField p = lp_symbol(g, j, t);
        std::fill(sup.begin(), sup.end(), 0.0);
        for (const auto& s : symbols) {
            const GridFunction r = apply_to_spectrum(multiply(s, p), fhat);
            for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(r.values[i]));
        }
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sup[i] * sup[i];
    }
    for (auto& a : acc) a = std::sqrt(a);
    return real_field(g, acc);
}

GridFunction outer_kernel(const Direction& v, int j, int t, const TorusGrid& grid, const MultiplierProfile& m)
{
    const SymbolField s = outer_kernel_symbol(grid, v, j, t, m);
    return fft_inverse(GridFunction(grid, Side::frequency, s.values));
}

int ell_kj(const CellIndex& cell, int k, int j)
{
    if (k == j) return 0;
    if (k < j) return cell.at({k, j});
    return -cell.at({j, k});
}

GridFunction modulus(const GridFunction& f)
{
    GridFunction out(f.grid, f.side);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::abs(f.values[i]);
    return out;
}

}  // namespace lacuna
