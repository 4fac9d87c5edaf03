#include "lacuna/spectral.hpp"

#include "lacuna/symbols.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>
#include <json.hpp>

namespace lacuna {

TorusGrid::TorusGrid(int n_, int M_) : n(n_), M(M_)
{
    if (n < 2 || n > 4) throw std::invalid_argument("grid dimension must be 2, 3 or 4");
    const int cap = n == 2 ? 1024 : (n == 3 ? 128 : 32);
    if (M < 8 || M > cap || !std::has_single_bit(static_cast<unsigned>(M)))
        throw std::invalid_argument("points per axis must be a power of two in [8, " + std::to_string(cap) +
                                    "] for n = " + std::to_string(n));
}

std::size_t TorusGrid::size() const
{
    std::size_t s = 1;
    for (int k = 0; k < n; ++k) s *= static_cast<std::size_t>(M);
    return s;
}

void TorusGrid::frequency(std::size_t flat, std::span<double> xi) const
{
    for (int k = n - 1; k >= 0; --k) {
        xi[static_cast<std::size_t>(k)] = freq_of(static_cast<int>(flat % static_cast<std::size_t>(M)));
        flat /= static_cast<std::size_t>(M);
    }
}

void TorusGrid::point(std::size_t flat, std::span<double> x) const
{
    for (int k = n - 1; k >= 0; --k) {
        x[static_cast<std::size_t>(k)] = static_cast<double>(flat % static_cast<std::size_t>(M)) / M;
        flat /= static_cast<std::size_t>(M);
    }
}

std::size_t TorusGrid::index_of_frequency(std::span<const int> k) const
{
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) {
        const int v = k[static_cast<std::size_t>(a)];
        if (v < -M / 2 || v >= M / 2) throw std::out_of_range("frequency outside the lattice");
        flat = flat * static_cast<std::size_t>(M) + static_cast<std::size_t>(v < 0 ? v + M : v);
    }
    return flat;
}

int TorusGrid::max_dyadic_level() const
{
    return std::bit_width(static_cast<unsigned>(M / 2)) - 1;
}

GridFunction::GridFunction(TorusGrid g, Side s, std::vector<cplx> v) : grid(g), side(s), values(std::move(v))
{
    if (values.size() != grid.size()) throw std::invalid_argument("grid function size does not match the grid");
}

// ---------------------------------------------------------------------------
// FFTW plans, one per (n, M, sign). The planner is not thread safe; execution
// of an existing plan on fresh arrays is.

namespace {

std::mutex plan_mutex;

fftw_plan get_plan(const TorusGrid& g, int sign)
{
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard lock(plan_mutex);
    const auto key = std::make_tuple(g.n, g.M, sign);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(g.n), g.M);
    std::vector<cplx> scratch(g.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft(g.n, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("FFTW planning failed");
    cache.emplace(key, p);
    return p;
}

void execute(const TorusGrid& g, int sign, std::vector<cplx>& data)
{
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(get_plan(g, sign), buf, buf);
}

}  // namespace

GridFunction fft_forward(const GridFunction& f)
{
    if (f.side != Side::physical) throw std::invalid_argument("fft_forward expects a physical-side function");
    if (f.values.size() != f.grid.size()) throw std::invalid_argument("size mismatch");
    GridFunction out(f.grid, Side::frequency, f.values);
    execute(f.grid, FFTW_FORWARD, out.values);
    const double scale = 1.0 / static_cast<double>(f.grid.size());
    for (auto& c : out.values) c *= scale;
    return out;
}

GridFunction fft_inverse(const GridFunction& f)
{
    if (f.side != Side::frequency) throw std::invalid_argument("fft_inverse expects a frequency-side function");
    if (f.values.size() != f.grid.size()) throw std::invalid_argument("size mismatch");
    GridFunction out(f.grid, Side::physical, f.values);
    execute(f.grid, FFTW_BACKWARD, out.values);
    return out;
}

SymbolField sample_symbol(const PointSymbol& symbol, const TorusGrid& grid, cplx dc)
{
    SymbolField s{grid, std::vector<cplx>(grid.size()), dc};
    std::vector<double> xi(static_cast<std::size_t>(grid.n));
    s.values[0] = dc;
    for (std::size_t i = 1; i < s.values.size(); ++i) {
        grid.frequency(i, xi);
        const cplx v = symbol(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::string where = "(";
            for (std::size_t k = 0; k < xi.size(); ++k) where += (k ? "," : "") + std::to_string(static_cast<int>(xi[k]));
            throw NumericalError("symbol is not finite at xi = " + where + ")");
        }
        s.values[i] = v;
    }
    return s;
}

GridFunction apply_to_spectrum(const SymbolField& symbol, const GridFunction& fhat)
{
    if (!(symbol.grid == fhat.grid)) throw std::invalid_argument("symbol and function live on different grids");
    if (fhat.side != Side::frequency) throw std::invalid_argument("expected a spectrum");
    GridFunction out(fhat.grid, Side::frequency);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = symbol.values[i] * fhat.values[i];
    return fft_inverse(out);
}

GridFunction apply_multiplier(const SymbolField& symbol, const GridFunction& f)
{
    if (!(symbol.grid == f.grid)) throw std::invalid_argument("symbol and function live on different grids");
    return apply_to_spectrum(symbol, fft_forward(f));
}

SymbolField multiply(const SymbolField& a, const SymbolField& b)
{
    if (!(a.grid == b.grid)) throw std::invalid_argument("symbols live on different grids");
    SymbolField out{a.grid, std::vector<cplx>(a.values.size()), a.dc_value * b.dc_value};
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
    return out;
}

SymbolField lp_symbol(const TorusGrid& grid, int j, int t)
{
    if (j < 0 || j >= grid.n) throw std::invalid_argument("axis out of range");
    SymbolField s{grid, std::vector<cplx>(grid.size()), 0.0};
    // p depends on one coordinate: tabulate it per axis index
    std::vector<double> table(static_cast<std::size_t>(grid.M));
    for (int i = 0; i < grid.M; ++i) table[static_cast<std::size_t>(i)] = lp_bump(std::ldexp(static_cast<double>(grid.freq_of(i)), -t), BumpKind::p);
    std::size_t stride = 1;
    for (int k = grid.n - 1; k > j; --k) stride *= static_cast<std::size_t>(grid.M);
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.values[i] = table[(i / stride) % static_cast<std::size_t>(grid.M)];
    return s;
}

GridFunction lp_projection(const GridFunction& f, int j, int t)
{
    return apply_multiplier(lp_symbol(f.grid, j, t), f);
}

double norm(std::span<const double> values, double p)
{
    if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    if (p == 2.0) {
        for (double v : values) s += v * v;
        return std::sqrt(s);
    }
    for (double v : values) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

double norm(const GridFunction& f, double p)
{
    if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
    std::vector<double> mod(f.values.size());
    for (std::size_t i = 0; i < mod.size(); ++i) mod[i] = std::abs(f.values[i]);
    const double raw = norm(mod, p);
    if (f.side == Side::frequency || std::isinf(p)) return raw;
    return raw * std::pow(static_cast<double>(f.grid.size()), -1.0 / p);
}

void write_grid_function(const std::string& path, const GridFunction& f)
{
    static_assert(std::endian::native == std::endian::little, "grid export assumes a little-endian host");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    nlohmann::json h{{"n", f.grid.n},
                     {"M", f.grid.M},
                     {"side", f.side == Side::physical ? "physical" : "frequency"},
                     {"dtype", "complex128"}};
    os << h.dump() << '\n';
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (!os) throw std::runtime_error("write failed for " + path);
}

GridFunction read_grid_function(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string header;
    std::getline(is, header);
    const auto h = nlohmann::json::parse(header);
    if (h.at("dtype") != "complex128") throw std::invalid_argument("unsupported dtype");
    const TorusGrid g(h.at("n").get<int>(), h.at("M").get<int>());
    const Side side = h.at("side") == "physical" ? Side::physical : Side::frequency;
    GridFunction f(g, side);
    is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (is.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(cplx)))
        throw std::invalid_argument("truncated grid function file");
    return f;
}

}  // namespace lacuna
