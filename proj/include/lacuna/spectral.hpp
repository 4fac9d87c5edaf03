#pragma once

// Periodic grids on [0,1)^n and FFTW-backed transforms.
//
// Frequency-side arrays use FFTW order: along each axis index i holds the
// integer frequency i for i < M/2 and i - M otherwise. Layout is row-major,
// axis 0 slowest. The forward transform divides by M^n so that frequency
// values are Fourier coefficients; the inverse does not rescale.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lacuna {

using cplx = std::complex<double>;

/// Raised for non-finite values produced during a computation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TorusGrid {
    int n = 2;
    int M = 64;

    TorusGrid() = default;
    /// Throws unless M is a power of two with 8 <= M <= 1024 / 128 / 32 for n = 2 / 3 / 4.
    TorusGrid(int n_, int M_);

    std::size_t size() const;
    /// Integer frequency of FFTW index i along one axis.
    int freq_of(int i) const { return i < M / 2 ? i : i - M; }
    /// Frequency vector of a flat frequency-side index.
    void frequency(std::size_t flat, std::span<double> xi) const;
    /// Physical point i / M of a flat index.
    void point(std::size_t flat, std::span<double> x) const;
    /// Flat index of the integer frequency k (entries in [-M/2, M/2)).
    std::size_t index_of_frequency(std::span<const int> k) const;
    /// Largest t with 2^t <= M/2.
    int max_dyadic_level() const;

    bool operator==(const TorusGrid&) const = default;
};

enum class Side { physical, frequency };

struct GridFunction {
    TorusGrid grid;
    Side side = Side::physical;
    std::vector<cplx> values;

    GridFunction() = default;
    GridFunction(TorusGrid g, Side s) : grid(g), side(s), values(g.size()) {}
    GridFunction(TorusGrid g, Side s, std::vector<cplx> v);
};

struct SymbolField {
    TorusGrid grid;
    std::vector<cplx> values;  // FFTW order; entry 0 equals dc_value
    cplx dc_value{0.0};
};

using PointSymbol = std::function<cplx(std::span<const double>)>;

GridFunction fft_forward(const GridFunction& f);
GridFunction fft_inverse(const GridFunction& f);

/// Samples `symbol` at every nonzero lattice frequency; the zero frequency
/// gets `dc` (default 0) and the symbol is never evaluated there.
/// Throws NumericalError naming the first frequency with a non-finite value.
SymbolField sample_symbol(const PointSymbol& symbol, const TorusGrid& grid, cplx dc = 0.0);

/// Physical-side result of multiplying the spectrum of f by the symbol.
GridFunction apply_multiplier(const SymbolField& symbol, const GridFunction& f);
/// Same with the spectrum already at hand.
GridFunction apply_to_spectrum(const SymbolField& symbol, const GridFunction& fhat);

/// Pointwise product of symbols.
SymbolField multiply(const SymbolField& a, const SymbolField& b);

/// Symbol p(2^-t xi_j) for the axis j (0-based).
SymbolField lp_symbol(const TorusGrid& grid, int j, int t);
GridFunction lp_projection(const GridFunction& f, int j, int t);

/// Physical side: (M^-n sum |f|^p)^(1/p). Frequency side: (sum |f|^p)^(1/p).
/// p = infinity gives the max. Sums run in index order.
double norm(const GridFunction& f, double p);
double norm(std::span<const double> values, double p);

/// Raw little-endian complex128 values after a one-line JSON header.
void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path);

}  // namespace lacuna
