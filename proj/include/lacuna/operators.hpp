#pragma once

// Fourier multiplier operators on a TorusGrid and the maximal/square
// functions built from them. Every directional symbol is 0 at xi = 0.

#include <optional>
#include <string>
#include <vector>

#include "lacuna/geometry.hpp"
#include "lacuna/spectral.hpp"
#include "lacuna/symbols.hpp"

namespace lacuna {

// ---------------------------------------------------------------------------
// Symbols

SymbolField directional_symbol(const TorusGrid& grid, const Direction& v, const MultiplierProfile& m);
SymbolField nsw_symbol(const TorusGrid& grid, const Direction& v);
SymbolField wedge_symbol(const TorusGrid& grid, SigmaIndex sigma, int ell);
/// Product of wedge symbols over U, with ell read from the cell index.
SymbolField composite_wedge_symbol(const TorusGrid& grid, const std::vector<SigmaIndex>& U, const CellIndex& ell);
SymbolField eta_symbol(const TorusGrid& grid, const Direction& v, int j);
/// m(v.xi) (1 - omega_v) eta_v^j q(2^-t xi_j)
SymbolField outer_kernel_symbol(const TorusGrid& grid, const Direction& v, int j, int t, const MultiplierProfile& m);

/// 1 - s, with dc 1 - dc.
SymbolField complement(const SymbolField& s);

// ---------------------------------------------------------------------------
// Operators (physical side in, physical side out)

GridFunction directional_multiplier(const GridFunction& f, const Direction& v, const MultiplierProfile& m);
GridFunction nsw_projection(const GridFunction& f, const Direction& v);
GridFunction complement_nsw(const GridFunction& f, const Direction& v);
GridFunction wedge_projection(const GridFunction& f, SigmaIndex sigma, int ell);
GridFunction composite_wedge(const GridFunction& f, const std::vector<SigmaIndex>& U, const CellIndex& ell);
GridFunction inner_part(const GridFunction& f, const Direction& v, const MultiplierProfile& m);
GridFunction outer_part(const GridFunction& f, const Direction& v, const MultiplierProfile& m);
GridFunction eta_multiplier(const GridFunction& f, const Direction& v, int j);

enum class Piece { full, inner, outer, nsw };
Piece piece_from_string(const std::string& s);
std::string to_string(Piece p);

/// Symbol of one piece: m(v.xi), m(v.xi) omega_v, m(v.xi)(1 - omega_v) or omega_v.
SymbolField piece_symbol(const TorusGrid& grid, const Direction& v, Piece piece, const MultiplierProfile& m);

/// Pointwise sup over v in O of |piece_v f|; real, nonnegative.
GridFunction maximal_over_directions(const GridFunction& f, const DirectionSet& O, Piece piece,
                                     const MultiplierProfile& m);

/// (sum over ell in [lo, hi]^U of |K_{U,ell} f|^2)^(1/2).
GridFunction wedge_square_function(const GridFunction& f, const std::vector<SigmaIndex>& U, int lo, int hi);
/// max over xi of the number of ell in [lo, hi]^U with nonzero K_{U,ell} symbol.
int wedge_overlap_count(const TorusGrid& grid, const std::vector<SigmaIndex>& U, int lo, int hi);

/// Sup of |f| averages over centered periodic boxes with per-axis half-widths
/// 0, 1, 2, 4, ... cells (window 2h + 1, capped at the whole axis).
GridFunction strong_maximal(const GridFunction& f);

/// cell, 2 cell, ..., 1/4.
std::vector<double> default_radii(const TorusGrid& grid);
/// Sup over v and s of the trapezoid average of |f| on x + [-s, s] v, with
/// multilinear interpolation and step min(s/16, cell).
GridFunction directional_maximal(const GridFunction& f, const DirectionSet& Omega, const std::vector<double>& radii);

// ---------------------------------------------------------------------------
// Operator specifications

struct OperatorSpec {
    enum class Kind { identity, directional, nsw_cone, wedge, composite_wedge, inner, outer, eta };

    Kind kind = Kind::identity;
    std::vector<Direction> directions;
    std::string profile = "hilbert_sign";
    SigmaIndex sigma{};
    int ell = 0;
    std::vector<SigmaIndex> U;
    std::optional<CellIndex> cell;
    int j = 0;  // 0-based axis

    static OperatorSpec identity();
    static OperatorSpec directional(const Direction& v, const std::string& profile);
    static OperatorSpec outer(const Direction& v, const std::string& profile);

    /// Throws std::invalid_argument when the indices do not fit the kind.
    void validate(int n) const;
    SymbolField symbol(const TorusGrid& grid) const;
    std::string to_json() const;
    static OperatorSpec from_json(const std::string& text);
};

/// For t in 0..max level: sup over the operators of |R P_t^j f|, then root-sum-square over t.
GridFunction cww_square_function(const GridFunction& f, const std::vector<OperatorSpec>& ops, int j);
/// Same with the operator symbols already sampled.
GridFunction cww_square_function(const GridFunction& f, const std::vector<SymbolField>& symbols, int j);

/// Inverse transform of outer_kernel_symbol (no rescaling).
GridFunction outer_kernel(const Direction& v, int j, int t, const TorusGrid& grid, const MultiplierProfile& m);

/// ell_{kj}: ell_{(k,j)} for k < j, -ell_{(j,k)} for k > j, 0 on the diagonal.
int ell_kj(const CellIndex& cell, int k, int j);

/// Pointwise |.| of a physical-side function as a real GridFunction.
GridFunction modulus(const GridFunction& f);

}  // namespace lacuna
