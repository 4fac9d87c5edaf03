#pragma once

// Directions in the open positive orthant, the standard-basis dyadic
// dissection into sectors and cells, lacunarity-order certification and
// membership tests for the cone C_v and the two-dimensional wedges.
//
// Axis indices are 0-based in code. Pairs are printed 1-based, "(1,2)".

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lacuna {

/// Unit vector with strictly positive coordinates.
class Direction {
public:
    /// Normalizes `raw`; throws std::invalid_argument on a nonpositive coordinate.
    static Direction from_coords(std::vector<double> raw);
    /// Accepts an already normalized vector (norm within 1e-12 of one).
    static Direction from_unit(std::vector<double> unit);

    int dim() const { return static_cast<int>(coords_.size()); }
    double operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
    std::span<const double> coords() const { return coords_; }

    bool operator==(const Direction&) const = default;

private:
    explicit Direction(std::vector<double> c) : coords_(std::move(c)) {}
    std::vector<double> coords_;
};

/// Ordered coordinate pair sigma = (first, second), first < second.
struct SigmaIndex {
    int first = 0;
    int second = 1;

    auto operator<=>(const SigmaIndex&) const = default;
    std::string label() const;  // 1-based "(j,k)"
};

/// All pairs of Sigma(n) in lexicographic order; size n(n-1)/2.
std::vector<SigmaIndex> sigma_pairs(int n);
/// Position of `sigma` in sigma_pairs(n).
int sigma_ordinal(SigmaIndex sigma, int n);

/// Lattice label of a dissection cell: one sector index per pair.
class CellIndex {
public:
    CellIndex() = default;
    CellIndex(int n, std::vector<int> ell);

    int dim() const { return n_; }
    int at(SigmaIndex sigma) const;
    int operator[](std::size_t ordinal) const { return ell_[ordinal]; }
    std::span<const int> values() const { return ell_; }
    std::string label() const;

    auto operator<=>(const CellIndex&) const = default;

private:
    int n_ = 0;
    std::vector<int> ell_;
};

class DirectionSet {
public:
    DirectionSet() = default;
    /// Throws on mixed dimensions, near-duplicates (angular distance <= 1e-10)
    /// or when a declared order is not confirmed by lacunarity_order.
    explicit DirectionSet(std::vector<Direction> dirs, std::optional<int> declared_order = std::nullopt);

    std::size_t size() const { return dirs_.size(); }
    bool empty() const { return dirs_.empty(); }
    int dim() const { return dirs_.empty() ? 0 : dirs_.front().dim(); }
    const Direction& operator[](std::size_t i) const { return dirs_[i]; }
    auto begin() const { return dirs_.begin(); }
    auto end() const { return dirs_.end(); }
    const std::vector<Direction>& directions() const { return dirs_; }
    std::optional<int> declared_order() const { return declared_order_; }

    /// First `count` directions, keeping the declared order (subsets of a
    /// lacunary set are lacunary of no larger order).
    DirectionSet prefix(std::size_t count) const;

    std::string to_json() const;  // [[x,y,...], ...]
    static DirectionSet from_json(const std::string& text);

private:
    std::vector<Direction> dirs_;
    std::optional<int> declared_order_;
};

/// Angular distance between unit vectors, stable for nearly equal inputs.
double angular_distance(const Direction& a, const Direction& b);

/// The unique l with 2^-(l+1) < x <= 2^-l for x > 0. Values within relative
/// 1e-14 of a power of two are snapped onto it.
int dyadic_level(double x);

/// Sector of v for the pair sigma: dyadic_level(v_second / v_first).
int sector_index(const Direction& v, SigmaIndex sigma);
CellIndex cell_index(const Direction& v);

std::map<int, DirectionSet> partition_by_sector(const DirectionSet& set, SigmaIndex sigma);

/// Smallest L <= max_order certified by the recursive dissection checker
/// (see geometry.cpp), or nullopt. Upper bound relative to the standard basis.
std::optional<int> lacunarity_order(const DirectionSet& set, int max_order);

/// Nested dyadic perturbation: slope 2^-i1 (1 + 2^-e_2) ... (1 + 2^-e_L) with
/// e_k = e_(k-1) + g + i_k, i_k in 1..branching, embedded as (1, r, ..., r) in R^n. i_1 varies fastest,
/// so the first branching^k directions have order at most k.
DirectionSet generate_planar_lacunary(int order, int branching, int n = 2, int separation = 4);

/// All normalized (1, 2^-a_1, ..., 2^-a_{n-1}) over the product of the lists.
DirectionSet generate_product_lacunary(int n, const std::vector<std::vector<int>>& exponent_lists);

/// `count` directions with angles equispaced strictly inside (0, pi/2),
/// embedded in the first coordinate plane for n > 2 like the planar sets.
DirectionSet generate_equispaced(int count, int n = 2);

/// |xi . v| < (1/n) max_k |xi_k v_k|
bool cone_membership(std::span<const double> xi, const Direction& v);

/// -xi_first / xi_second in [2^-(l+1)/c, 2^-l c) with c = n (narrow) or n+1
/// (widened); false when xi_second == 0.
bool wedge_membership(std::span<const double> xi, SigmaIndex sigma, int ell, bool widened);

}  // namespace lacuna
