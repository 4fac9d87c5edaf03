#include "lacuna/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lacuna {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kDuplicateAngle = 1e-10;
constexpr double kSnapTolerance = 1e-14;
constexpr double kSameSlopeTolerance = 1e-12;

double euclidean_norm(std::span<const double> x)
{
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Direction

Direction Direction::from_coords(std::vector<double> raw)
{
    if (raw.size() < 2) throw std::invalid_argument("direction needs at least two coordinates");
    for (double c : raw) {
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("direction coordinates must be finite and strictly positive");
    }
    const double nrm = euclidean_norm(raw);
    for (double& c : raw) c /= nrm;
    return Direction(std::move(raw));
}

Direction Direction::from_unit(std::vector<double> unit)
{
    if (unit.size() < 2) throw std::invalid_argument("direction needs at least two coordinates");
    for (double c : unit) {
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("direction coordinates must be finite and strictly positive");
    }
    if (std::abs(euclidean_norm(unit) - 1.0) > kUnitTolerance)
        throw std::invalid_argument("direction is not a unit vector");
    return Direction(std::move(unit));
}

double angular_distance(const Direction& a, const Direction& b)
{
    double chord2 = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        chord2 += d * d;
    }
    return 2.0 * std::asin(std::min(1.0, std::sqrt(chord2) / 2.0));
}

// ---------------------------------------------------------------------------
// Pairs and cells

std::string SigmaIndex::label() const
{
    return "(" + std::to_string(first + 1) + "," + std::to_string(second + 1) + ")";
}

std::vector<SigmaIndex> sigma_pairs(int n)
{
    std::vector<SigmaIndex> out;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) out.push_back({j, k});
    return out;
}

int sigma_ordinal(SigmaIndex sigma, int n)
{
    if (sigma.first < 0 || sigma.first >= sigma.second || sigma.second >= n)
        throw std::invalid_argument("invalid pair " + sigma.label());
    // pairs (j, *) for j < first come before
    const int j = sigma.first;
    return j * (2 * n - j - 1) / 2 + (sigma.second - j - 1);
}

CellIndex::CellIndex(int n, std::vector<int> ell) : n_(n), ell_(std::move(ell))
{
    if (ell_.size() != static_cast<std::size_t>(n * (n - 1) / 2))
        throw std::invalid_argument("cell index must carry one entry per pair");
}

int CellIndex::at(SigmaIndex sigma) const
{
    return ell_[static_cast<std::size_t>(sigma_ordinal(sigma, n_))];
}

std::string CellIndex::label() const
{
    std::ostringstream os;
    os << "{";
    const auto pairs = sigma_pairs(n_);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) os << " ";
        os << pairs[i].label() << ":" << ell_[i];
    }
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// DirectionSet

DirectionSet::DirectionSet(std::vector<Direction> dirs, std::optional<int> declared_order)
    : dirs_(std::move(dirs)), declared_order_(declared_order)
{
    for (const auto& d : dirs_) {
        if (d.dim() != dirs_.front().dim())
            throw std::invalid_argument("direction set mixes dimensions");
    }
    for (std::size_t i = 0; i < dirs_.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs_.size(); ++j) {
            if (angular_distance(dirs_[i], dirs_[j]) <= kDuplicateAngle)
                throw std::invalid_argument("direction set contains duplicate directions (indices " +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    if (declared_order_) {
        if (*declared_order_ < 0) throw std::invalid_argument("declared lacunarity order must be >= 0");
        if (!dirs_.empty()) {
            const auto found = lacunarity_order(*this, *declared_order_);
            if (!found)
                throw std::invalid_argument("declared lacunarity order " + std::to_string(*declared_order_) +
                                            " is not confirmed");
        }
    }
}

DirectionSet DirectionSet::prefix(std::size_t count) const
{
    DirectionSet out;
    out.dirs_.assign(dirs_.begin(), dirs_.begin() + static_cast<std::ptrdiff_t>(std::min(count, dirs_.size())));
    out.declared_order_ = declared_order_;
    return out;
}

std::string DirectionSet::to_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : dirs_) arr.push_back(std::vector<double>(d.coords().begin(), d.coords().end()));
    return arr.dump();
}

DirectionSet DirectionSet::from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array()) throw std::invalid_argument("direction set JSON must be an array of coordinate arrays");
    std::vector<Direction> dirs;
    for (const auto& row : j) dirs.push_back(Direction::from_coords(row.get<std::vector<double>>()));
    return DirectionSet(std::move(dirs));
}

// ---------------------------------------------------------------------------
// Sectors

int dyadic_level(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("dyadic_level needs a positive finite value");
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m 2^e, m in [1/2, 1)
    if (m - 0.5 <= 0.5 * kSnapTolerance) return 1 - e;  // x ~ 2^(e-1)
    return -e;                                            // x in (2^(e-1), 2^e], snapped or not
}

int sector_index(const Direction& v, SigmaIndex sigma)
{
    return dyadic_level(v[sigma.second] / v[sigma.first]);
}

CellIndex cell_index(const Direction& v)
{
    const int n = v.dim();
    std::vector<int> ell;
    for (const auto& s : sigma_pairs(n)) ell.push_back(sector_index(v, s));
    return CellIndex(n, std::move(ell));
}

std::map<int, DirectionSet> partition_by_sector(const DirectionSet& set, SigmaIndex sigma)
{
    if (set.empty()) throw std::invalid_argument("partition_by_sector needs a nonempty set");
    std::map<int, std::vector<Direction>> groups;
    for (const auto& d : set) groups[sector_index(d, sigma)].push_back(d);
    std::map<int, DirectionSet> out;
    for (auto& [ell, dirs] : groups) out.emplace(ell, DirectionSet(std::move(dirs)));
    return out;
}

// ---------------------------------------------------------------------------
// Lacunarity checker
//
// The first dissection along every pair is the standard dyadic one. A sector
// that still holds several slopes is re-dissected inside that sector: either
// dyadically again, or in dyadic shells of the relative offset |r - a| / a
// around an endpoint a of the sector it lives in (both sides folded together,
// as absolute values fold them in a rotated frame). Pairs along which all
// slopes coincide project to a single point and impose nothing.
//
// The candidate family depends only on the enclosing sector, never on the
// members, so certified orders are monotone under taking subsets.

namespace {

constexpr int kLimitKey = std::numeric_limits<int>::max();

struct Dissection {
    bool anchored = false;
    double anchor = 0.0;
};

struct Piece {
    int key;
    std::vector<double> endpoints;  // anchors offered to the piece's own re-dissection
};

Piece dissect(double r, const Dissection& d)
{
    if (!d.anchored) {
        const int ell = dyadic_level(r);
        return {ell, {std::ldexp(1.0, -(ell + 1)), std::ldexp(1.0, -ell)}};
    }
    const double a = d.anchor;
    const double rel = std::abs(r - a) / a;
    if (rel <= kSnapTolerance) return {kLimitKey, {}};
    // r - a cancels, so the relative error of rel grows like 1/rel
    int e = 0;
    const double m = std::frexp(rel, &e);
    const int ell = m - 0.5 <= 0.5 * kSnapTolerance / rel ? 1 - e : -e;
    std::vector<double> ends;
    for (int s : {ell, ell + 1}) {
        const double off = std::ldexp(1.0, -s);
        ends.push_back(a * (1.0 + off));
        if (off < 1.0) ends.push_back(a * (1.0 - off));
    }
    return {ell, ends};
}

class LacunarityChecker {
public:
    explicit LacunarityChecker(const DirectionSet& set) : pairs_(sigma_pairs(set.dim()))
    {
        slopes_.resize(set.size());
        for (std::size_t i = 0; i < set.size(); ++i)
            for (const auto& s : pairs_) slopes_[i].push_back(set[i][s.second] / set[i][s.first]);
    }

    bool check(const std::vector<std::size_t>& members, const std::vector<std::vector<double>>& context,
               int budget) const
    {
        if (members.size() <= 1) return true;
        if (budget == 0) return false;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            if (single_slope(members, p)) continue;
            if (!pair_dissectable(members, context, p, budget)) return false;
        }
        return true;
    }

private:
    bool single_slope(const std::vector<std::size_t>& members, std::size_t p) const
    {
        const double r0 = slopes_[members.front()][p];
        for (auto m : members)
            if (std::abs(slopes_[m][p] - r0) > kSameSlopeTolerance * r0) return false;
        return true;
    }

    bool pair_dissectable(const std::vector<std::size_t>& members, const std::vector<std::vector<double>>& context,
                          std::size_t p, int budget) const
    {
        std::vector<Dissection> family{{false, 0.0}};
        for (double a : context[p]) family.push_back({true, a});
        for (const auto& d : family) {
            std::map<int, std::pair<std::vector<std::size_t>, std::vector<double>>> groups;
            for (auto m : members) {
                auto piece = dissect(slopes_[m][p], d);
                auto& g = groups[piece.key];
                g.first.push_back(m);
                g.second = std::move(piece.endpoints);
            }
            bool ok = true;
            for (auto& [key, g] : groups) {
                auto sub = context;
                sub[p] = g.second;
                if (!check(g.first, sub, budget - 1)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
        return false;
    }

    std::vector<SigmaIndex> pairs_;
    std::vector<std::vector<double>> slopes_;
};

}  // namespace

std::optional<int> lacunarity_order(const DirectionSet& set, int max_order)
{
    if (set.empty()) throw std::invalid_argument("lacunarity_order needs a nonempty set");
    if (max_order < 0) throw std::invalid_argument("max_order must be >= 0");
    LacunarityChecker checker(set);
    std::vector<std::size_t> all(set.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const std::vector<std::vector<double>> root(sigma_pairs(set.dim()).size());
    for (int L = 0; L <= max_order; ++L)
        if (checker.check(all, root, L)) return L;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

Direction embed_planar(double slope, int n)
{
    std::vector<double> c(static_cast<std::size_t>(n), slope);
    c[0] = 1.0;
    return Direction::from_coords(std::move(c));
}

}  // namespace

DirectionSet generate_planar_lacunary(int order, int branching, int n, int separation)
{
    if (order < 1 || branching < 1) throw std::invalid_argument("order and branching must be >= 1");
    if (n < 2) throw std::invalid_argument("dimension must be >= 2");
    if (separation < 4)
        throw std::invalid_argument("nested perturbations need a scale separation of at least 4 dyadic levels");

    // slope(i_1..i_L) = 2^-i1 (1 + 2^-e_2) ... (1 + 2^-e_L), e_k = e_(k-1) + g + i_k
    std::vector<double> slopes;
    std::vector<int> idx(static_cast<std::size_t>(order), 1);
    while (true) {
        double s = std::ldexp(1.0, -idx[0]);
        int e = 0;
        for (int lvl = 1; lvl < order; ++lvl) {
            e += separation + idx[static_cast<std::size_t>(lvl)];
            s *= 1.0 + std::ldexp(1.0, -e);
        }
        slopes.push_back(s);
        // outermost index varies fastest, so the first b^k directions form
        // an order-k subset
        int pos = 0;
        while (pos < order && idx[static_cast<std::size_t>(pos)] == branching) idx[static_cast<std::size_t>(pos++)] = 1;
        if (pos == order) break;
        ++idx[static_cast<std::size_t>(pos)];
    }
    std::vector<Direction> dirs;
    for (double s : slopes) dirs.push_back(embed_planar(s, n));
    return DirectionSet(std::move(dirs), branching == 1 ? 0 : order);
}

DirectionSet generate_product_lacunary(int n, const std::vector<std::vector<int>>& exponent_lists)
{
    if (n < 2) throw std::invalid_argument("dimension must be >= 2");
    if (exponent_lists.size() != static_cast<std::size_t>(n - 1))
        throw std::invalid_argument("need one exponent list per coordinate 2..n");
    for (const auto& l : exponent_lists) {
        if (l.empty()) throw std::invalid_argument("exponent lists must be nonempty");
        for (int a : l)
            if (a < 1) throw std::invalid_argument("exponents must be >= 1");
    }
    std::vector<Direction> dirs;
    std::vector<std::size_t> idx(exponent_lists.size(), 0);
    while (true) {
        std::vector<double> c{1.0};
        for (std::size_t k = 0; k < idx.size(); ++k) c.push_back(std::ldexp(1.0, -exponent_lists[k][idx[k]]));
        dirs.push_back(Direction::from_coords(std::move(c)));
        std::size_t pos = idx.size();
        while (pos > 0 && idx[pos - 1] + 1 == exponent_lists[pos - 1].size()) idx[--pos] = 0;
        if (pos == 0) break;
        ++idx[pos - 1];
    }
    return DirectionSet(std::move(dirs));
}

DirectionSet generate_equispaced(int count, int n)
{
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    // theta_i = offset + (pi/2 - offset) i / count: nested when count doubles
    constexpr double offset = std::numbers::pi / 1024.0;
    std::vector<Direction> dirs;
    for (int i = 0; i < count; ++i) {
        const double theta = offset + (std::numbers::pi / 2.0 - offset) * i / count;
        dirs.push_back(embed_planar(std::tan(theta), n));
    }
    return DirectionSet(std::move(dirs));
}

// ---------------------------------------------------------------------------
// Membership

bool cone_membership(std::span<const double> xi, const Direction& v)
{
    if (xi.size() != static_cast<std::size_t>(v.dim())) throw std::invalid_argument("dimension mismatch");
    double dot = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
        const double p = xi[k] * v[static_cast<int>(k)];
        dot += p;
        mx = std::max(mx, std::abs(p));
    }
    if (mx == 0.0) throw std::invalid_argument("cone_membership needs xi != 0");
    return std::abs(dot) < mx / static_cast<double>(xi.size());
}

bool wedge_membership(std::span<const double> xi, SigmaIndex sigma, int ell, bool widened)
{
    const double den = xi[static_cast<std::size_t>(sigma.second)];
    if (den == 0.0) return false;
    const double ratio = -xi[static_cast<std::size_t>(sigma.first)] / den;
    const double c = static_cast<double>(xi.size()) + (widened ? 1.0 : 0.0);
    const double lo = std::ldexp(1.0, -(ell + 1)) / c;
    const double hi = std::ldexp(1.0, -ell) * c;
    return ratio >= lo && ratio < hi;
}

}  // namespace lacuna
