#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/geometry.hpp"
#include "ddc/spatial_index.hpp"

namespace ddc {

enum class BoundaryPredicate { Cone, Sphere };

std::string_view to_string(BoundaryPredicate p);
BoundaryPredicate parse_predicate(std::string_view s);

/// How an automatic sphere offset is resolved.
///  - GlobalMean: one rho per cluster, twice the mean furthest-neighbour distance.
///  - PerPoint: each point uses twice its own furthest-neighbour distance.
enum class RhoMode { GlobalMean, PerPoint };

struct BoundaryParams {
    static constexpr double kDefaultNu = std::numbers::pi / 6.0;

    double eps_b = 0.0;
    double nu = kDefaultNu;
    std::optional<double> rho;  ///< empty means automatic
    RhoMode rho_mode = RhoMode::GlobalMean;
    BoundaryPredicate predicate = BoundaryPredicate::Cone;

    void validate() const;
};

/// One balance vector per cluster point, each unit length or exactly zero.
using BalanceField = std::vector<Vector>;

struct BoundaryPoint {
    Point point;
    Vector balance;
    std::int32_t source_node = 0;
    std::int32_t source_cluster = 0;

    friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};

/// Lexicographic by coordinates, then balance, then provenance.
bool canonical_less(const BoundaryPoint& a, const BoundaryPoint& b);

struct BoundarySet {
    std::vector<BoundaryPoint> members;

    std::size_t size() const noexcept { return members.size(); }
    bool empty() const noexcept { return members.empty(); }
    std::vector<Point> points() const;
    void canonicalize();

    friend bool operator==(const BoundarySet&, const BoundarySet&) = default;
};

/// Sum over neighbours of (p - q). Zero for an empty neighbour set.
Vector displacement_vector(const Point& p, std::span<const Point> neighbours);

/// Balance vectors of every point of `index`, neighbourhoods taken within
/// the indexed set only.
BalanceField balance_field(const NeighborhoodIndex& index);
BalanceField balance_field(std::span<const Point> cluster, double eps_b);

/// Hyper-cone check: true iff every neighbour q satisfies
/// normalize(q - p) . b < cos(nu). An empty neighbour set is vacuously
/// boundary; otherwise a zero balance vector means interior.
bool is_boundary_cone(const Point& p, const Vector& b, std::span<const Point> neighbours, double nu);

/// Hyper-sphere check: true iff b is nonzero and no indexed point lies
/// within the index radius of p + rho * b.
bool is_boundary_sphere(const Point& p, const Vector& b, const NeighborhoodIndex& index, double rho);

/// Twice the mean, over points with a nonempty neighbourhood, of the
/// distance to the furthest neighbour. Throws InvalidInput when no point
/// has a neighbour.
double auto_rho(std::span<const Point> cluster, double eps_b);
double auto_rho(const NeighborhoodIndex& index);

/// Table I: start from the whole cluster and discard every point with a
/// neighbour inside its cone (or a nonempty offset sphere). Decisions read
/// only the precomputed balance field, never earlier discards.
BoundarySet detect_boundary(std::span<const Point> cluster, const BoundaryParams& params,
                            std::int32_t node_id, std::int32_t cluster_id);

/// Same as above with a caller-supplied index and balance field.
/// Returns the indices of the boundary points, ascending.
std::vector<std::size_t> detect_boundary_indices(const NeighborhoodIndex& index, const BalanceField& balance,
                                                 const BoundaryParams& params);

}  // namespace ddc
