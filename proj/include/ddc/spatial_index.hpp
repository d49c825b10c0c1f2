#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "ddc/geometry.hpp"

namespace ddc {

/// Fixed-radius neighbourhood queries over a uniform grid of cell width eps.
///
/// Results are exact: every candidate from the neighbouring cells is checked
/// with `dist(p, q) <= eps`, the same test a linear scan performs, and the
/// cell range searched is padded so rounding in the cell computation can
/// never drop a qualifying point. Immutable after construction.
class NeighborhoodIndex {
public:
    NeighborhoodIndex(std::span<const Point> points, double eps);

    double radius() const noexcept { return eps_; }
    std::size_t size() const noexcept { return points_.size(); }
    /// Dimension of the stored points; 0 when empty.
    std::size_t dim() const noexcept { return dim_; }
    const Point& point(std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const noexcept { return points_; }
    std::size_t occupied_cells() const noexcept { return cells_.size(); }

    /// Indices q with dist(p, points[q]) <= eps, ascending. With
    /// `exclude_self`, stored points that coincide with p are omitted.
    std::vector<std::size_t> range_query(const Point& p, bool exclude_self = false) const;

    /// Neighbours of the stored point i, excluding index i only.
    std::vector<std::size_t> neighbors_of(std::size_t i) const;

    /// True when at least one stored point lies within eps of p.
    bool any_within(const Point& p) const;

private:
    using CellKey = std::vector<std::int64_t>;
    struct KeyHash {
        std::size_t operator()(const CellKey& k) const noexcept;
    };

    std::int64_t cell_coord(double x, std::size_t axis) const;
    template <class Visit>
    void visit_candidates(const Point& p, Visit&& visit) const;

    std::vector<Point> points_;
    double eps_;
    std::size_t dim_ = 0;
    std::vector<double> origin_;
    std::unordered_map<CellKey, std::vector<std::size_t>, KeyHash> cells_;
};

}  // namespace ddc
