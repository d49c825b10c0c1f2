#include "ddc/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ddc/errors.hpp"

namespace ddc {

std::size_t NeighborhoodIndex::KeyHash::operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::int64_t c : k) {
        h ^= std::uint64_t(c) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return std::size_t(h);
}

NeighborhoodIndex::NeighborhoodIndex(std::span<const Point> points, double eps)
    : points_(points.begin(), points.end()), eps_(eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw InvalidParameter("neighbourhood radius must be positive, got " + std::to_string(eps));
    }
    if (points_.empty()) return;
    dim_ = points_.front().dim();
    require_dimension(points_, dim_);
    origin_.assign(dim_, std::numeric_limits<double>::infinity());
    for (const Point& p : points_) {
        for (std::size_t a = 0; a < dim_; ++a) origin_[a] = std::min(origin_[a], p[a]);
    }
    CellKey key(dim_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t a = 0; a < dim_; ++a) key[a] = cell_coord(points_[i][a], a);
        cells_[key].push_back(i);
    }
}

std::int64_t NeighborhoodIndex::cell_coord(double x, std::size_t axis) const {
    return static_cast<std::int64_t>(std::floor((x - origin_[axis]) / eps_));
}

template <class Visit>
void NeighborhoodIndex::visit_candidates(const Point& p, Visit&& visit) const {
    if (points_.empty()) return;
    if (p.dim() != dim_) {
        throw InvalidInput("query dimension " + std::to_string(p.dim()) + " does not match index dimension " +
                           std::to_string(dim_));
    }
    // Pad the searched range so floating-point rounding in either cell
    // computation cannot exclude a point that the exact distance test accepts.
    constexpr double u = std::numeric_limits<double>::epsilon();
    CellKey lo(dim_), hi(dim_);
    for (std::size_t a = 0; a < dim_; ++a) {
        const double slack = eps_ * 1e-9 + 8.0 * u * (std::abs(p[a]) + std::abs(origin_[a]) + eps_);
        lo[a] = cell_coord(p[a] - eps_ - slack, a);
        hi[a] = cell_coord(p[a] + eps_ + slack, a);
    }
    CellKey cur = lo;
    while (true) {
        if (auto it = cells_.find(cur); it != cells_.end()) {
            for (std::size_t idx : it->second) {
                if (visit(idx)) return;
            }
        }
        std::size_t a = 0;
        for (; a < dim_; ++a) {
            if (cur[a] < hi[a]) {
                ++cur[a];
                break;
            }
            cur[a] = lo[a];
        }
        if (a == dim_) break;
    }
}

std::vector<std::size_t> NeighborhoodIndex::range_query(const Point& p, bool exclude_self) const {
    std::vector<std::size_t> out;
    visit_candidates(p, [&](std::size_t idx) {
        const Point& q = points_[idx];
        if (dist(p, q) <= eps_ && !(exclude_self && q == p)) out.push_back(idx);
        return false;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> NeighborhoodIndex::neighbors_of(std::size_t i) const {
    const Point& p = points_.at(i);
    std::vector<std::size_t> out;
    visit_candidates(p, [&](std::size_t idx) {
        if (idx != i && dist(p, points_[idx]) <= eps_) out.push_back(idx);
        return false;
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool NeighborhoodIndex::any_within(const Point& p) const {
    bool found = false;
    visit_candidates(p, [&](std::size_t idx) {
        found = dist(p, points_[idx]) <= eps_;
        return found;
    });
    return found;
}

}  // namespace ddc
