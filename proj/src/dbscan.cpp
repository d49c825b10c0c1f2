#include "ddc/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "ddc/errors.hpp"
#include "ddc/spatial_index.hpp"

namespace ddc {

void ClusterParams::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw InvalidParameter("eps must be positive, got " + std::to_string(eps));
    }
    if (min_pts < 1) {
        throw InvalidParameter("min_pts must be at least 1, got " + std::to_string(min_pts));
    }
}

std::size_t Clustering::noise_count() const {
    return std::size_t(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::size_t> Clustering::members(std::int32_t cluster_id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == cluster_id) out.push_back(i);
    }
    return out;
}

Clustering dbscan(std::span<const Point> points, const ClusterParams& params) {
    params.validate();
    Clustering result;
    result.labels.assign(points.size(), Clustering::kNoise);
    if (points.empty()) return result;

    const NeighborhoodIndex index(points, params.eps);
    const auto min_pts = std::size_t(params.min_pts);
    std::vector<bool> visited(points.size(), false);
    std::int32_t next_id = 0;

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (visited[i]) continue;
        visited[i] = true;
        const auto seeds = index.range_query(points[i]);
        if (seeds.size() < min_pts) continue;  // noise for now; may become a border point

        const std::int32_t id = next_id++;
        result.labels[i] = id;
        std::deque<std::size_t> frontier(seeds.begin(), seeds.end());
        while (!frontier.empty()) {
            const std::size_t q = frontier.front();
            frontier.pop_front();
            if (result.labels[q] == Clustering::kNoise) result.labels[q] = id;
            if (visited[q]) continue;
            visited[q] = true;
            const auto nbrs = index.range_query(points[q]);
            if (nbrs.size() >= min_pts) {
                for (std::size_t r : nbrs) {
                    if (!visited[r] || result.labels[r] == Clustering::kNoise) frontier.push_back(r);
                }
            }
        }
    }
    result.cluster_count = std::size_t(next_id);
    return result;
}

std::vector<Point> cluster_points(std::span<const Point> points, const Clustering& clustering,
                                  std::int32_t cluster_id) {
    if (cluster_id < 0 || std::size_t(cluster_id) >= clustering.cluster_count) {
        throw InvalidInput("cluster id " + std::to_string(cluster_id) + " out of range [0, " +
                           std::to_string(clustering.cluster_count) + ")");
    }
    if (clustering.labels.size() != points.size()) {
        throw InvalidInput("clustering labels do not align with the point sequence");
    }
    std::vector<Point> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (clustering.labels[i] == cluster_id) out.push_back(points[i]);
    }
    return out;
}

LocalClusterer dbscan_clusterer(ClusterParams params) {
    params.validate();
    return [params](std::span<const Point> pts) { return dbscan(pts, params); };
}

}  // namespace ddc
