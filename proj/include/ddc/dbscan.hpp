#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ddc/geometry.hpp"

namespace ddc {

struct ClusterParams {
    double eps = 0.0;  ///< neighbourhood radius
    int min_pts = 0;   ///< self-inclusive density threshold

    /// Throws InvalidParameter unless eps > 0 and min_pts >= 1.
    void validate() const;
};

/// Partition of a point sequence into clusters and noise.
struct Clustering {
    static constexpr std::int32_t kNoise = -1;

    std::vector<std::int32_t> labels;  ///< aligned with the input points
    std::size_t cluster_count = 0;

    std::size_t noise_count() const;
    std::vector<std::size_t> members(std::int32_t cluster_id) const;
};

/// DBSCAN with a uniform-grid neighbourhood index.
///
/// Clusters are seeded from core points in index order, so cluster ids are
/// ordered by each cluster's lowest core index. A border point reachable from
/// several clusters keeps the first cluster that reaches it.
Clustering dbscan(std::span<const Point> points, const ClusterParams& params);

/// The points labelled `cluster_id`, in input order.
std::vector<Point> cluster_points(std::span<const Point> points, const Clustering& clustering,
                                  std::int32_t cluster_id);

/// Signature every local clustering algorithm plugs into. Only DBSCAN ships.
using LocalClusterer = std::function<Clustering(std::span<const Point>)>;

LocalClusterer dbscan_clusterer(ClusterParams params);

}  // namespace ddc
