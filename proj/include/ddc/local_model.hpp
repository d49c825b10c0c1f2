#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/boundary.hpp"
#include "ddc/dbscan.hpp"
#include "ddc/geometry.hpp"

namespace ddc {

inline constexpr int kFormatVersion = 1;

struct ClusterRepresentative {
    std::size_t cardinality = 0;
    double mean_density = 0.0;  ///< mean self-inclusive eps_b-neighbourhood size

    friend bool operator==(const ClusterRepresentative&, const ClusterRepresentative&) = default;
};

/// Parameters a node used to build its model; shipped with the model.
struct LocalParams {
    double eps = 0.0;
    int min_pts = 0;
    double eps_b = 0.0;
    double nu = BoundaryParams::kDefaultNu;
    BoundaryPredicate predicate = BoundaryPredicate::Cone;
    std::optional<double> rho;  ///< empty means automatic
    RhoMode rho_mode = RhoMode::GlobalMean;

    ClusterParams cluster_params() const { return {eps, min_pts}; }
    BoundaryParams boundary_params() const { return {eps_b, nu, rho, rho_mode, predicate}; }
    void validate() const;

    friend bool operator==(const LocalParams&, const LocalParams&) = default;
};

struct LocalCluster {
    std::int32_t cluster_id = 0;
    ClusterRepresentative representative;
    BoundarySet boundary;

    friend bool operator==(const LocalCluster&, const LocalCluster&) = default;
};

struct LocalModel {
    std::int32_t node_id = 0;
    LocalParams params;
    std::vector<LocalCluster> clusters;

    std::size_t boundary_size() const;
    std::size_t total_cardinality() const;
    /// Sort clusters by id and boundary members canonically.
    void canonicalize();
    /// Throws ValidationError naming the first broken invariant.
    void validate() const;

    friend bool operator==(const LocalModel&, const LocalModel&) = default;
};

/// Mean self-inclusive neighbourhood size at radius eps_b.
double mean_density(std::span<const Point> cluster, double eps_b);

/// Cluster the partition, then describe each non-noise cluster by its
/// boundary and representative. Noise is dropped.
///
/// If the predicate rejects every point of a cluster, the point furthest
/// from the cluster centroid stands in as its boundary so the cluster (and
/// its cardinality) still reaches the server.
LocalModel build_local_model(std::span<const Point> partition, const LocalParams& params, std::int32_t node_id);
LocalModel build_local_model(std::span<const Point> partition, const LocalParams& params, std::int32_t node_id,
                             const LocalClusterer& clusterer);

/// Canonical UTF-8 document: sorted keys, clusters by id, boundary members
/// lexicographic, doubles in shortest round-trip form.
std::string serialize(const LocalModel& model);

/// Throws ParseError, UnsupportedVersion or ValidationError.
LocalModel deserialize_local_model(std::string_view bytes);

std::string rho_to_string(const std::optional<double>& rho, RhoMode mode);

}  // namespace ddc
