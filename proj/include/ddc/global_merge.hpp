#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/boundary.hpp"
#include "ddc/local_model.hpp"

namespace ddc {

/// Which balance vectors the merge feeds to the boundary check over the
/// union of local boundaries.
///  - Transmitted: the vectors each node computed over its full cluster.
///  - Recomputed: vectors recomputed over the union itself.
enum class MergeBalance { Transmitted, Recomputed };

std::string_view to_string(MergeBalance b);
MergeBalance parse_merge_balance(std::string_view s);

struct GlobalParams {
    double g_nu = BoundaryParams::kDefaultNu;
    double g_eps = 0.0;
    BoundaryPredicate predicate = BoundaryPredicate::Cone;
    MergeBalance balance = MergeBalance::Transmitted;

    void validate() const;

    friend bool operator==(const GlobalParams&, const GlobalParams&) = default;
};

/// Explicit configuration that wins over the derived values.
struct GlobalParamsOverride {
    std::optional<double> g_nu;
    std::optional<double> g_eps;
    std::optional<BoundaryPredicate> predicate;
    std::optional<MergeBalance> balance;
};

/// g_nu = max local nu, g_eps = max local eps_b; the predicate is the one
/// all models agree on, else the cone. Throws InvalidInput on no models.
GlobalParams derive_global_params(std::span<const LocalModel> models, const GlobalParamsOverride& override = {});

struct LocalClusterRef {
    std::int32_t node_id = 0;
    std::int32_t cluster_id = 0;

    friend auto operator<=>(const LocalClusterRef&, const LocalClusterRef&) = default;
};

struct GlobalCluster {
    std::int32_t global_id = 0;
    BoundarySet boundary;
    std::size_t cardinality = 0;
    std::vector<LocalClusterRef> contributing;  ///< ascending

    friend bool operator==(const GlobalCluster&, const GlobalCluster&) = default;
};

struct GlobalModel {
    GlobalParams params;
    std::vector<GlobalCluster> clusters;

    std::size_t total_cardinality() const;
    std::size_t boundary_size() const;
    /// Every member of every global boundary, canonical order.
    BoundarySet global_boundary() const;
    void validate() const;

    friend bool operator==(const GlobalModel&, const GlobalModel&) = default;
};

/// All boundary members of all models (the union of local boundaries),
/// canonical order.
BoundarySet union_of_boundaries(std::span<const LocalModel> models);

/// Merge local models into global clusters.
///
///  1. Pool every local boundary point, keeping provenance.
///  2. Run the boundary check over the pool at radius g_eps and aperture
///     g_nu; the survivors form the global boundary.
///  3. Group survivors into connected components of the g_eps graph.
///  4. Attribute each local cluster to the component holding most of its
///     surviving points (ties to the lowest component). A local cluster
///     with no survivors joins the component of the nearest survivor that
///     was connected to it in the pool, or becomes its own global cluster
///     with its original boundary when there is none.
///  5. Components that received no local cluster fold into the global
///     cluster that most of their points' source clusters went to.
///  6. Cardinalities are summed; global ids follow the lexicographically
///     smallest member point.
///
/// The result does not depend on the order of `models`.
GlobalModel merge(std::span<const LocalModel> models, const GlobalParams& params);

std::string serialize(const GlobalModel& model);
GlobalModel deserialize_global_model(std::string_view bytes);

}  // namespace ddc
