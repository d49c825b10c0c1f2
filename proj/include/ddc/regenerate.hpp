#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/boundary.hpp"
#include "ddc/geometry.hpp"
#include "ddc/global_merge.hpp"

namespace ddc {

/// Regeneration strategies. Only random throw is implemented; the grid
/// variants are reserved names that are rejected at configuration time.
enum class RegenStrategy { RandomThrow, Grid, PerturbedGrid };

std::string_view to_string(RegenStrategy s);
/// Throws InvalidParameter for unknown or unimplemented strategies.
RegenStrategy parse_regen_strategy(std::string_view s);

inline constexpr std::size_t kDefaultMaxAttemptsFactor = 1000;

/// Nearest-boundary-point lookup behind the Inside test.
class InsideTester {
public:
    /// Throws InvalidInput on an empty boundary.
    explicit InsideTester(const BoundarySet& boundary);

    std::size_t dim() const noexcept { return dim_; }
    /// Index of the nearest boundary member; ties go to the lowest index.
    std::size_t nearest(const Point& q) const;
    /// (p_j - q) . b_j > 0 for the nearest member p_j. Strict, so a query
    /// coinciding with a boundary point is outside.
    bool inside(const Point& q) const;

private:
    std::size_t dim_;
    std::size_t count_;
    std::vector<double> coords_;   // count_ x dim_
    std::vector<double> balance_;  // count_ x dim_
};

bool inside(const Point& q, const BoundarySet& boundary);

struct RegeneratedCluster {
    std::int32_t global_id = 0;
    std::vector<Point> points;
    std::size_t target_cardinality = 0;
};

/// Rejection-sample `m` points in the boundary's enclosing box that pass
/// the Inside test. Throws RegenerationStalled after
/// max_attempts_factor * m draws without reaching m.
RegeneratedCluster random_throw(const BoundarySet& boundary, std::size_t m, RandomSource& rng,
                                std::size_t max_attempts_factor = kDefaultMaxAttemptsFactor);

struct RegenerationFailure {
    std::int32_t global_id = 0;
    std::string message;
};

struct RegenerationResult {
    std::vector<RegeneratedCluster> clusters;  ///< one per global cluster, by global id
    std::vector<RegenerationFailure> failures;

    std::size_t total_points() const;
};

/// One random throw per global cluster with m = its cardinality. Each
/// cluster draws from its own stream derived from (seed, global_id).
/// A stalled cluster is reported with an empty point set.
RegenerationResult regenerate_all(const GlobalModel& global, std::uint64_t seed,
                                  std::size_t max_attempts_factor = kDefaultMaxAttemptsFactor,
                                  RegenStrategy strategy = RegenStrategy::RandomThrow);

}  // namespace ddc
