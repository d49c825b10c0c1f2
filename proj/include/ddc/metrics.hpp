#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "ddc/boundary.hpp"
#include "ddc/datasets.hpp"
#include "ddc/harness.hpp"

namespace ddc {

struct QualityReport {
    double coverage = 0.0;            ///< original cluster points inside their matched global boundary
    double cardinality_error = 0.0;   ///< |sum global - sum local| / sum local
    double boundary_hausdorff = 0.0;  ///< centralized boundary vs merged boundary
    double compression_ratio = 0.0;   ///< model bytes / raw partition bytes
    double density_cv = 0.0;          ///< mean over regenerated clusters

    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

/// Fraction of `original` for which Inside holds against `boundary`.
double coverage(std::span<const Point> original, const BoundarySet& boundary);

/// Symmetric Hausdorff distance between the two point sets.
double boundary_hausdorff(std::span<const Point> a, std::span<const Point> b);
double boundary_hausdorff(const BoundarySet& a, const BoundarySet& b);

/// Coefficient of variation of the neighbour count within `radius`
/// (self excluded). 0 when the mean count is 0.
double density_cv(std::span<const Point> points, double radius);

/// Baseline regeneration: the Inside points of a regular lattice over the
/// boundary's MEH, with the lattice refined until at least m points are
/// inside.
std::vector<Point> grid_fill(const BoundarySet& boundary, std::size_t m);

/// Matches each ground-truth cluster (label >= 0) to the global cluster
/// whose boundary covers most of its points. The centralized reference is
/// one node's model over the whole dataset under the pipeline's base
/// parameters.
QualityReport evaluate_pipeline(const PipelineReport& report, const Dataset& original);

}  // namespace ddc
