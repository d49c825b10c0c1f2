#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ddc/boundary.hpp"

namespace ddc {

/// Everything one figure shows. Points are coloured by label (-1 grey);
/// each boundary set gets its own colour and larger markers.
struct SvgScene {
    std::vector<Point> points;
    std::vector<std::int32_t> labels;  ///< empty or one per point
    std::vector<BoundarySet> boundaries;
    std::vector<Point> regenerated;
    std::vector<std::int32_t> regenerated_labels;
    bool draw_balance = false;
    double balance_length = 0.0;  ///< 0 picks 3% of the view extent
    std::string title;
    int width = 640;
    int height = 640;
};

/// Deterministic SVG text. Input above two dimensions is projected onto the
/// first two coordinates with one warning written to `warnings`.
std::string render_svg(const SvgScene& scene, std::ostream* warnings = nullptr);

}  // namespace ddc
