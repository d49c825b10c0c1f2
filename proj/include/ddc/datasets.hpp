#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/geometry.hpp"

namespace ddc {

enum class ShapeKind { Blob, Disk, Annulus, Crescent, RectWithHole };

std::string_view to_string(ShapeKind k);
ShapeKind parse_shape_kind(std::string_view s);

/// One synthetic cluster.
///
/// Blob: isotropic Gaussian, stddev = scale, any dimension.
/// Disk: uniform in the ball of radius scale, any dimension.
/// Annulus (2-D): uniform in inner_ratio * scale <= r <= scale.
/// Crescent (2-D): disk of radius scale minus a bite disk of radius
///   inner_ratio * scale centred offset_ratio * scale along the local +x axis.
/// RectWithHole (2-D): [-scale, scale] x [-0.6 scale, 0.6 scale] minus a
///   centred hole of radius inner_ratio * 0.6 * scale.
/// The local frame is rotated by `rotation` radians, then moved to `center`.
struct ShapeSpec {
    ShapeKind kind = ShapeKind::Blob;
    Point center{0.0, 0.0};
    double scale = 1.0;
    double rotation = 0.0;
    std::size_t count = 100;
    double noise_stddev = 0.0;
    std::uint64_t seed = 0;
    double inner_ratio = 0.5;
    double offset_ratio = 0.55;

    void validate() const;
};

/// Points with ground-truth labels (-1 for background noise). `labels` may
/// be empty for unlabelled data.
struct Dataset {
    std::vector<Point> points;
    std::vector<std::int32_t> labels;

    std::size_t size() const noexcept { return points.size(); }
    bool labelled() const noexcept { return !labels.empty(); }
};

/// Points of spec k get label k. Deterministic given each spec's seed.
Dataset generate(std::span<const ShapeSpec> specs);

/// `count` points uniform in `box`, all labelled -1.
Dataset uniform_noise(const HyperRect& box, std::size_t count, std::uint64_t seed);

/// Exact point-in-shape test (noise-free shape; a blob counts as the ball
/// of radius 3 * scale).
bool shape_contains(const ShapeSpec& spec, const Point& p);

struct Circle {
    Point center;
    double radius = 0.0;
};

/// The bite disk removed from a crescent, in world coordinates.
Circle crescent_bite(const ShapeSpec& spec);

/// Named scenes: "ds1-like", "ds9-like", "disk", "crescent", "annulus".
std::vector<std::string> preset_names();
std::vector<ShapeSpec> preset_specs(std::string_view name, std::uint64_t seed);
Dataset preset(std::string_view name, std::uint64_t seed);

struct CsvOptions {
    bool header = false;  ///< first line is a header
    bool labels = false;  ///< last column is an integer label
};

/// One point per line, comma-separated. Throws ParseError naming the line.
Dataset parse_csv(std::string_view text, const CsvOptions& options = {});
/// Shortest round-trip decimal form. A header is written when requested.
std::string format_csv(std::span<const Point> points, std::span<const std::int32_t> labels,
                       const CsvOptions& options = {});

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
void save_csv(const std::filesystem::path& path, std::span<const Point> points,
              std::span<const std::int32_t> labels = {}, const CsvOptions& options = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ddc
