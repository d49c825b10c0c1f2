#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace ddc {

class Vector;

/// A d-dimensional location. Coordinates are always finite.
class Point {
public:
    Point() = default;
    Point(std::initializer_list<double> coords);
    explicit Point(std::vector<double> coords);

    static Point zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }

    Point& operator+=(const Vector& v);

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point& a, const Point& b) { return a.coords_ <=> b.coords_; }

private:
    std::vector<double> coords_;
};

/// A displacement in the same space as Point; balance vectors are unit or zero.
class Vector {
public:
    Vector() = default;
    Vector(std::initializer_list<double> components);
    explicit Vector(std::vector<double> components);

    static Vector zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

    std::size_t dim() const noexcept { return comps_.size(); }
    double operator[](std::size_t i) const { return comps_[i]; }
    std::span<const double> components() const noexcept { return comps_; }

    bool is_zero() const noexcept;
    double norm() const noexcept;

    Vector& operator+=(const Vector& v);
    Vector& operator*=(double s);

    friend bool operator==(const Vector&, const Vector&) = default;
    friend auto operator<=>(const Vector& a, const Vector& b) { return a.comps_ <=> b.comps_; }

private:
    std::vector<double> comps_;
};

Vector operator-(const Point& p, const Point& q);
Point operator+(Point p, const Vector& v);
Vector operator*(Vector v, double s);

/// Euclidean distance. Throws InvalidInput on dimension mismatch.
double dist(const Point& p, const Point& q);
double squared_dist(const Point& p, const Point& q);

double dot(const Vector& u, const Vector& v);

/// v / |v|, or the zero vector when |v| == 0.
Vector normalize(const Vector& v);

/// Axis-aligned box with lower_i <= upper_i on every axis.
class HyperRect {
public:
    HyperRect(Point lower, Point upper);

    const Point& lower() const noexcept { return lower_; }
    const Point& upper() const noexcept { return upper_; }
    std::size_t dim() const noexcept { return lower_.dim(); }

    bool contains(const Point& p) const;
    double volume() const noexcept;

private:
    Point lower_;
    Point upper_;
};

/// Minimal enclosing hypercube: per-axis min/max of a nonempty point set.
HyperRect meh(std::span<const Point> points);

/// Seedable deterministic generator. Uniform draws use the top 53 bits of
/// a 64-bit Mersenne Twister so results do not depend on the standard
/// library's distribution implementations.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream derived from (seed, stream) by SplitMix64 mixing.
    static RandomSource derive(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform01();
    /// Uniform in [lo, hi]; returns lo when lo == hi.
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Point sample_uniform(const HyperRect& rect, RandomSource& rng);

/// Throws InvalidInput if any point's dimension differs from `dim`.
void require_dimension(std::span<const Point> points, std::size_t dim);

}  // namespace ddc
