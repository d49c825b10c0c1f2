#include "ddc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ddc/errors.hpp"

namespace ddc {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double x : values) {
        if (!std::isfinite(x)) {
            throw InvalidInput(std::string(what) + " has a non-finite coordinate");
        }
    }
}

void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) {
        throw InvalidInput("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

Point::Point(std::initializer_list<double> coords) : coords_(coords) {
    require_finite(coords_, "point");
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    require_finite(coords_, "point");
}

Point& Point::operator+=(const Vector& v) {
    require_same_dim(dim(), v.dim());
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += v[i];
    require_finite(coords_, "point");
    return *this;
}

Vector::Vector(std::initializer_list<double> components) : comps_(components) {
    require_finite(comps_, "vector");
}

Vector::Vector(std::vector<double> components) : comps_(std::move(components)) {
    require_finite(comps_, "vector");
}

bool Vector::is_zero() const noexcept {
    return std::all_of(comps_.begin(), comps_.end(), [](double x) { return x == 0.0; });
}

double Vector::norm() const noexcept {
    double s = 0.0;
    for (double x : comps_) s += x * x;
    return std::sqrt(s);
}

Vector& Vector::operator+=(const Vector& v) {
    require_same_dim(dim(), v.dim());
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += v[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& x : comps_) x *= s;
    return *this;
}

Vector operator-(const Point& p, const Point& q) {
    require_same_dim(p.dim(), q.dim());
    std::vector<double> out(p.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] - q[i];
    return Vector(std::move(out));
}

Point operator+(Point p, const Vector& v) {
    p += v;
    return p;
}

Vector operator*(Vector v, double s) {
    v *= s;
    return v;
}

double squared_dist(const Point& p, const Point& q) {
    require_same_dim(p.dim(), q.dim());
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double d = p[i] - q[i];
        s += d * d;
    }
    return s;
}

double dist(const Point& p, const Point& q) { return std::sqrt(squared_dist(p, q)); }

double dot(const Vector& u, const Vector& v) {
    require_same_dim(u.dim(), v.dim());
    double s = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * v[i];
    return s;
}

Vector normalize(const Vector& v) {
    const double n = v.norm();
    if (n > 0.0) return v * (1.0 / n);
    return Vector::zeros(v.dim());
}

HyperRect::HyperRect(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    require_same_dim(lower_.dim(), upper_.dim());
    for (std::size_t i = 0; i < lower_.dim(); ++i) {
        if (lower_[i] > upper_[i]) {
            throw InvalidInput("hyper-rectangle has lower > upper on axis " + std::to_string(i));
        }
    }
}

bool HyperRect::contains(const Point& p) const {
    require_same_dim(p.dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
    }
    return true;
}

double HyperRect::volume() const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= upper_[i] - lower_[i];
    return v;
}

HyperRect meh(std::span<const Point> points) {
    if (points.empty()) throw InvalidInput("minimal enclosing hypercube of an empty set");
    const std::size_t d = points.front().dim();
    require_dimension(points, d);
    std::vector<double> lo(points.front().coords().begin(), points.front().coords().end());
    std::vector<double> hi = lo;
    for (const Point& p : points) {
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    return HyperRect(Point(std::move(lo)), Point(std::move(hi)));
}

RandomSource RandomSource::derive(std::uint64_t seed, std::uint64_t stream) {
    return RandomSource(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

double RandomSource::uniform01() {
    return double(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
    if (lo == hi) return lo;
    const double x = lo + (hi - lo) * uniform01();
    return std::min(x, hi);
}

std::size_t RandomSource::index(std::size_t n) {
    if (n == 0) throw InvalidInput("random index over an empty range");
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return std::size_t(x % n);
}

double RandomSource::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Point sample_uniform(const HyperRect& rect, RandomSource& rng) {
    std::vector<double> c(rect.dim());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.uniform(rect.lower()[i], rect.upper()[i]);
    return Point(std::move(c));
}

void require_dimension(std::span<const Point> points, std::size_t dim) {
    for (const Point& p : points) require_same_dim(p.dim(), dim);
}

}  // namespace ddc
