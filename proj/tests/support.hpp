#pragma once

// Seeded generators and naive reference implementations used as oracles.
// Nothing here calls the spatial index or the library's boundary code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "ddc/geometry.hpp"

namespace ddc::oracle {

inline std::vector<Point> random_points(std::size_t n, std::size_t d, double lo, double hi, std::uint64_t seed) {
    RandomSource rng(seed);
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(d);
        for (auto& x : c) x = rng.uniform(lo, hi);
        out.emplace_back(std::move(c));
    }
    return out;
}

/// Mixture of Gaussian blobs plus uniform background, so DBSCAN sees
/// cores, borders and noise.
inline std::vector<Point> clustered_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    RandomSource rng(seed);
    const std::size_t centres = 1 + rng.index(4);
    std::vector<std::vector<double>> c(centres, std::vector<double>(d));
    for (auto& v : c) {
        for (auto& x : v) x = rng.uniform(0.0, 10.0);
    }
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(d);
        if (rng.uniform01() < 0.15) {
            for (auto& x : p) x = rng.uniform(0.0, 10.0);
        } else {
            const auto& ctr = c[rng.index(centres)];
            for (std::size_t a = 0; a < d; ++a) p[a] = ctr[a] + 0.6 * rng.normal();
        }
        out.emplace_back(std::move(p));
    }
    return out;
}

inline double naive_dist2(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

/// Sorted indices j with dist(points[j], q) <= eps.
inline std::vector<std::size_t> naive_range(const std::vector<Point>& points, const Point& q, double eps) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (std::sqrt(naive_dist2(points[j], q)) <= eps) out.push_back(j);
    }
    return out;
}

/// Neighbours of point i, excluding i itself.
inline std::vector<std::size_t> naive_neighbours(const std::vector<Point>& points, std::size_t i, double eps) {
    auto r = naive_range(points, points[i], eps);
    r.erase(std::remove(r.begin(), r.end(), i), r.end());
    return r;
}

/// Reference DBSCAN: core points linked by union-find. Noise is -1.
inline std::vector<std::int32_t> naive_dbscan(const std::vector<Point>& points, double eps, int min_pts) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> nb(n);
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) {
        nb[i] = naive_range(points, points[i], eps);
        core[i] = nb[i].size() >= std::size_t(min_pts);
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i]) continue;
        for (std::size_t j : nb[i]) {
            if (core[j]) parent[find(i)] = find(j);
        }
    }
    // Clusters are numbered by their lowest-index core point, the order a
    // sequential scan discovers them; a border point joins the earliest.
    std::map<std::size_t, std::size_t> lowest;  // root -> lowest core index
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) lowest.emplace(find(i), i);
    }
    std::vector<std::pair<std::size_t, std::size_t>> roots;
    for (const auto& [root, low] : lowest) roots.emplace_back(low, root);
    std::sort(roots.begin(), roots.end());
    std::map<std::size_t, std::int32_t> canon;
    for (std::size_t k = 0; k < roots.size(); ++k) canon[roots[k].second] = std::int32_t(k);
    std::vector<std::int32_t> labels(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            labels[i] = canon[find(i)];
            continue;
        }
        for (std::size_t j : nb[i]) {
            if (!core[j]) continue;
            const std::int32_t c = canon[find(j)];
            if (labels[i] < 0 || c < labels[i]) labels[i] = c;
        }
    }
    return labels;
}

/// True when the two labelings induce the same partition, noise matched
/// exactly and cluster ids matched by a bijection.
inline bool same_partition(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    if (a.size() != b.size()) return false;
    std::map<std::int32_t, std::int32_t> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] < 0) != (b[i] < 0)) return false;
        if (a[i] < 0) continue;
        if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
        if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
    }
    return true;
}

/// normalize(sum over neighbours of (p - q)) without any library helpers.
inline std::vector<double> naive_balance(const std::vector<Point>& points, std::size_t i, double eps) {
    const std::size_t d = points[i].dim();
    std::vector<double> v(d, 0.0);
    for (std::size_t j : naive_neighbours(points, i, eps)) {
        for (std::size_t a = 0; a < d; ++a) v[a] += points[i][a] - points[j][a];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

/// Cone predicate over the naive neighbourhood: isolated points are
/// boundary, zero balance is interior.
inline bool naive_cone(const std::vector<Point>& points, std::size_t i, double eps, double nu) {
    const auto nb = naive_neighbours(points, i, eps);
    if (nb.empty()) return true;
    const auto b = naive_balance(points, i, eps);
    if (std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; })) return false;
    for (std::size_t j : nb) {
        double dotv = 0.0, len = 0.0;
        for (std::size_t a = 0; a < b.size(); ++a) {
            const double t = points[j][a] - points[i][a];
            dotv += t * b[a];
            len += t * t;
        }
        if (len == 0.0) continue;  // coincident neighbour has no direction
        if (dotv / std::sqrt(len) >= std::cos(nu)) return false;
    }
    return true;
}

/// 2 * mean furthest-neighbour distance over points with neighbours.
inline double naive_auto_rho(const std::vector<Point>& points, double eps) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double far = -1.0;
        for (std::size_t j : naive_neighbours(points, i, eps)) far = std::max(far, std::sqrt(naive_dist2(points[i], points[j])));
        if (far >= 0.0) {
            sum += far;
            ++count;
        }
    }
    return 2.0 * sum / double(count);
}

inline bool naive_sphere(const std::vector<Point>& points, std::size_t i, double eps, double rho) {
    const auto b = naive_balance(points, i, eps);
    if (std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; })) return false;
    std::vector<double> c(b.size());
    for (std::size_t a = 0; a < b.size(); ++a) c[a] = points[i][a] + rho * b[a];
    return naive_range(points, Point(c), eps).empty();
}

inline Point rotate2(const Point& p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Point{c * p[0] - s * p[1], s * p[0] + c * p[1]};
}

}  // namespace ddc::oracle
