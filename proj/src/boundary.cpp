#include "ddc/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddc/errors.hpp"

namespace ddc {

std::string_view to_string(BoundaryPredicate p) {
    return p == BoundaryPredicate::Cone ? "cone" : "sphere";
}

BoundaryPredicate parse_predicate(std::string_view s) {
    if (s == "cone") return BoundaryPredicate::Cone;
    if (s == "sphere") return BoundaryPredicate::Sphere;
    throw InvalidParameter("unknown boundary predicate '" + std::string(s) + "' (expected cone or sphere)");
}

void BoundaryParams::validate() const {
    if (!(eps_b > 0.0) || !std::isfinite(eps_b)) {
        throw InvalidParameter("eps_b must be positive, got " + std::to_string(eps_b));
    }
    if (!(nu > 0.0 && nu < std::numbers::pi / 2.0)) {
        throw InvalidParameter("nu must lie in (0, pi/2), got " + std::to_string(nu));
    }
    if (rho && (!(*rho > 0.0) || !std::isfinite(*rho))) {
        throw InvalidParameter("rho must be positive, got " + std::to_string(*rho));
    }
}

bool canonical_less(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (auto c = a.point <=> b.point; c != 0) return c < 0;
    if (auto c = a.balance <=> b.balance; c != 0) return c < 0;
    if (a.source_node != b.source_node) return a.source_node < b.source_node;
    return a.source_cluster < b.source_cluster;
}

std::vector<Point> BoundarySet::points() const {
    std::vector<Point> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.point);
    return out;
}

void BoundarySet::canonicalize() { std::sort(members.begin(), members.end(), canonical_less); }

Vector displacement_vector(const Point& p, std::span<const Point> neighbours) {
    Vector v = Vector::zeros(p.dim());
    for (const Point& q : neighbours) v += p - q;
    return v;
}

BalanceField balance_field(const NeighborhoodIndex& index) {
    BalanceField field;
    field.reserve(index.size());
    std::vector<Point> nbrs;
    for (std::size_t i = 0; i < index.size(); ++i) {
        nbrs.clear();
        for (std::size_t j : index.neighbors_of(i)) nbrs.push_back(index.point(j));
        field.push_back(normalize(displacement_vector(index.point(i), nbrs)));
    }
    return field;
}

BalanceField balance_field(std::span<const Point> cluster, double eps_b) {
    return balance_field(NeighborhoodIndex(cluster, eps_b));
}

bool is_boundary_cone(const Point& p, const Vector& b, std::span<const Point> neighbours, double nu) {
    if (neighbours.empty()) return true;
    if (b.is_zero()) return false;
    const double threshold = std::cos(nu);
    for (const Point& q : neighbours) {
        if (dot(normalize(q - p), b) >= threshold) return false;
    }
    return true;
}

bool is_boundary_sphere(const Point& p, const Vector& b, const NeighborhoodIndex& index, double rho) {
    if (b.is_zero()) return false;
    return !index.any_within(p + b * rho);
}

namespace {

/// Distance to the furthest neighbour of each point; empty when none.
std::vector<std::optional<double>> furthest_neighbour(const NeighborhoodIndex& index) {
    std::vector<std::optional<double>> out(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        for (std::size_t j : index.neighbors_of(i)) {
            const double d = dist(index.point(i), index.point(j));
            if (!out[i] || d > *out[i]) out[i] = d;
        }
    }
    return out;
}

}  // namespace

double auto_rho(const NeighborhoodIndex& index) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& f : furthest_neighbour(index)) {
        if (f) {
            sum += *f;
            ++n;
        }
    }
    if (n == 0) throw InvalidInput("automatic rho needs at least one point with a neighbour");
    return 2.0 * sum / double(n);
}

double auto_rho(std::span<const Point> cluster, double eps_b) {
    return auto_rho(NeighborhoodIndex(cluster, eps_b));
}

std::vector<std::size_t> detect_boundary_indices(const NeighborhoodIndex& index, const BalanceField& balance,
                                                 const BoundaryParams& params) {
    params.validate();
    if (balance.size() != index.size()) {
        throw InvalidInput("balance field does not align with the indexed points");
    }
    std::vector<std::size_t> kept;
    if (params.predicate == BoundaryPredicate::Cone) {
        std::vector<Point> nbrs;
        for (std::size_t i = 0; i < index.size(); ++i) {
            nbrs.clear();
            for (std::size_t j : index.neighbors_of(i)) nbrs.push_back(index.point(j));
            if (is_boundary_cone(index.point(i), balance[i], nbrs, params.nu)) kept.push_back(i);
        }
        return kept;
    }

    // Sphere predicate. Automatic rho is resolved over the indexed set.
    std::vector<std::optional<double>> per_point;
    double rho = 0.0;
    if (params.rho) {
        rho = *params.rho;
    } else if (params.rho_mode == RhoMode::PerPoint) {
        per_point = furthest_neighbour(index);
    } else {
        bool any = false;
        for (std::size_t i = 0; i < index.size() && !any; ++i) any = !index.neighbors_of(i).empty();
        if (!any) return kept;  // every balance vector is zero
        rho = auto_rho(index);
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
        double r = rho;
        if (!params.rho && params.rho_mode == RhoMode::PerPoint) {
            if (!per_point[i]) continue;  // no neighbours, zero balance
            r = 2.0 * *per_point[i];
        }
        if (is_boundary_sphere(index.point(i), balance[i], index, r)) kept.push_back(i);
    }
    return kept;
}

BoundarySet detect_boundary(std::span<const Point> cluster, const BoundaryParams& params, std::int32_t node_id,
                            std::int32_t cluster_id) {
    params.validate();
    BoundarySet out;
    if (cluster.empty()) return out;
    const NeighborhoodIndex index(cluster, params.eps_b);
    const BalanceField balance = balance_field(index);
    for (std::size_t i : detect_boundary_indices(index, balance, params)) {
        out.members.push_back(BoundaryPoint{cluster[i], balance[i], node_id, cluster_id});
    }
    return out;
}

}  // namespace ddc
