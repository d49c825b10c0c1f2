#include "ddc/regenerate.hpp"

#include <limits>
#include <string>

#include "ddc/errors.hpp"

namespace ddc {

std::string_view to_string(RegenStrategy s) {
    switch (s) {
        case RegenStrategy::RandomThrow: return "random-throw";
        case RegenStrategy::Grid: return "grid";
        case RegenStrategy::PerturbedGrid: return "perturbed-grid";
    }
    return "random-throw";
}

RegenStrategy parse_regen_strategy(std::string_view s) {
    if (s == "random-throw") return RegenStrategy::RandomThrow;
    if (s == "grid" || s == "perturbed-grid") {
        throw InvalidParameter("regeneration strategy '" + std::string(s) + "' is not implemented");
    }
    throw InvalidParameter("unknown regeneration strategy '" + std::string(s) + "'");
}

InsideTester::InsideTester(const BoundarySet& boundary) : dim_(0), count_(boundary.size()) {
    if (boundary.empty()) throw InvalidInput("inside test against an empty boundary");
    dim_ = boundary.members.front().point.dim();
    coords_.reserve(count_ * dim_);
    balance_.reserve(count_ * dim_);
    for (const auto& m : boundary.members) {
        if (m.point.dim() != dim_ || m.balance.dim() != dim_) {
            throw InvalidInput("boundary mixes dimensions");
        }
        coords_.insert(coords_.end(), m.point.coords().begin(), m.point.coords().end());
        balance_.insert(balance_.end(), m.balance.components().begin(), m.balance.components().end());
    }
}

std::size_t InsideTester::nearest(const Point& q) const {
    if (q.dim() != dim_) throw InvalidInput("query dimension does not match the boundary");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const double* c = coords_.data();
    for (std::size_t j = 0; j < count_; ++j, c += dim_) {
        double d = 0.0;
        for (std::size_t a = 0; a < dim_; ++a) {
            const double t = c[a] - q[a];
            d += t * t;
        }
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

bool InsideTester::inside(const Point& q) const {
    const std::size_t j = nearest(q);
    const double* c = coords_.data() + j * dim_;
    const double* b = balance_.data() + j * dim_;
    double s = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) s += (c[a] - q[a]) * b[a];
    return s > 0.0;
}

bool inside(const Point& q, const BoundarySet& boundary) { return InsideTester(boundary).inside(q); }

RegeneratedCluster random_throw(const BoundarySet& boundary, std::size_t m, RandomSource& rng,
                                std::size_t max_attempts_factor) {
    RegeneratedCluster out;
    out.target_cardinality = m;
    if (m == 0) return out;
    if (max_attempts_factor == 0) throw InvalidParameter("max_attempts_factor must be positive");
    const InsideTester tester(boundary);
    const HyperRect box = meh(boundary.points());
    const std::size_t budget = max_attempts_factor * m;
    out.points.reserve(m);
    std::size_t attempts = 0;
    while (out.points.size() < m) {
        if (attempts == budget) throw RegenerationStalled(out.points.size(), attempts, m);
        ++attempts;
        Point x = sample_uniform(box, rng);
        if (tester.inside(x)) out.points.push_back(std::move(x));
    }
    return out;
}

std::size_t RegenerationResult::total_points() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.points.size();
    return n;
}

RegenerationResult regenerate_all(const GlobalModel& global, std::uint64_t seed, std::size_t max_attempts_factor,
                                  RegenStrategy strategy) {
    if (strategy != RegenStrategy::RandomThrow) {
        throw InvalidParameter("regeneration strategy '" + std::string(to_string(strategy)) + "' is not implemented");
    }
    RegenerationResult result;
    for (const auto& c : global.clusters) {
        RandomSource rng = RandomSource::derive(seed, std::uint64_t(std::int64_t(c.global_id)));
        try {
            RegeneratedCluster rc = random_throw(c.boundary, c.cardinality, rng, max_attempts_factor);
            rc.global_id = c.global_id;
            result.clusters.push_back(std::move(rc));
        } catch (const RegenerationStalled& e) {
            result.clusters.push_back(RegeneratedCluster{c.global_id, {}, c.cardinality});
            result.failures.push_back({c.global_id, e.what()});
        }
    }
    return result;
}

}  // namespace ddc
