#include "ddc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ddc/errors.hpp"
#include "ddc/regenerate.hpp"
#include "ddc/spatial_index.hpp"
#include "json_io.hpp"

namespace ddc {

double coverage(std::span<const Point> original, const BoundarySet& boundary) {
    if (original.empty()) throw InvalidInput("coverage of an empty point set");
    const InsideTester tester(boundary);
    std::size_t hit = 0;
    for (const auto& p : original) hit += tester.inside(p) ? 1 : 0;
    return double(hit) / double(original.size());
}

double boundary_hausdorff(std::span<const Point> a, std::span<const Point> b) {
    if (a.empty() || b.empty()) throw InvalidInput("Hausdorff distance of an empty set");
    require_dimension(a, a.front().dim());
    require_dimension(b, a.front().dim());
    double worst = 0.0;
    auto directed = [&](std::span<const Point> from, std::span<const Point> to) {
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, squared_dist(p, q));
            worst = std::max(worst, best);
        }
    };
    directed(a, b);
    directed(b, a);
    return std::sqrt(worst);
}

double boundary_hausdorff(const BoundarySet& a, const BoundarySet& b) {
    return boundary_hausdorff(a.points(), b.points());
}

double density_cv(std::span<const Point> points, double radius) {
    if (points.empty()) return 0.0;
    const NeighborhoodIndex index(points, radius);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double c = double(index.neighbors_of(i).size());
        sum += c;
        sum_sq += c * c;
    }
    const double n = double(points.size());
    const double mean = sum / n;
    if (mean == 0.0) return 0.0;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return std::sqrt(var) / mean;
}

std::vector<Point> grid_fill(const BoundarySet& boundary, std::size_t m) {
    const InsideTester tester(boundary);
    const HyperRect box = meh(boundary.points());
    const std::size_t d = box.dim();
    if (m == 0) return {};
    std::size_t per_axis = std::max<std::size_t>(2, std::size_t(std::ceil(std::pow(double(m), 1.0 / double(d)))));
    for (;;) {
        std::vector<Point> out;
        std::vector<std::size_t> idx(d, 0);
        std::vector<double> c(d);
        for (;;) {
            for (std::size_t a = 0; a < d; ++a) {
                const double lo = box.lower()[a], hi = box.upper()[a];
                c[a] = lo + (hi - lo) * (double(idx[a]) + 0.5) / double(per_axis);
            }
            Point p(c);
            if (tester.inside(p)) out.push_back(std::move(p));
            std::size_t a = 0;
            while (a < d && ++idx[a] == per_axis) idx[a++] = 0;
            if (a == d) break;
        }
        if (out.size() >= m) return out;
        // The lattice covers the MEH uniformly, so scale by the observed inside fraction.
        const double frac = std::max(double(out.size()), 1.0) / std::pow(double(per_axis), double(d));
        const auto next = std::size_t(std::ceil(std::pow(double(m) / frac, 1.0 / double(d)))) + 1;
        per_axis = std::max(per_axis + 1, next);
    }
}

QualityReport evaluate_pipeline(const PipelineReport& report, const Dataset& original) {
    if (original.points.empty()) throw InvalidInput("evaluation against an empty dataset");
    QualityReport q;
    const GlobalModel& global = report.final_global;

    std::map<std::int32_t, std::vector<Point>> truth;
    if (original.labelled()) {
        for (std::size_t i = 0; i < original.points.size(); ++i) {
            if (original.labels[i] >= 0) truth[original.labels[i]].push_back(original.points[i]);
        }
    } else {
        truth[0] = original.points;
    }
    std::size_t covered = 0, total = 0;
    std::vector<InsideTester> testers;
    for (const auto& c : global.clusters) testers.emplace_back(c.boundary);
    for (const auto& [label, pts] : truth) {
        std::size_t best = 0;
        for (const auto& t : testers) {
            std::size_t hit = 0;
            for (const auto& p : pts) hit += t.inside(p) ? 1 : 0;
            best = std::max(best, hit);
        }
        covered += best;
        total += pts.size();
    }
    q.coverage = total == 0 ? 0.0 : double(covered) / double(total);

    const double local = double(report.local_cardinality());
    const double merged = double(global.total_cardinality());
    q.cardinality_error = local == 0.0 ? 0.0 : std::abs(merged - local) / local;

    const LocalModel central = build_local_model(original.points, report.config.local, 0);
    std::vector<Point> central_boundary;
    for (const auto& c : central.clusters) {
        for (const auto& m : c.boundary.members) central_boundary.push_back(m.point);
    }
    const BoundarySet gb = global.global_boundary();
    q.boundary_hausdorff = (central_boundary.empty() || gb.empty())
                               ? std::numeric_limits<double>::infinity()
                               : boundary_hausdorff(central_boundary, gb.points());

    std::size_t raw = 0, model = 0;
    for (const auto& t : report.transfers) {
        raw += t.raw_bytes;
        model += t.model_bytes;
    }
    q.compression_ratio = raw == 0 ? 0.0 : double(model) / double(raw);

    double cv_sum = 0.0;
    std::size_t cv_count = 0;
    for (const auto& c : report.regenerated.clusters) {
        if (c.points.size() < 2) continue;
        cv_sum += density_cv(c.points, report.config.local.eps_b);
        ++cv_count;
    }
    q.density_cv = cv_count == 0 ? 0.0 : cv_sum / double(cv_count);
    return q;
}

std::string QualityReport::to_json() const {
    return detail::dump({{"coverage", coverage},
                         {"cardinality_error", cardinality_error},
                         {"boundary_hausdorff", std::isfinite(boundary_hausdorff) ? detail::json(boundary_hausdorff)
                                                                                  : detail::json(nullptr)},
                         {"compression_ratio", compression_ratio},
                         {"density_cv", density_cv}});
}

std::string QualityReport::csv_header() { return "coverage,cardinality_error,boundary_hausdorff,compression_ratio,density_cv\n"; }

std::string QualityReport::csv_row() const {
    std::string out;
    for (double v : {coverage, cardinality_error, boundary_hausdorff, compression_ratio, density_cv}) {
        if (!out.empty()) out += ',';
        out += detail::json(v).dump();
    }
    return out + "\n";
}

}  // namespace ddc
