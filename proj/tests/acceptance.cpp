// One PASS/FAIL line per acceptance criterion. Thresholds and fixtures are
// pinned here; the exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ddc/boundary.hpp"
#include "ddc/datasets.hpp"
#include "ddc/dbscan.hpp"
#include "ddc/global_merge.hpp"
#include "ddc/harness.hpp"
#include "ddc/local_model.hpp"
#include "ddc/metrics.hpp"
#include "ddc/regenerate.hpp"
#include "ddc/spatial_index.hpp"
#include "ddc/svg.hpp"
#include "support.hpp"

using namespace ddc;
using namespace ddc::oracle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

template <class... A>
std::string fmt(const char* pattern, A... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

Verdict range_queries() {
    constexpr double kBudget = 10.0;
    const auto t0 = Clock::now();
    std::size_t mismatches = 0, queries = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        RandomSource pick(1000 + s);
        const std::size_t n = 100 + pick.index(1901);
        const std::size_t d = 2 + pick.index(2);
        const double eps = pick.uniform(0.2, 1.5);
        const auto pts = random_points(n, d, 0.0, 10.0, s);
        NeighborhoodIndex index(pts, eps);
        for (std::size_t q = 0; q < 20; ++q) {
            const Point probe = q < 10 ? pts[pick.index(n)] : random_points(1, d, -1.0, 11.0, s * 100 + q)[0];
            auto got = index.range_query(probe);
            std::sort(got.begin(), got.end());
            mismatches += got != naive_range(pts, probe, eps);
            ++queries;
        }
    }
    const double t = seconds_since(t0);
    return {mismatches == 0 && t < kBudget,
            fmt("%zu/%zu queries differ from brute force, %.2fs (budget %.0fs)", mismatches, queries, t, kBudget)};
}

Verdict dbscan_equivalence() {
    constexpr double kBudget = 30.0;
    const auto t0 = Clock::now();
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        RandomSource pick(2000 + s);
        const std::size_t n = 200 + pick.index(801);
        const std::size_t d = 2 + pick.index(2);
        const auto pts = clustered_points(n, d, s);
        const double eps = pick.uniform(0.3, 0.8);
        const int min_pts = 3 + int(pick.index(6));
        const Clustering c = dbscan(pts, {eps, min_pts});
        bad += !same_partition(c.labels, naive_dbscan(pts, eps, min_pts));
    }
    const double t = seconds_since(t0);
    return {bad == 0 && t < kBudget, fmt("%zu/20 datasets differ up to renaming, %.2fs (budget %.0fs)", bad, t, kBudget)};
}

Verdict balance_vectors() {
    constexpr double kTol = 1e-9;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto pts = clustered_points(300, 2 + s % 2, s);
        const double eps = 0.7;
        NeighborhoodIndex index(pts, eps);
        const auto field = balance_field(index);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto ref = naive_balance(pts, i, eps);
            for (std::size_t a = 0; a < ref.size(); ++a) worst = std::max(worst, std::abs(field[i][a] - ref[a]));
        }
    }
    const std::vector<Point> cross = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const bool zero = balance_field(cross, 1.0)[0].is_zero();
    return {worst <= kTol && zero, fmt("max deviation %.2e (tol %.0e), symmetric cross zero: %s", worst, kTol,
                                       zero ? "yes" : "no")};
}

Verdict disk_rim() {
    constexpr double kRecall = 0.90, kFpr = 0.10, kBand = 0.1, kDeep = 0.6, kBudget = 5.0;
    const auto t0 = Clock::now();
    const Dataset d = preset("disk", 0);
    const BoundarySet b = detect_boundary(d.points, {0.15}, 0, 0);
    std::size_t rim = 0, rim_hit = 0, deep = 0, deep_hit = 0;
    for (const auto& m : b.members) {
        const double r = std::hypot(m.point[0], m.point[1]);
        rim_hit += r >= 1.0 - kBand;
        deep_hit += r <= kDeep;
    }
    for (const auto& p : d.points) {
        const double r = std::hypot(p[0], p[1]);
        rim += r >= 1.0 - kBand;
        deep += r <= kDeep;
    }
    const double recall = double(rim_hit) / double(rim), fpr = double(deep_hit) / double(deep);
    const double t = seconds_since(t0);
    return {recall >= kRecall && fpr <= kFpr && t < kBudget,
            fmt("rim recall %.3f (need >= %.2f), interior rate %.4f (need <= %.2f), %.2fs", recall, kRecall, fpr,
                kFpr, t)};
}

Verdict concave_rim() {
    constexpr double kEpsB = 0.15, kBand = 0.05;
    const auto specs = preset_specs("crescent", 0);
    const Dataset d = generate(specs);
    const Circle bite = crescent_bite(specs[0]);
    auto count = [&](BoundaryPredicate pred) {
        BoundaryParams p{kEpsB};
        p.predicate = pred;
        std::size_t c = 0;
        for (const auto& m : detect_boundary(d.points, p, 0, 0).members) c += dist(m.point, bite.center) - bite.radius <= kBand;
        return c;
    };
    const std::size_t cone = count(BoundaryPredicate::Cone), sphere = count(BoundaryPredicate::Sphere);
    return {cone > sphere, fmt("concave-rim points: cone %zu, sphere %zu (need cone > sphere)", cone, sphere)};
}

Verdict conservation() {
    std::size_t bad = 0, runs = 0;
    for (const char* name : {"ds1-like", "ds9-like", "disk", "crescent"}) {
        for (std::size_t nodes : {1u, 3u, 5u}) {
            const Dataset d = preset(name, 3);
            PipelineConfig c;
            c.node_count = nodes;
            c.partition_seed = 4;
            c.regen_seed = 5;
            c.local.eps = std::string(name).rfind("ds", 0) == 0 ? 0.3 : 0.15;
            c.local.min_pts = 5;
            c.local.eps_b = c.local.eps;
            const PipelineReport r = run_pipeline(d.points, c);
            std::size_t non_noise = 0;
            for (std::size_t k = 0; k < r.partitions.size(); ++k) {
                const Clustering cl = dbscan(r.partitions[k], c.local.cluster_params());
                non_noise += cl.labels.size() - cl.noise_count();
            }
            const std::size_t local = r.local_cardinality(), global = r.final_global.total_cardinality();
            bad += !(local == global && local == non_noise && r.regenerated.total_points() == global &&
                     r.regenerated.failures.empty());
            ++runs;
        }
    }
    return {bad == 0, fmt("%zu/%zu pipeline runs break sum(global) = sum(local) = non-noise = regenerated", bad, runs)};
}

Verdict seam() {
    constexpr double kEps = 0.15, kCut = 0.05;
    const Dataset d = preset("disk", 0);
    std::vector<Point> left, right;
    for (const auto& p : d.points) (p[0] < 0.0 ? left : right).push_back(p);
    LocalParams lp;
    lp.eps = kEps;
    lp.min_pts = 5;
    lp.eps_b = kEps;
    const std::vector<LocalModel> models = {build_local_model(left, lp, 0), build_local_model(right, lp, 1)};
    auto fraction = [&](const BoundarySet& b) {
        std::size_t c = 0;
        for (const auto& m : b.members) c += std::abs(m.point[0]) <= kCut;
        return double(c) / double(b.size());
    };
    const double before = fraction(union_of_boundaries(models));
    const GlobalModel g = merge(models, derive_global_params(models));
    const double after = fraction(g.global_boundary());
    return {after < before && g.clusters.size() == 1,
            fmt("cut-line fraction %.3f -> %.3f, %zu global cluster(s) (need decrease and 1)", before, after,
                g.clusters.size())};
}

PipelineConfig ds9_config() {
    PipelineConfig c;
    c.node_count = 3;
    c.partition_seed = 1;
    c.regen_seed = 2;
    c.local.eps = 0.3;
    c.local.min_pts = 5;
    c.local.eps_b = 0.5;
    return c;
}

Verdict ds9_end_to_end() {
    constexpr double kCoverage = 0.80, kBudget = 60.0;
    const auto t0 = Clock::now();
    const Dataset d = preset("ds9-like", 0);
    PipelineConfig c = ds9_config();
    const PipelineReport sync = run_pipeline(d.points, c);
    c.mode = CoordinationMode::Async;
    const PipelineReport async = run_pipeline(d.points, c);
    const QualityReport q = evaluate_pipeline(sync, d);
    bool smaller = true;
    for (const auto& t : sync.transfers) smaller = smaller && t.model_bytes < t.raw_bytes;
    const bool same = sync.final_global_document == async.final_global_document;
    const double t = seconds_since(t0);
    return {q.coverage >= kCoverage && same && smaller && t < kBudget,
            fmt("coverage %.3f (need >= %.2f), sync == async: %s, model < raw on every node: %s, %.1fs", q.coverage,
                kCoverage, same ? "yes" : "no", smaller ? "yes" : "no", t)};
}

Verdict uniformity() {
    constexpr double kEps = 0.15;
    const Dataset d = preset("disk", 0);
    LocalParams lp;
    lp.eps = kEps;
    lp.min_pts = 5;
    lp.eps_b = kEps;
    const LocalModel m = build_local_model(d.points, lp, 0);
    const BoundarySet& b = m.clusters.at(0).boundary;
    const std::size_t n = m.clusters[0].representative.cardinality;
    RandomSource rng(0);
    const auto regen = random_throw(b, n, rng);
    const double cv_regen = density_cv(regen.points, kEps), cv_grid = density_cv(grid_fill(b, n), kEps);
    return {cv_regen > cv_grid, fmt("density cv: random throw %.3f, grid fill %.3f (need throw > grid)", cv_regen,
                                    cv_grid)};
}

std::vector<std::string> run_artifacts(const Dataset& d) {
    const PipelineReport r = run_pipeline(d.points, ds9_config());
    std::vector<std::string> out = {manifest(r), r.final_global_document};
    for (const auto& doc : r.model_documents) out.push_back(doc);
    std::vector<Point> pts;
    std::vector<std::int32_t> labels;
    for (const auto& c : r.regenerated.clusters) {
        for (const auto& p : c.points) {
            pts.push_back(p);
            labels.push_back(c.global_id);
        }
    }
    out.push_back(format_csv(pts, labels));
    SvgScene scene;
    scene.points = d.points;
    scene.labels = d.labels;
    for (const auto& c : r.final_global.clusters) scene.boundaries.push_back(c.boundary);
    scene.regenerated = pts;
    scene.regenerated_labels = labels;
    scene.draw_balance = true;
    out.push_back(render_svg(scene));
    return out;
}

Verdict reproducible() {
    const Dataset d = preset("ds9-like", 0);
    const auto a = run_artifacts(d), b = run_artifacts(d);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
    return {differ == 0 && a.size() == b.size(), fmt("%zu/%zu artifacts differ between identical runs", differ, a.size())};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"range queries match brute force", range_queries},
        {"clustering matches reference DBSCAN", dbscan_equivalence},
        {"balance vectors match reference", balance_vectors},
        {"disk rim recall and interior rate", disk_rim},
        {"cone beats sphere on concave rim", concave_rim},
        {"cardinality conservation", conservation},
        {"merge removes partition seam", seam},
        {"ds9-like end to end", ds9_end_to_end},
        {"random throw less uniform than grid", uniformity},
        {"identical runs are byte-identical", reproducible},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
