#include "ddc/local_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ddc/errors.hpp"
#include "ddc/spatial_index.hpp"
#include "local_params_io.hpp"

namespace ddc {

void LocalParams::validate() const {
    cluster_params().validate();
    boundary_params().validate();
}

std::size_t LocalModel::boundary_size() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.boundary.size();
    return n;
}

std::size_t LocalModel::total_cardinality() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.representative.cardinality;
    return n;
}

void LocalModel::canonicalize() {
    std::sort(clusters.begin(), clusters.end(),
              [](const LocalCluster& a, const LocalCluster& b) { return a.cluster_id < b.cluster_id; });
    for (auto& c : clusters) c.boundary.canonicalize();
}

void LocalModel::validate() const {
    try {
        params.validate();
    } catch (const InvalidParameter& e) {
        throw ValidationError("params", e.what());
    }
    std::set<std::int32_t> ids;
    std::optional<std::size_t> dim;
    for (const auto& c : clusters) {
        const std::string where = "cluster " + std::to_string(c.cluster_id);
        if (!ids.insert(c.cluster_id).second) throw ValidationError("unique-cluster-ids", where + " appears twice");
        if (c.boundary.empty()) throw ValidationError("nonempty-boundary", where + " has an empty boundary");
        if (c.representative.cardinality < 1) {
            throw ValidationError("positive-cardinality", where + " has cardinality 0");
        }
        if (!(c.representative.mean_density >= 1.0)) {
            throw ValidationError("mean-density", where + " has mean_density below 1");
        }
        if (c.boundary.size() > c.representative.cardinality) {
            throw ValidationError("boundary-within-cardinality",
                                  where + " has " + std::to_string(c.boundary.size()) +
                                      " boundary points but cardinality " +
                                      std::to_string(c.representative.cardinality));
        }
        for (const auto& m : c.boundary.members) {
            if (!dim) dim = m.point.dim();
            if (m.point.dim() != *dim || m.balance.dim() != *dim || *dim == 0) {
                throw ValidationError("uniform-dimension", where + " mixes point dimensions");
            }
            const double n = m.balance.norm();
            if (!m.balance.is_zero() && std::abs(n - 1.0) > 1e-9) {
                throw ValidationError("unit-balance", where + " has a balance vector of norm " + std::to_string(n));
            }
        }
    }
}

double mean_density(std::span<const Point> cluster, double eps_b) {
    if (cluster.empty()) throw InvalidInput("mean density of an empty cluster");
    const NeighborhoodIndex index(cluster, eps_b);
    std::size_t total = 0;
    for (const Point& p : cluster) total += index.range_query(p).size();
    return double(total) / double(cluster.size());
}

namespace {

BoundaryPoint fallback_boundary(std::span<const Point> cluster, const BalanceField& balance, std::int32_t node,
                                std::int32_t cluster_id) {
    const std::size_t d = cluster.front().dim();
    std::vector<double> c(d, 0.0);
    for (const Point& p : cluster) {
        for (std::size_t a = 0; a < d; ++a) c[a] += p[a];
    }
    for (double& x : c) x /= double(cluster.size());
    const Point centroid(std::move(c));
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        const double dd = squared_dist(cluster[i], centroid);
        if (dd > best_d) {
            best_d = dd;
            best = i;
        }
    }
    Vector b = balance[best];
    if (b.is_zero()) b = normalize(cluster[best] - centroid);
    return BoundaryPoint{cluster[best], b, node, cluster_id};
}

}  // namespace

LocalModel build_local_model(std::span<const Point> partition, const LocalParams& params, std::int32_t node_id) {
    params.validate();
    return build_local_model(partition, params, node_id, dbscan_clusterer(params.cluster_params()));
}

LocalModel build_local_model(std::span<const Point> partition, const LocalParams& params, std::int32_t node_id,
                             const LocalClusterer& clusterer) {
    params.validate();
    LocalModel model;
    model.node_id = node_id;
    model.params = params;
    const Clustering clustering = clusterer(partition);
    const BoundaryParams bparams = params.boundary_params();

    for (std::size_t k = 0; k < clustering.cluster_count; ++k) {
        const auto id = std::int32_t(k);
        const std::vector<Point> members = cluster_points(partition, clustering, id);
        const NeighborhoodIndex index(members, params.eps_b);
        const BalanceField balance = balance_field(index);

        LocalCluster cluster;
        cluster.cluster_id = id;
        cluster.representative.cardinality = members.size();
        std::size_t density_total = 0;
        for (std::size_t i = 0; i < members.size(); ++i) density_total += index.neighbors_of(i).size() + 1;
        cluster.representative.mean_density = double(density_total) / double(members.size());

        for (std::size_t i : detect_boundary_indices(index, balance, bparams)) {
            cluster.boundary.members.push_back(BoundaryPoint{members[i], balance[i], node_id, id});
        }
        if (cluster.boundary.empty()) {
            cluster.boundary.members.push_back(fallback_boundary(members, balance, node_id, id));
        }
        model.clusters.push_back(std::move(cluster));
    }
    model.canonicalize();
    return model;
}

std::string rho_to_string(const std::optional<double>& rho, RhoMode mode) {
    if (rho) return std::to_string(*rho);
    return mode == RhoMode::PerPoint ? "auto-per-point" : "auto";
}

namespace detail {

json to_json(const LocalParams& p) {
    json j = json::object();
    j["eps"] = p.eps;
    j["min_pts"] = p.min_pts;
    j["eps_b"] = p.eps_b;
    j["nu"] = p.nu;
    j["predicate"] = std::string(to_string(p.predicate));
    if (p.rho) {
        j["rho"] = *p.rho;
    } else {
        j["rho"] = p.rho_mode == RhoMode::PerPoint ? "auto-per-point" : "auto";
    }
    return j;
}

LocalParams local_params_from_json(const json& j, const std::string& path, LocalParams base, bool partial) {
    if (!j.is_object()) throw ParseError("expected an object", path);
    LocalParams p = base;
    auto has = [&](const char* k) { return !partial || j.contains(k); };
    if (has("eps")) p.eps = as_double(require(j, "eps", path), path + "/eps");
    if (has("min_pts")) {
        const auto v = as_int(require(j, "min_pts", path), path + "/min_pts");
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            throw ParseError("integer out of range", path + "/min_pts");
        }
        p.min_pts = int(v);
    }
    if (has("eps_b")) p.eps_b = as_double(require(j, "eps_b", path), path + "/eps_b");
    if (has("nu")) p.nu = as_double(require(j, "nu", path), path + "/nu");
    if (has("predicate")) {
        const std::string s = as_string(require(j, "predicate", path), path + "/predicate");
        try {
            p.predicate = parse_predicate(s);
        } catch (const InvalidParameter& e) {
            throw ParseError(e.what(), path + "/predicate");
        }
    }
    if (has("rho")) {
        const json& r = require(j, "rho", path);
        if (r.is_string()) {
            const std::string s = r.get<std::string>();
            if (s == "auto") {
                p.rho.reset();
                p.rho_mode = RhoMode::GlobalMean;
            } else if (s == "auto-per-point") {
                p.rho.reset();
                p.rho_mode = RhoMode::PerPoint;
            } else {
                throw ParseError("rho must be a number, \"auto\" or \"auto-per-point\"", path + "/rho");
            }
        } else {
            p.rho = as_double(r, path + "/rho");
        }
    }
    return p;
}

}  // namespace detail

std::string serialize(const LocalModel& model) {
    using detail::json;
    LocalModel m = model;
    m.canonicalize();
    json clusters = json::array();
    for (const auto& c : m.clusters) {
        json boundary = json::array();
        for (const auto& b : c.boundary.members) {
            boundary.push_back({{"point", detail::to_json(b.point.coords())},
                                {"balance", detail::to_json(b.balance.components())}});
        }
        clusters.push_back({{"cluster_id", c.cluster_id},
                            {"cardinality", c.representative.cardinality},
                            {"mean_density", c.representative.mean_density},
                            {"boundary", std::move(boundary)}});
    }
    json doc = {{"format_version", kFormatVersion},
                {"node_id", m.node_id},
                {"params", detail::to_json(m.params)},
                {"clusters", std::move(clusters)}};
    return detail::dump(doc);
}

LocalModel deserialize_local_model(std::string_view bytes) {
    using namespace detail;
    const json doc = parse_document(bytes);
    const json& version = require(doc, "format_version", "");
    const std::int64_t v = as_int(version, "/format_version");
    if (v != kFormatVersion) throw UnsupportedVersion(v);

    LocalModel m;
    m.node_id = as_int32(require(doc, "node_id", ""), "/node_id");
    m.params = local_params_from_json(require(doc, "params", ""), "/params");
    const json& clusters = as_array(require(doc, "clusters", ""), "/clusters");
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const std::string cp = "/clusters/" + std::to_string(ci);
        const json& cj = clusters[ci];
        LocalCluster c;
        c.cluster_id = as_int32(require(cj, "cluster_id", cp), cp + "/cluster_id");
        const std::int64_t card = as_int(require(cj, "cardinality", cp), cp + "/cardinality");
        if (card < 0) throw ParseError("negative cardinality", cp + "/cardinality");
        c.representative.cardinality = std::size_t(card);
        c.representative.mean_density = as_double(require(cj, "mean_density", cp), cp + "/mean_density");
        const json& boundary = as_array(require(cj, "boundary", cp), cp + "/boundary");
        for (std::size_t bi = 0; bi < boundary.size(); ++bi) {
            const std::string bp = cp + "/boundary/" + std::to_string(bi);
            try {
                c.boundary.members.push_back(
                    BoundaryPoint{as_point(require(boundary[bi], "point", bp), bp + "/point"),
                                  as_vector(require(boundary[bi], "balance", bp), bp + "/balance"), m.node_id,
                                  c.cluster_id});
            } catch (const InvalidInput& e) {
                throw ParseError(e.what(), bp);
            }
        }
        m.clusters.push_back(std::move(c));
    }
    m.validate();
    m.canonicalize();
    return m;
}

}  // namespace ddc
