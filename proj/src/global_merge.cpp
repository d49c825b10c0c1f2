#include "ddc/global_merge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "ddc/errors.hpp"
#include "ddc/spatial_index.hpp"
#include "json_io.hpp"

namespace ddc {

std::string_view to_string(MergeBalance b) {
    return b == MergeBalance::Transmitted ? "transmitted" : "recomputed";
}

MergeBalance parse_merge_balance(std::string_view s) {
    if (s == "transmitted") return MergeBalance::Transmitted;
    if (s == "recomputed") return MergeBalance::Recomputed;
    throw InvalidParameter("unknown merge balance '" + std::string(s) + "' (expected transmitted or recomputed)");
}

void GlobalParams::validate() const {
    if (!(g_nu > 0.0 && g_nu < std::numbers::pi / 2.0)) {
        throw InvalidParameter("g_nu must lie in (0, pi/2), got " + std::to_string(g_nu));
    }
    if (!(g_eps > 0.0) || !std::isfinite(g_eps)) {
        throw InvalidParameter("g_eps must be positive, got " + std::to_string(g_eps));
    }
}

GlobalParams derive_global_params(std::span<const LocalModel> models, const GlobalParamsOverride& override) {
    if (models.empty()) throw InvalidInput("cannot derive global parameters from zero local models");
    GlobalParams g;
    g.g_nu = 0.0;
    g.g_eps = 0.0;
    g.predicate = models.front().params.predicate;
    for (const auto& m : models) {
        g.g_nu = std::max(g.g_nu, m.params.nu);
        g.g_eps = std::max(g.g_eps, m.params.eps_b);
        if (m.params.predicate != g.predicate) g.predicate = BoundaryPredicate::Cone;
    }
    if (override.g_nu) g.g_nu = *override.g_nu;
    if (override.g_eps) g.g_eps = *override.g_eps;
    if (override.predicate) g.predicate = *override.predicate;
    if (override.balance) g.balance = *override.balance;
    g.validate();
    return g;
}

std::size_t GlobalModel::total_cardinality() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.cardinality;
    return n;
}

std::size_t GlobalModel::boundary_size() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.boundary.size();
    return n;
}

BoundarySet GlobalModel::global_boundary() const {
    BoundarySet out;
    for (const auto& c : clusters) {
        out.members.insert(out.members.end(), c.boundary.members.begin(), c.boundary.members.end());
    }
    out.canonicalize();
    return out;
}

void GlobalModel::validate() const {
    try {
        params.validate();
    } catch (const InvalidParameter& e) {
        throw ValidationError("params", e.what());
    }
    std::set<LocalClusterRef> seen_refs;
    std::set<std::int32_t> ids;
    std::vector<const BoundaryPoint*> all;
    for (const auto& c : clusters) {
        const std::string where = "global cluster " + std::to_string(c.global_id);
        if (!ids.insert(c.global_id).second) throw ValidationError("unique-global-ids", where + " appears twice");
        if (c.boundary.empty()) throw ValidationError("nonempty-boundary", where + " has an empty boundary");
        if (c.cardinality < 1) throw ValidationError("positive-cardinality", where + " has cardinality 0");
        if (c.contributing.empty()) throw ValidationError("contributors", where + " has no contributing cluster");
        for (const auto& r : c.contributing) {
            if (!seen_refs.insert(r).second) {
                throw ValidationError("single-attribution", "local cluster (" + std::to_string(r.node_id) + ", " +
                                                                std::to_string(r.cluster_id) +
                                                                ") contributes to two global clusters");
            }
        }
        for (const auto& m : c.boundary.members) all.push_back(&m);
    }
    std::sort(all.begin(), all.end(), [](auto* a, auto* b) { return canonical_less(*a, *b); });
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (*all[i] == *all[i - 1]) throw ValidationError("disjoint-boundaries", "a boundary point appears twice");
    }
}

BoundarySet union_of_boundaries(std::span<const LocalModel> models) {
    BoundarySet pool;
    for (const auto& m : models) {
        for (const auto& c : m.clusters) {
            for (BoundaryPoint b : c.boundary.members) {
                b.source_node = m.node_id;
                b.source_cluster = c.cluster_id;
                pool.members.push_back(std::move(b));
            }
        }
    }
    pool.canonicalize();
    return pool;
}

namespace {

/// Connected components of the radius graph of `index`; ids follow the
/// lowest member index.
std::vector<std::size_t> components(const NeighborhoodIndex& index) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> comp(index.size(), unset);
    std::size_t next = 0;
    for (std::size_t s = 0; s < index.size(); ++s) {
        if (comp[s] != unset) continue;
        comp[s] = next;
        std::deque<std::size_t> q{s};
        while (!q.empty()) {
            const std::size_t i = q.front();
            q.pop_front();
            for (std::size_t j : index.neighbors_of(i)) {
                if (comp[j] == unset) {
                    comp[j] = next;
                    q.push_back(j);
                }
            }
        }
        ++next;
    }
    return comp;
}

template <class Count>
std::size_t plurality(const std::map<std::size_t, Count>& counts) {
    std::size_t best = counts.begin()->first;
    Count best_n = counts.begin()->second;
    for (const auto& [k, n] : counts) {
        if (n > best_n) {
            best = k;
            best_n = n;
        }
    }
    return best;
}

}  // namespace

GlobalModel merge(std::span<const LocalModel> models, const GlobalParams& params) {
    params.validate();
    GlobalModel out;
    out.params = params;

    std::map<LocalClusterRef, std::size_t> cardinality;
    for (const auto& m : models) {
        for (const auto& c : m.clusters) {
            const LocalClusterRef ref{m.node_id, c.cluster_id};
            if (!cardinality.emplace(ref, c.representative.cardinality).second) {
                throw InvalidInput("local cluster (" + std::to_string(ref.node_id) + ", " +
                                   std::to_string(ref.cluster_id) + ") supplied twice");
            }
        }
    }

    const BoundarySet pool = union_of_boundaries(models);
    if (pool.empty()) return out;
    const std::vector<Point> pool_points = pool.points();
    require_dimension(pool_points, pool_points.front().dim());

    // Boundary check over the pool.
    const NeighborhoodIndex pool_index(pool_points, params.g_eps);
    BalanceField balance;
    if (params.balance == MergeBalance::Transmitted) {
        for (const auto& m : pool.members) balance.push_back(m.balance);
    } else {
        balance = balance_field(pool_index);
    }
    const BoundaryParams bparams{params.g_eps, params.g_nu, std::nullopt, RhoMode::GlobalMean, params.predicate};
    const std::vector<std::size_t> survivors = detect_boundary_indices(pool_index, balance, bparams);

    // Components over the survivors.
    std::vector<Point> gb_points;
    for (std::size_t i : survivors) gb_points.push_back(pool_points[i]);
    const std::vector<std::size_t> gb_comp =
        gb_points.empty() ? std::vector<std::size_t>{} : components(NeighborhoodIndex(gb_points, params.g_eps));
    std::size_t n_comp = gb_comp.empty() ? 0 : *std::max_element(gb_comp.begin(), gb_comp.end()) + 1;

    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pool_to_gb(pool.size(), none);
    for (std::size_t k = 0; k < survivors.size(); ++k) pool_to_gb[survivors[k]] = k;

    std::map<LocalClusterRef, std::vector<std::size_t>> pool_members_of;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool_members_of[{pool.members[i].source_node, pool.members[i].source_cluster}].push_back(i);
    }

    // Attribute local clusters to components.
    std::map<LocalClusterRef, std::size_t> assigned;
    std::vector<std::vector<std::size_t>> singleton_members;  // pool indices, per extra cluster
    std::vector<std::size_t> pool_comp;                          // lazily computed
    for (const auto& [ref, idxs] : pool_members_of) {
        std::map<std::size_t, std::size_t> votes;
        for (std::size_t i : idxs) {
            if (pool_to_gb[i] != none) ++votes[gb_comp[pool_to_gb[i]]];
        }
        if (!votes.empty()) {
            assigned[ref] = plurality(votes);
            continue;
        }
        if (pool_comp.empty()) pool_comp = components(pool_index);
        std::size_t best = none;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i : idxs) {
            for (std::size_t k = 0; k < survivors.size(); ++k) {
                if (pool_comp[survivors[k]] != pool_comp[i]) continue;
                const double d = squared_dist(pool_points[i], gb_points[k]);
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
        }
        if (best != none) {
            assigned[ref] = gb_comp[best];
        } else {
            assigned[ref] = n_comp + singleton_members.size();
            singleton_members.push_back(idxs);
        }
    }

    // Fold orphan components into the cluster their sources went to.
    std::vector<bool> has_owner(n_comp + singleton_members.size(), false);
    for (const auto& [ref, c] : assigned) has_owner[c] = true;
    std::vector<std::map<std::size_t, std::size_t>> orphan_votes(n_comp);
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        if (has_owner[gb_comp[k]]) continue;
        const auto& m = pool.members[survivors[k]];
        ++orphan_votes[gb_comp[k]][assigned.at({m.source_node, m.source_cluster})];
    }
    std::vector<std::size_t> target(n_comp + singleton_members.size());
    for (std::size_t c = 0; c < target.size(); ++c) {
        target[c] = (c < n_comp && !has_owner[c]) ? plurality(orphan_votes[c]) : c;
    }

    std::map<std::size_t, GlobalCluster> groups;
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        groups[target[gb_comp[k]]].boundary.members.push_back(pool.members[survivors[k]]);
    }
    for (std::size_t s = 0; s < singleton_members.size(); ++s) {
        auto& g = groups[n_comp + s];
        for (std::size_t i : singleton_members[s]) g.boundary.members.push_back(pool.members[i]);
    }
    for (const auto& [ref, c] : assigned) {
        auto& g = groups.at(target[c]);
        g.contributing.push_back(ref);
        g.cardinality += cardinality.at(ref);
    }
    // Local clusters without any boundary point cannot occur in valid models,
    // but keep their cardinality from vanishing silently.
    for (const auto& [ref, n] : cardinality) {
        if (!assigned.contains(ref)) {
            throw InvalidInput("local cluster (" + std::to_string(ref.node_id) + ", " +
                               std::to_string(ref.cluster_id) + ") has no boundary points");
        }
    }

    for (auto& [key, g] : groups) {
        g.boundary.canonicalize();
        std::sort(g.contributing.begin(), g.contributing.end());
        out.clusters.push_back(std::move(g));
    }
    std::sort(out.clusters.begin(), out.clusters.end(), [](const GlobalCluster& a, const GlobalCluster& b) {
        return canonical_less(a.boundary.members.front(), b.boundary.members.front());
    });
    for (std::size_t i = 0; i < out.clusters.size(); ++i) out.clusters[i].global_id = std::int32_t(i);
    return out;
}

std::string serialize(const GlobalModel& model) {
    using detail::json;
    json clusters = json::array();
    std::vector<GlobalCluster> sorted = model.clusters;
    std::sort(sorted.begin(), sorted.end(),
              [](const GlobalCluster& a, const GlobalCluster& b) { return a.global_id < b.global_id; });
    for (auto& c : sorted) {
        c.boundary.canonicalize();
        json contributing = json::array();
        for (const auto& r : c.contributing) contributing.push_back({r.node_id, r.cluster_id});
        json boundary = json::array();
        for (const auto& b : c.boundary.members) {
            boundary.push_back({{"point", detail::to_json(b.point.coords())},
                                {"balance", detail::to_json(b.balance.components())},
                                {"source", {b.source_node, b.source_cluster}}});
        }
        clusters.push_back({{"global_id", c.global_id},
                            {"cardinality", c.cardinality},
                            {"contributing", std::move(contributing)},
                            {"boundary", std::move(boundary)}});
    }
    json params = {{"g_nu", model.params.g_nu},
                   {"g_eps", model.params.g_eps},
                   {"predicate", std::string(to_string(model.params.predicate))},
                   {"balance", std::string(to_string(model.params.balance))}};
    json doc = {{"format_version", kFormatVersion}, {"params", std::move(params)}, {"clusters", std::move(clusters)}};
    return detail::dump(doc);
}

GlobalModel deserialize_global_model(std::string_view bytes) {
    using namespace detail;
    const json doc = parse_document(bytes);
    const std::int64_t v = as_int(require(doc, "format_version", ""), "/format_version");
    if (v != kFormatVersion) throw UnsupportedVersion(v);

    GlobalModel m;
    const json& pj = require(doc, "params", "");
    m.params.g_nu = as_double(require(pj, "g_nu", "/params"), "/params/g_nu");
    m.params.g_eps = as_double(require(pj, "g_eps", "/params"), "/params/g_eps");
    try {
        m.params.predicate = parse_predicate(as_string(require(pj, "predicate", "/params"), "/params/predicate"));
        m.params.balance = parse_merge_balance(as_string(require(pj, "balance", "/params"), "/params/balance"));
    } catch (const InvalidParameter& e) {
        throw ParseError(e.what(), "/params");
    }

    auto ref_from = [](const json& r, const std::string& path) {
        if (!r.is_array() || r.size() != 2) throw ParseError("expected [node_id, cluster_id]", path);
        return LocalClusterRef{as_int32(r[0], path + "/0"), as_int32(r[1], path + "/1")};
    };

    const json& clusters = as_array(require(doc, "clusters", ""), "/clusters");
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const std::string cp = "/clusters/" + std::to_string(ci);
        const json& cj = clusters[ci];
        GlobalCluster c;
        c.global_id = as_int32(require(cj, "global_id", cp), cp + "/global_id");
        const std::int64_t card = as_int(require(cj, "cardinality", cp), cp + "/cardinality");
        if (card < 0) throw ParseError("negative cardinality", cp + "/cardinality");
        c.cardinality = std::size_t(card);
        const json& contributing = as_array(require(cj, "contributing", cp), cp + "/contributing");
        for (std::size_t ri = 0; ri < contributing.size(); ++ri) {
            c.contributing.push_back(ref_from(contributing[ri], cp + "/contributing/" + std::to_string(ri)));
        }
        std::sort(c.contributing.begin(), c.contributing.end());
        const json& boundary = as_array(require(cj, "boundary", cp), cp + "/boundary");
        for (std::size_t bi = 0; bi < boundary.size(); ++bi) {
            const std::string bp = cp + "/boundary/" + std::to_string(bi);
            const LocalClusterRef src = ref_from(require(boundary[bi], "source", bp), bp + "/source");
            try {
                c.boundary.members.push_back(BoundaryPoint{as_point(require(boundary[bi], "point", bp), bp + "/point"),
                                                           as_vector(require(boundary[bi], "balance", bp), bp + "/balance"),
                                                           src.node_id, src.cluster_id});
            } catch (const InvalidInput& e) {
                throw ParseError(e.what(), bp);
            }
        }
        c.boundary.canonicalize();
        m.clusters.push_back(std::move(c));
    }
    std::sort(m.clusters.begin(), m.clusters.end(),
              [](const GlobalCluster& a, const GlobalCluster& b) { return a.global_id < b.global_id; });
    m.validate();
    return m;
}

}  // namespace ddc
