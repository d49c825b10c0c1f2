#include "ddc/harness.hpp"

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "ddc/errors.hpp"
#include "local_params_io.hpp"

namespace ddc {

std::string_view to_string(CoordinationMode m) { return m == CoordinationMode::Sync ? "sync" : "async"; }
std::string_view to_string(ExecutionBackend b) { return b == ExecutionBackend::Threads ? "threads" : "processes"; }

const LocalParams& PipelineConfig::params_for(std::int32_t node_id) const {
    auto it = node_overrides.find(node_id);
    return it == node_overrides.end() ? local : it->second;
}

void PipelineConfig::validate() const {
    if (node_count < 1) throw InvalidParameter("node_count must be at least 1");
    if (max_attempts_factor < 1) throw InvalidParameter("max_attempts_factor must be at least 1");
    local.validate();
    for (const auto& [id, p] : node_overrides) {
        if (id < 0 || std::size_t(id) >= node_count) {
            throw InvalidParameter("override for node " + std::to_string(id) + " outside [0, node_count)");
        }
        p.validate();
    }
    if (global_override.g_nu && !(*global_override.g_nu > 0.0 && *global_override.g_nu < std::numbers::pi / 2.0)) {
        throw InvalidParameter("global g_nu must lie in (0, pi/2)");
    }
    if (global_override.g_eps && !(*global_override.g_eps > 0.0)) {
        throw InvalidParameter("global g_eps must be positive");
    }
}

std::size_t PipelineReport::local_cardinality() const {
    std::size_t n = 0;
    for (const auto& m : local_models) n += m.total_cardinality();
    return n;
}

std::vector<std::vector<std::size_t>> partition_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw InvalidInput("cannot partition into zero parts");
    if (k > n) {
        throw InvalidInput("cannot partition " + std::to_string(n) + " points into " + std::to_string(k) + " parts");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    RandomSource rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<std::vector<std::size_t>> parts(k);
    for (std::size_t i = 0; i < n; ++i) parts[i % k].push_back(order[i]);
    for (auto& p : parts) std::sort(p.begin(), p.end());
    return parts;
}

std::vector<std::vector<Point>> partition(std::span<const Point> points, std::size_t k, std::uint64_t seed) {
    std::vector<std::vector<Point>> out;
    for (const auto& idxs : partition_indices(points.size(), k, seed)) {
        auto& part = out.emplace_back();
        part.reserve(idxs.size());
        for (std::size_t i : idxs) part.push_back(points[i]);
    }
    return out;
}

namespace {

/// What a node sends to the coordinator: its model document or an error.
struct NodeMessage {
    std::int32_t node_id = 0;
    bool ok = false;
    std::string payload;
};

/// Ordered delivery channel from nodes to the coordinator.
class Channel {
public:
    void send(NodeMessage m) {
        {
            std::lock_guard lock(mu_);
            queue_.push_back(std::move(m));
        }
        cv_.notify_one();
    }

    NodeMessage receive() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !queue_.empty(); });
        NodeMessage m = std::move(queue_.front());
        queue_.pop_front();
        return m;
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<NodeMessage> queue_;
};

NodeMessage run_node(std::int32_t node_id, std::span<const Point> part, const LocalParams& params) {
    try {
        return {node_id, true, serialize(build_local_model(part, params, node_id))};
    } catch (const std::exception& e) {
        return {node_id, false, e.what()};
    }
}

void run_threads(const std::vector<std::vector<Point>>& parts, const PipelineConfig& config, Channel& channel) {
    std::vector<std::jthread> workers;
    workers.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        workers.emplace_back([&, i] {
            const auto id = std::int32_t(i);
            channel.send(run_node(id, parts[i], config.params_for(id)));
        });
    }
}

bool write_all(int fd, std::string_view bytes) {
    while (!bytes.empty()) {
        const ssize_t n = ::write(fd, bytes.data(), bytes.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        bytes.remove_prefix(std::size_t(n));
    }
    return true;
}

/// Forks one child per node; each writes "1" or "0" followed by the model
/// document or error text, then exits. Messages are delivered in the order
/// the children finish.
void run_processes(const std::vector<std::vector<Point>>& parts, const PipelineConfig& config, Channel& channel) {
    struct Child {
        pid_t pid;
        int fd;
        std::int32_t node_id;
        std::string buffer;
    };
    std::vector<Child> children;
    std::fflush(nullptr);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto id = std::int32_t(i);
        int fds[2];
        if (::pipe(fds) != 0) throw NodeError(id, std::string("pipe failed: ") + std::strerror(errno));
        const pid_t pid = ::fork();
        if (pid < 0) throw NodeError(id, std::string("fork failed: ") + std::strerror(errno));
        if (pid == 0) {
            ::close(fds[0]);
            const NodeMessage m = run_node(id, parts[i], config.params_for(id));
            const bool ok = write_all(fds[1], m.ok ? "1" : "0") && write_all(fds[1], m.payload);
            ::close(fds[1]);
            ::_exit(ok ? 0 : 1);
        }
        ::close(fds[1]);
        children.push_back({pid, fds[0], id, {}});
    }
    std::vector<bool> open(children.size(), true);
    std::size_t remaining = children.size();
    char buf[65536];
    while (remaining > 0) {
        std::vector<pollfd> pfds;
        std::vector<std::size_t> which;
        for (std::size_t c = 0; c < children.size(); ++c) {
            if (open[c]) {
                pfds.push_back({children[c].fd, POLLIN, 0});
                which.push_back(c);
            }
        }
        if (::poll(pfds.data(), pfds.size(), -1) < 0) {
            if (errno == EINTR) continue;
            throw Error("node-error", std::string("poll failed: ") + std::strerror(errno));
        }
        for (std::size_t k = 0; k < pfds.size(); ++k) {
            if (!(pfds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            Child& ch = children[which[k]];
            const ssize_t n = ::read(ch.fd, buf, sizeof buf);
            if (n > 0) {
                ch.buffer.append(buf, std::size_t(n));
                continue;
            }
            if (n < 0 && errno == EINTR) continue;
            ::close(ch.fd);
            open[which[k]] = false;
            --remaining;
            int status = 0;
            ::waitpid(ch.pid, &status, 0);
            const bool exited_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
            if (!exited_ok || ch.buffer.empty()) {
                channel.send({ch.node_id, false, "node process terminated abnormally"});
            } else {
                channel.send({ch.node_id, ch.buffer[0] == '1', ch.buffer.substr(1)});
            }
        }
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PipelineReport run_pipeline(std::span<const Point> points, const PipelineConfig& config) {
    config.validate();
    PipelineReport report;
    report.config = config;
    const std::size_t k = config.node_count;

    auto t0 = std::chrono::steady_clock::now();
    report.partitions = partition(points, k, config.partition_seed);
    for (std::size_t i = 0; i < k; ++i) {
        report.partition_sizes.push_back(report.partitions[i].size());
        report.transfers.push_back({std::int32_t(i), format_csv(report.partitions[i], {}).size(), 0});
    }
    report.timings.push_back({"partition", seconds_since(t0)});

    // Nodes run concurrently; the coordinator consumes messages in arrival order.
    t0 = std::chrono::steady_clock::now();
    Channel channel;
    std::vector<NodeMessage> arrivals;
    if (config.backend == ExecutionBackend::Threads) {
        std::jthread producer([&] { run_threads(report.partitions, config, channel); });
        for (std::size_t i = 0; i < k; ++i) arrivals.push_back(channel.receive());
    } else {
        run_processes(report.partitions, config, channel);
        for (std::size_t i = 0; i < k; ++i) arrivals.push_back(channel.receive());
    }
    report.timings.push_back({"local", seconds_since(t0)});

    t0 = std::chrono::steady_clock::now();
    report.model_documents.assign(k, {});
    std::vector<std::optional<LocalModel>> decoded(k);
    std::vector<LocalModel> received;
    for (auto& msg : arrivals) {
        if (!msg.ok) throw NodeError(msg.node_id, msg.payload);
        report.arrival_order.push_back(msg.node_id);
        try {
            decoded[std::size_t(msg.node_id)] = deserialize_local_model(msg.payload);
        } catch (const Error& e) {
            throw NodeError(msg.node_id, std::string("model document rejected: ") + e.what());
        }
        report.transfers[std::size_t(msg.node_id)].model_bytes = msg.payload.size();
        report.model_documents[std::size_t(msg.node_id)] = std::move(msg.payload);
        if (config.mode == CoordinationMode::Async) {
            received.push_back(*decoded[std::size_t(msg.node_id)]);
            report.provisional_globals.push_back(
                merge(received, derive_global_params(received, config.global_override)));
        }
    }
    for (auto& m : decoded) report.local_models.push_back(std::move(*m));
    report.final_global = merge(report.local_models, derive_global_params(report.local_models, config.global_override));
    report.final_global_document = serialize(report.final_global);
    report.timings.push_back({"merge", seconds_since(t0)});

    t0 = std::chrono::steady_clock::now();
    report.regenerated = regenerate_all(report.final_global, config.regen_seed, config.max_attempts_factor);
    report.timings.push_back({"regenerate", seconds_since(t0)});
    return report;
}

namespace {

using detail::json;

json global_override_to_json(const GlobalParamsOverride& g) {
    json j = json::object();
    if (g.g_nu) j["g_nu"] = *g.g_nu;
    if (g.g_eps) j["g_eps"] = *g.g_eps;
    if (g.predicate) j["predicate"] = std::string(to_string(*g.predicate));
    if (g.balance) j["balance"] = std::string(to_string(*g.balance));
    return j;
}

json config_json(const PipelineConfig& c) {
    json overrides = json::object();
    for (const auto& [id, p] : c.node_overrides) overrides[std::to_string(id)] = detail::to_json(p);
    return {{"node_count", c.node_count},
            {"partition_seed", c.partition_seed},
            {"local", detail::to_json(c.local)},
            {"node_overrides", std::move(overrides)},
            {"global", global_override_to_json(c.global_override)},
            {"regen_seed", c.regen_seed},
            {"mode", std::string(to_string(c.mode))},
            {"backend", std::string(to_string(c.backend))},
            {"max_attempts_factor", c.max_attempts_factor}};
}

std::uint64_t as_seed(const json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ParseError("expected a nonnegative integer", path);
    }
    return v.get<std::uint64_t>();
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) { return detail::dump(config_json(config)); }

PipelineConfigFile parse_pipeline_config(std::string_view text) {
    using namespace detail;
    const json doc = parse_document(text);
    if (!doc.is_object()) throw ParseError("configuration must be an object", "/");
    static const std::set<std::string> known = {"node_count", "partition_seed", "local",     "node_overrides",
                                                "global",     "regen_seed",     "mode",      "backend",
                                                "max_attempts_factor",          "dataset"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw ParseError("unknown key '" + key + "'", "/" + key);
    }
    PipelineConfigFile out;
    PipelineConfig& c = out.pipeline;
    if (doc.contains("node_count")) {
        const auto n = as_int(doc["node_count"], "/node_count");
        if (n < 1) throw ParseError("node_count must be at least 1", "/node_count");
        c.node_count = std::size_t(n);
    }
    if (doc.contains("partition_seed")) c.partition_seed = as_seed(doc["partition_seed"], "/partition_seed");
    if (doc.contains("regen_seed")) c.regen_seed = as_seed(doc["regen_seed"], "/regen_seed");
    {
        // eps and min_pts are required; eps_b defaults to eps, the rest to library defaults.
        const json& lj = require(doc, "local", "");
        require(lj, "eps", "/local");
        require(lj, "min_pts", "/local");
        c.local = local_params_from_json(lj, "/local", {}, true);
        if (!lj.contains("eps_b")) c.local.eps_b = c.local.eps;
    }
    if (doc.contains("node_overrides")) {
        const json& o = doc["node_overrides"];
        if (!o.is_object()) throw ParseError("expected an object", "/node_overrides");
        for (const auto& [key, value] : o.items()) {
            std::int32_t id = 0;
            try {
                std::size_t used = 0;
                id = std::int32_t(std::stoi(key, &used));
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ParseError("node override keys must be node ids", "/node_overrides/" + key);
            }
            c.node_overrides[id] = local_params_from_json(value, "/node_overrides/" + key, c.local, true);
        }
    }
    if (doc.contains("global")) {
        const json& g = doc["global"];
        if (!g.is_object()) throw ParseError("expected an object", "/global");
        try {
            if (g.contains("g_nu")) c.global_override.g_nu = as_double(g["g_nu"], "/global/g_nu");
            if (g.contains("g_eps")) c.global_override.g_eps = as_double(g["g_eps"], "/global/g_eps");
            if (g.contains("predicate")) {
                c.global_override.predicate = parse_predicate(as_string(g["predicate"], "/global/predicate"));
            }
            if (g.contains("balance")) {
                c.global_override.balance = parse_merge_balance(as_string(g["balance"], "/global/balance"));
            }
        } catch (const InvalidParameter& e) {
            throw ParseError(e.what(), "/global");
        }
    }
    if (doc.contains("mode")) {
        const std::string m = as_string(doc["mode"], "/mode");
        if (m == "sync") c.mode = CoordinationMode::Sync;
        else if (m == "async") c.mode = CoordinationMode::Async;
        else throw ParseError("mode must be sync or async", "/mode");
    }
    if (doc.contains("backend")) {
        const std::string b = as_string(doc["backend"], "/backend");
        if (b == "threads") c.backend = ExecutionBackend::Threads;
        else if (b == "processes") c.backend = ExecutionBackend::Processes;
        else throw ParseError("backend must be threads or processes", "/backend");
    }
    if (doc.contains("max_attempts_factor")) {
        const auto f = as_int(doc["max_attempts_factor"], "/max_attempts_factor");
        if (f < 1) throw ParseError("max_attempts_factor must be at least 1", "/max_attempts_factor");
        c.max_attempts_factor = std::size_t(f);
    }
    if (doc.contains("dataset")) {
        const json& d = doc["dataset"];
        DatasetSource src;
        if (!d.is_object()) throw ParseError("expected an object", "/dataset");
        if (d.contains("preset")) src.preset = as_string(d["preset"], "/dataset/preset");
        if (d.contains("seed")) src.seed = as_seed(d["seed"], "/dataset/seed");
        if (d.contains("csv")) src.csv = as_string(d["csv"], "/dataset/csv");
        if (d.contains("header")) src.csv_options.header = d["header"].is_boolean() && d["header"].get<bool>();
        if (d.contains("labels")) src.csv_options.labels = d["labels"].is_boolean() && d["labels"].get<bool>();
        if (src.preset.empty() == src.csv.empty()) {
            throw ParseError("dataset needs exactly one of 'preset' or 'csv'", "/dataset");
        }
        out.dataset = src;
    }
    try {
        c.validate();
    } catch (const InvalidParameter& e) {
        throw ValidationError("config", e.what());
    }
    return out;
}

std::string manifest(const PipelineReport& r) {
    json nodes = json::array();
    for (std::size_t i = 0; i < r.local_models.size(); ++i) {
        const auto& m = r.local_models[i];
        nodes.push_back({{"node_id", m.node_id},
                         {"partition_size", r.partition_sizes[i]},
                         {"raw_bytes", r.transfers[i].raw_bytes},
                         {"model_bytes", r.transfers[i].model_bytes},
                         {"clusters", m.clusters.size()},
                         {"boundary_points", m.boundary_size()},
                         {"cardinality", m.total_cardinality()}});
    }
    json globals = json::array();
    for (const auto& c : r.final_global.clusters) {
        json contributing = json::array();
        for (const auto& ref : c.contributing) contributing.push_back({ref.node_id, ref.cluster_id});
        globals.push_back({{"global_id", c.global_id},
                           {"cardinality", c.cardinality},
                           {"boundary_points", c.boundary.size()},
                           {"contributing", std::move(contributing)}});
    }
    json regenerated = json::array();
    for (const auto& c : r.regenerated.clusters) {
        regenerated.push_back({{"global_id", c.global_id}, {"target", c.target_cardinality}, {"points", c.points.size()}});
    }
    json failures = json::array();
    for (const auto& f : r.regenerated.failures) failures.push_back({{"global_id", f.global_id}, {"error", f.message}});
    const auto& gp = r.final_global.params;
    json doc = {{"format_version", kFormatVersion},
                {"config", config_json(r.config)},
                {"partitions", r.partition_sizes},
                {"nodes", std::move(nodes)},
                {"global",
                 {{"params",
                   {{"g_nu", gp.g_nu},
                    {"g_eps", gp.g_eps},
                    {"predicate", std::string(to_string(gp.predicate))},
                    {"balance", std::string(to_string(gp.balance))}}},
                  {"clusters", std::move(globals)},
                  {"total_cardinality", r.final_global.total_cardinality()},
                  {"boundary_points", r.final_global.boundary_size()}}},
                {"provisional_merges", r.provisional_globals.size()},
                {"local_cardinality", r.local_cardinality()},
                {"regenerated", std::move(regenerated)},
                {"regenerated_points", r.regenerated.total_points()},
                {"failures", std::move(failures)}};
    return detail::dump(doc);
}

std::string timings_json(const PipelineReport& r) {
    json t = json::object();
    for (const auto& p : r.timings) t[p.phase] = p.seconds;
    return detail::dump(t);
}

}  // namespace ddc
