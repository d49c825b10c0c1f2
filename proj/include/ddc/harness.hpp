#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/datasets.hpp"
#include "ddc/global_merge.hpp"
#include "ddc/local_model.hpp"
#include "ddc/regenerate.hpp"

namespace ddc {

/// Sync: merge once after every model has arrived.
/// Async: merge provisionally on each arrival; the merge over all models is final.
enum class CoordinationMode { Sync, Async };

/// Threads: one thread per node in this process.
/// Processes: one forked child per node, models sent back over a pipe.
enum class ExecutionBackend { Threads, Processes };

std::string_view to_string(CoordinationMode m);
std::string_view to_string(ExecutionBackend b);

struct PipelineConfig {
    std::size_t node_count = 3;
    std::uint64_t partition_seed = 0;
    LocalParams local;
    std::map<std::int32_t, LocalParams> node_overrides;
    GlobalParamsOverride global_override;
    std::uint64_t regen_seed = 0;
    CoordinationMode mode = CoordinationMode::Sync;
    ExecutionBackend backend = ExecutionBackend::Threads;
    std::size_t max_attempts_factor = kDefaultMaxAttemptsFactor;

    const LocalParams& params_for(std::int32_t node_id) const;
    void validate() const;
};

/// Where the pipeline subcommand reads its points from.
struct DatasetSource {
    std::string preset;  ///< preset name, or empty when reading a CSV
    std::uint64_t seed = 0;
    std::string csv;
    CsvOptions csv_options;
};

struct PipelineConfigFile {
    PipelineConfig pipeline;
    std::optional<DatasetSource> dataset;
};

/// JSON configuration. Unknown keys are rejected.
PipelineConfigFile parse_pipeline_config(std::string_view text);
std::string config_to_json(const PipelineConfig& config);

struct NodeTransfer {
    std::int32_t node_id = 0;
    std::size_t raw_bytes = 0;    ///< partition as CSV
    std::size_t model_bytes = 0;  ///< serialized local model
};

struct PhaseTiming {
    std::string phase;
    double seconds = 0.0;
};

struct PipelineReport {
    PipelineConfig config;
    std::vector<std::size_t> partition_sizes;
    std::vector<std::vector<Point>> partitions;
    std::vector<std::string> model_documents;  ///< by node id
    std::vector<LocalModel> local_models;      ///< decoded documents, by node id
    std::vector<std::int32_t> arrival_order;
    std::vector<GlobalModel> provisional_globals;  ///< async only
    GlobalModel final_global;
    std::string final_global_document;
    RegenerationResult regenerated;
    std::vector<NodeTransfer> transfers;
    std::vector<PhaseTiming> timings;

    std::size_t local_cardinality() const;
};

/// Uniform random assignment to k parts whose sizes differ by at most one;
/// each part keeps input order. Throws InvalidInput when k is 0 or k > n.
std::vector<std::vector<std::size_t>> partition_indices(std::size_t n, std::size_t k, std::uint64_t seed);
std::vector<std::vector<Point>> partition(std::span<const Point> points, std::size_t k, std::uint64_t seed);

/// Runs partition, local modelling on every node, merge and regeneration.
/// Every model crosses to the coordinator only as its serialized document.
/// Throws NodeError for failures attributable to one node.
PipelineReport run_pipeline(std::span<const Point> points, const PipelineConfig& config);

/// Deterministic run summary (no timings).
std::string manifest(const PipelineReport& report);
std::string timings_json(const PipelineReport& report);

}  // namespace ddc
