// ddc: batch driver for every pipeline phase.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.
// Errors go to stderr as "ddc: error: <kind>: <message>".

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddc/datasets.hpp"
#include "ddc/errors.hpp"
#include "ddc/global_merge.hpp"
#include "ddc/harness.hpp"
#include "ddc/local_model.hpp"
#include "ddc/metrics.hpp"
#include "ddc/regenerate.hpp"
#include "ddc/svg.hpp"

namespace fs = std::filesystem;
using namespace ddc;

namespace {

/// Output paths default into $DDC_OUT_DIR (or the working directory).
fs::path out_dir_default() {
    const char* env = std::getenv("DDC_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_out(const std::string& given, const char* default_name) {
    return given.empty() ? out_dir_default() / default_name : fs::path(given);
}

struct CsvFlags {
    bool header = false;
    bool labels = false;

    void add(CLI::App* app) {
        app->add_flag("--header", header, "Input CSV starts with a header line");
        app->add_flag("--labels", labels, "Last input column is an integer label");
    }
    CsvOptions options() const { return {header, labels}; }
};

struct NuFlags {
    double nu = BoundaryParams::kDefaultNu;
    std::optional<double> degrees;

    void add(CLI::App* app, const char* name, const char* degrees_name) {
        app->add_option(name, nu,
                        "Cone aperture in radians, in (0, pi/2). Default pi/6 (0.5236), the value found best on "
                        "2-D and 3-D test data")
            ->capture_default_str();
        app->add_option(degrees_name, degrees, "Cone aperture in degrees; overrides the radian flag");
    }
    double value() const { return degrees ? *degrees * std::numbers::pi / 180.0 : nu; }
};

std::pair<std::optional<double>, RhoMode> parse_rho(const std::string& s) {
    if (s == "auto") return {std::nullopt, RhoMode::GlobalMean};
    if (s == "auto-per-point") return {std::nullopt, RhoMode::PerPoint};
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return {v, RhoMode::GlobalMean};
    } catch (const std::exception&) {
    }
    throw InvalidParameter("rho must be a number, 'auto' or 'auto-per-point'");
}

std::vector<BoundarySet> load_boundaries(const std::string& path) {
    const std::string bytes = read_file(path);
    std::vector<BoundarySet> out;
    try {
        for (const auto& c : deserialize_global_model(bytes).clusters) out.push_back(c.boundary);
        return out;
    } catch (const ParseError&) {
    }
    for (const auto& c : deserialize_local_model(bytes).clusters) out.push_back(c.boundary);
    return out;
}

void write_regenerated(const fs::path& path, const RegenerationResult& r) {
    std::vector<Point> pts;
    std::vector<std::int32_t> labels;
    for (const auto& c : r.clusters) {
        for (const auto& p : c.points) {
            pts.push_back(p);
            labels.push_back(c.global_id);
        }
    }
    save_csv(path, pts, labels, {false, true});
}

SvgScene scene_for(const Dataset& d, std::string title) {
    SvgScene s;
    s.points = d.points;
    s.labels = d.labels;
    s.title = std::move(title);
    return s;
}

std::string prefixed(const Error& e) { return "ddc: error: " + e.kind() + ": " + e.what(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed density-based clustering through cluster boundaries"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic preset scene as CSV (last column = label)");
    std::string gen_preset, gen_out;
    std::uint64_t gen_seed = 0;
    bool gen_header = false;
    gen->add_option("--preset", gen_preset, "Scene name")
        ->required()
        ->check(CLI::IsMember(preset_names()));
    gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV (default $DDC_OUT_DIR/points.csv)");
    gen->add_flag("--header", gen_header, "Write a header line");

    // partition
    auto* part = app.add_subcommand("partition", "Split a CSV into k random equal-size partitions");
    std::string part_in, part_out;
    std::size_t part_k = 3;
    std::uint64_t part_seed = 0;
    CsvFlags part_csv;
    part->add_option("--in", part_in, "Input CSV")->required();
    part->add_option("--nodes", part_k, "Number of partitions")->capture_default_str();
    part->add_option("--seed", part_seed, "Partition seed")->capture_default_str();
    part->add_option("--out-dir", part_out, "Directory for partition_<i>.csv (default $DDC_OUT_DIR)");
    part_csv.add(part);

    // local
    auto* loc = app.add_subcommand("local", "Build one node's local model from its partition");
    std::string loc_in, loc_out, loc_pred = "cone", loc_rho = "auto";
    LocalParams lp;
    std::optional<double> loc_eps_b;
    std::int32_t loc_node = 0;
    NuFlags loc_nu;
    CsvFlags loc_csv;
    loc->add_option("--in", loc_in, "Partition CSV")->required();
    loc->add_option("--eps", lp.eps, "DBSCAN radius")->required();
    loc->add_option("--min-pts", lp.min_pts, "DBSCAN core threshold")->required();
    loc->add_option("--eps-b", loc_eps_b, "Boundary neighbourhood radius (default: --eps)");
    loc_nu.add(loc, "--nu", "--nu-degrees");
    loc->add_option("--predicate", loc_pred, "cone or sphere")
        ->check(CLI::IsMember({"cone", "sphere"}))
        ->capture_default_str();
    loc->add_option("--rho", loc_rho, "Sphere offset: number, auto, or auto-per-point")->capture_default_str();
    loc->add_option("--node-id", loc_node, "Node id recorded in the model")->capture_default_str();
    loc->add_option("--out", loc_out, "Output model (default $DDC_OUT_DIR/local.model)");
    loc_csv.add(loc);

    // merge
    auto* mrg = app.add_subcommand("merge", "Merge local models into the global model");
    std::vector<std::string> mrg_in;
    std::string mrg_out, mrg_balance, mrg_pred;
    std::optional<double> mrg_nu, mrg_nu_deg, mrg_eps;
    mrg->add_option("--in", mrg_in, "Local model documents")->required();
    mrg->add_option("--g-nu", mrg_nu, "Global aperture in radians (default: max local nu)");
    mrg->add_option("--g-nu-degrees", mrg_nu_deg, "Global aperture in degrees");
    mrg->add_option("--g-eps", mrg_eps, "Global radius (default: max local eps_b)");
    mrg->add_option("--predicate", mrg_pred, "cone or sphere (default: the models' common predicate)")
        ->check(CLI::IsMember({"cone", "sphere"}));
    mrg->add_option("--merge-balance", mrg_balance, "transmitted (default) or recomputed")
        ->check(CLI::IsMember({"transmitted", "recomputed"}));
    mrg->add_option("--out", mrg_out, "Output global model (default $DDC_OUT_DIR/global.model)");

    // regen
    auto* reg = app.add_subcommand("regen", "Regenerate clusters from a global model");
    std::string reg_in, reg_out, reg_strategy = "random-throw";
    std::uint64_t reg_seed = 0;
    std::size_t reg_factor = kDefaultMaxAttemptsFactor;
    reg->add_option("--in", reg_in, "Global model document")->required();
    reg->add_option("--seed", reg_seed, "Regeneration seed")->capture_default_str();
    reg->add_option("--max-attempts-factor", reg_factor, "Attempt budget per requested point")
        ->capture_default_str();
    reg->add_option("--strategy", reg_strategy, "random-throw (grid, perturbed-grid: not implemented)")
        ->capture_default_str();
    reg->add_option("--out", reg_out, "Output CSV, last column = global id (default $DDC_OUT_DIR/regenerated.csv)");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Run every phase from a JSON config and write a run directory");
    std::string pipe_cfg, pipe_out;
    bool pipe_balance_svg = false;
    pipe->add_option("--config", pipe_cfg, "Pipeline configuration (JSON)")->required();
    pipe->add_option("--out", pipe_out, "Run directory (default $DDC_OUT_DIR)");
    pipe->add_flag("--balance-vectors", pipe_balance_svg, "Draw balance vectors in the boundary figures");

    // eval
    auto* ev = app.add_subcommand("eval", "Run a configured pipeline and print its quality report");
    std::string ev_cfg;
    bool ev_csv = false;
    ev->add_option("--config", ev_cfg, "Pipeline configuration (JSON)")->required();
    ev->add_flag("--csv", ev_csv, "Print a CSV header and row instead of JSON");

    // plot
    auto* plt = app.add_subcommand("plot", "Render points, boundaries and regenerated points as SVG");
    std::string plt_in, plt_regen, plt_out, plt_title;
    std::vector<std::string> plt_boundary;
    bool plt_balance = false;
    CsvFlags plt_csv;
    plt->add_option("--in", plt_in, "Points CSV");
    plt->add_option("--boundary", plt_boundary, "Local or global model documents");
    plt->add_option("--regenerated", plt_regen, "Regenerated CSV (last column = global id)");
    plt->add_flag("--balance-vectors", plt_balance, "Draw balance vectors");
    plt->add_option("--title", plt_title, "Figure title");
    plt->add_option("--out", plt_out, "Output SVG (default $DDC_OUT_DIR/plot.svg)");
    plt_csv.add(plt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 1);
    }

    try {
        if (*gen) {
            const Dataset d = preset(gen_preset, gen_seed);
            save_csv(resolve_out(gen_out, "points.csv"), d.points, d.labels, {gen_header, true});
        } else if (*part) {
            const Dataset d = load_csv(part_in, part_csv.options());
            const auto parts = partition_indices(d.size(), part_k, part_seed);
            const fs::path dir = part_out.empty() ? out_dir_default() : fs::path(part_out);
            fs::create_directories(dir);
            for (std::size_t i = 0; i < parts.size(); ++i) {
                std::vector<Point> pts;
                std::vector<std::int32_t> labels;
                for (std::size_t j : parts[i]) {
                    pts.push_back(d.points[j]);
                    if (d.labelled()) labels.push_back(d.labels[j]);
                }
                save_csv(dir / ("partition_" + std::to_string(i) + ".csv"), pts, labels,
                         {part_csv.header, d.labelled()});
            }
        } else if (*loc) {
            lp.eps_b = loc_eps_b.value_or(lp.eps);
            lp.nu = loc_nu.value();
            lp.predicate = parse_predicate(loc_pred);
            std::tie(lp.rho, lp.rho_mode) = parse_rho(loc_rho);
            const Dataset d = load_csv(loc_in, loc_csv.options());
            write_file(resolve_out(loc_out, "local.model"), serialize(build_local_model(d.points, lp, loc_node)));
        } else if (*mrg) {
            std::vector<LocalModel> models;
            for (const auto& path : mrg_in) models.push_back(deserialize_local_model(read_file(path)));
            GlobalParamsOverride o;
            o.g_nu = mrg_nu_deg ? std::optional(*mrg_nu_deg * std::numbers::pi / 180.0) : mrg_nu;
            o.g_eps = mrg_eps;
            if (!mrg_pred.empty()) o.predicate = parse_predicate(mrg_pred);
            if (!mrg_balance.empty()) o.balance = parse_merge_balance(mrg_balance);
            write_file(resolve_out(mrg_out, "global.model"), serialize(merge(models, derive_global_params(models, o))));
        } else if (*reg) {
            const GlobalModel g = deserialize_global_model(read_file(reg_in));
            const auto r = regenerate_all(g, reg_seed, reg_factor, parse_regen_strategy(reg_strategy));
            write_regenerated(resolve_out(reg_out, "regenerated.csv"), r);
            for (const auto& f : r.failures) {
                std::cerr << "ddc: warning: cluster " << f.global_id << ": " << f.message << "\n";
            }
            if (!r.failures.empty()) return 2;
        } else if (*pipe || *ev) {
            const PipelineConfigFile cfg = parse_pipeline_config(read_file(*pipe ? pipe_cfg : ev_cfg));
            if (!cfg.dataset) throw ValidationError("config", "the configuration has no dataset section");
            const DatasetSource& src = *cfg.dataset;
            const Dataset data = src.preset.empty() ? load_csv(src.csv, src.csv_options) : preset(src.preset, src.seed);
            const PipelineReport r = run_pipeline(data.points, cfg.pipeline);
            if (*ev) {
                const QualityReport q = evaluate_pipeline(r, data);
                std::cout << (ev_csv ? QualityReport::csv_header() + q.csv_row() : q.to_json());
                return 0;
            }
            const fs::path dir = pipe_out.empty() ? out_dir_default() : fs::path(pipe_out);
            fs::create_directories(dir);
            for (std::size_t i = 0; i < r.partitions.size(); ++i) {
                const std::string id = std::to_string(i);
                save_csv(dir / ("partition_" + id + ".csv"), r.partitions[i]);
                write_file(dir / ("node_" + id + ".model"), r.model_documents[i]);
            }
            write_file(dir / "global.model", r.final_global_document);
            write_regenerated(dir / "regenerated.csv", r.regenerated);
            write_file(dir / "manifest.json", manifest(r));
            write_file(dir / "timings.json", timings_json(r));

            SvgScene input = scene_for(data, "input");
            write_file(dir / "input.svg", render_svg(input, &std::cerr));
            SvgScene local = scene_for(data, "local boundaries");
            for (const auto& m : r.local_models) {
                for (const auto& c : m.clusters) local.boundaries.push_back(c.boundary);
            }
            local.draw_balance = pipe_balance_svg;
            write_file(dir / "local_boundaries.svg", render_svg(local));
            SvgScene merged = scene_for(data, "merged boundaries");
            for (const auto& c : r.final_global.clusters) merged.boundaries.push_back(c.boundary);
            merged.draw_balance = pipe_balance_svg;
            write_file(dir / "global_boundaries.svg", render_svg(merged));
            SvgScene regen;
            regen.title = "regenerated clusters";
            for (const auto& c : r.regenerated.clusters) {
                for (const auto& p : c.points) {
                    regen.regenerated.push_back(p);
                    regen.regenerated_labels.push_back(c.global_id);
                }
            }
            write_file(dir / "regenerated.svg", render_svg(regen));
            for (const auto& f : r.regenerated.failures) {
                std::cerr << "ddc: warning: cluster " << f.global_id << ": " << f.message << "\n";
            }
        } else if (*plt) {
            SvgScene s;
            s.title = plt_title;
            if (!plt_in.empty()) {
                const Dataset d = load_csv(plt_in, plt_csv.options());
                s.points = d.points;
                s.labels = d.labels;
            }
            for (const auto& path : plt_boundary) {
                for (auto& b : load_boundaries(path)) s.boundaries.push_back(std::move(b));
            }
            if (!plt_regen.empty()) {
                const Dataset d = load_csv(plt_regen, {false, true});
                s.regenerated = d.points;
                s.regenerated_labels = d.labels;
            }
            s.draw_balance = plt_balance;
            write_file(resolve_out(plt_out, "plot.svg"), render_svg(s, &std::cerr));
        }
    } catch (const Error& e) {
        std::cerr << prefixed(e) << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "ddc: error: io-error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
