#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swarmcluster/clustering.hpp"
#include "swarmcluster/dataset.hpp"
#include "swarmcluster/metrics.hpp"
#include "swarmcluster/pso.hpp"
#include "swarmcluster/subtractive.hpp"

#ifndef SWARMCLUSTER_DATA_DIR
#define SWARMCLUSTER_DATA_DIR "data"
#endif

namespace swarmcluster {

using json = nlohmann::ordered_json;

/// Configuration or validation problem; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class AlgorithmKind { kmeans, pso, sc_brapso, subtractive_only };

inline std::string to_string(AlgorithmKind kind) {
    switch (kind) {
        case AlgorithmKind::kmeans: return "kmeans";
        case AlgorithmKind::pso: return "pso";
        case AlgorithmKind::sc_brapso: return "sc-brapso";
        case AlgorithmKind::subtractive_only: return "subtractive-only";
    }
    return "?";
}

inline AlgorithmKind algorithm_from_string(const std::string& name, const std::string& where) {
    if (name == "kmeans") return AlgorithmKind::kmeans;
    if (name == "pso") return AlgorithmKind::pso;
    if (name == "sc-brapso") return AlgorithmKind::sc_brapso;
    if (name == "subtractive-only") return AlgorithmKind::subtractive_only;
    throw ConfigError("config: unknown algorithm '" + name + "' at " + where);
}

struct KmeansOpts {
    std::size_t max_iters = 100;
    double tol = 1e-6;
    bool operator==(const KmeansOpts&) const = default;
};

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::kmeans;
    std::optional<std::size_t> k;
    SubtractiveParams subtractive;
    PsoParams pso;
    KmeansOpts kmeans;
    bool lloyd_refine = true;
    bool refine_gbest_only = false;
    double seed_fraction = 0.0;
    bool normalize = false;  // kmeans/pso only: search normalized, report original units

    bool operator==(const AlgorithmSpec&) const = default;
};

struct DatasetSpec {
    std::string builtin;  // one of the bundled names; empty when a path is given
    std::string path;
    CsvSchema schema;
    bool operator==(const DatasetSpec&) const = default;

    std::string display_name() const {
        if (!builtin.empty()) return builtin;
        return std::filesystem::path(path).stem().string();
    }
};

struct ExperimentConfig {
    DatasetSpec dataset;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::uint64_t> seeds;
    std::string report_path;
    std::optional<std::string> trace_dir;

    bool operator==(const ExperimentConfig&) const = default;
};

/// One (algorithm, seed) outcome. Optional fields are blank in the CSV;
/// a failed run keeps only identity fields and wall time.
struct ReportRow {
    std::string dataset;
    std::string algorithm;
    std::uint64_t seed = 0;
    std::optional<std::size_t> k;
    std::optional<double> sicd;
    std::optional<double> error_rate_matching;
    std::optional<double> error_rate_purity;
    std::optional<std::size_t> convergence_iteration;
    std::optional<double> min_inter_cluster;
    std::size_t iterations_run = 0;
    double wall_ms = 0.0;
    bool failed = false;
};

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

namespace config_detail {

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("config: unknown key '" + where + "/" + key + "'");
    }
}

template <typename T>
T require_type(const json& value, const char* type_name, const std::string& where) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: expected " + std::string(type_name) + " at " + where);
    }
}

inline SubtractiveParams parse_subtractive(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"ra", "rb_factor", "eps_up", "eps_down", "k_max",
                              "kernel_denominator"},
                        where);
    SubtractiveParams p;
    if (obj.contains("ra")) p.ra = require_type<double>(obj["ra"], "number", where + "/ra");
    if (obj.contains("rb_factor"))
        p.rb_factor = require_type<double>(obj["rb_factor"], "number", where + "/rb_factor");
    if (obj.contains("eps_up"))
        p.eps_up = require_type<double>(obj["eps_up"], "number", where + "/eps_up");
    if (obj.contains("eps_down"))
        p.eps_down = require_type<double>(obj["eps_down"], "number", where + "/eps_down");
    if (obj.contains("k_max"))
        p.k_max = require_type<std::size_t>(obj["k_max"], "non-negative integer", where + "/k_max");
    if (obj.contains("kernel_denominator"))
        p.kernel_denominator = require_type<double>(obj["kernel_denominator"], "number",
                                                    where + "/kernel_denominator");
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config: " + std::string(e.what()) + " at " + where);
    }
    return p;
}

inline PsoParams parse_pso(const json& obj, const std::string& where) {
    reject_unknown_keys(obj,
                        {"swarm_size", "c1", "c2", "w_max", "w_min", "v_max_factor",
                         "max_iters", "stall_window", "stall_tol", "inertia", "boundary"},
                        where);
    PsoParams p;
    if (obj.contains("swarm_size"))
        p.swarm_size = require_type<std::size_t>(obj["swarm_size"], "positive integer",
                                                 where + "/swarm_size");
    if (obj.contains("c1")) p.c1 = require_type<double>(obj["c1"], "number", where + "/c1");
    if (obj.contains("c2")) p.c2 = require_type<double>(obj["c2"], "number", where + "/c2");
    if (obj.contains("w_max"))
        p.w_max = require_type<double>(obj["w_max"], "number", where + "/w_max");
    if (obj.contains("w_min"))
        p.w_min = require_type<double>(obj["w_min"], "number", where + "/w_min");
    if (obj.contains("v_max_factor"))
        p.v_max_factor =
            require_type<double>(obj["v_max_factor"], "number", where + "/v_max_factor");
    if (obj.contains("max_iters"))
        p.max_iters =
            require_type<std::size_t>(obj["max_iters"], "positive integer", where + "/max_iters");
    if (obj.contains("stall_window"))
        p.stall_window = require_type<std::size_t>(obj["stall_window"], "positive integer",
                                                   where + "/stall_window");
    if (obj.contains("stall_tol"))
        p.stall_tol = require_type<double>(obj["stall_tol"], "number", where + "/stall_tol");
    if (obj.contains("inertia")) {
        const auto s = require_type<std::string>(obj["inertia"], "string", where + "/inertia");
        if (s == "exponential")
            p.inertia = InertiaSchedule::exponential;
        else if (s == "linear")
            p.inertia = InertiaSchedule::linear;
        else
            throw ConfigError("config: unknown inertia schedule '" + s + "' at " + where);
    }
    if (obj.contains("boundary")) {
        const auto s = require_type<std::string>(obj["boundary"], "string", where + "/boundary");
        if (s == "revert")
            p.boundary = BoundaryMode::revert;
        else if (s == "revert-zero-velocity")
            p.boundary = BoundaryMode::revert_zero_vel;
        else
            throw ConfigError("config: unknown boundary mode '" + s + "' at " + where);
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config: " + std::string(e.what()) + " at " + where);
    }
    return p;
}

inline AlgorithmSpec parse_algorithm_fields(const json& obj, const std::string& where) {
    AlgorithmSpec spec;
    if (!obj.contains("algorithm"))
        throw ConfigError("config: missing key '" + where + "/algorithm'");
    spec.kind = algorithm_from_string(
        require_type<std::string>(obj["algorithm"], "string", where + "/algorithm"), where);
    if (obj.contains("k"))
        spec.k = require_type<std::size_t>(obj["k"], "positive integer", where + "/k");
    if (obj.contains("subtractive"))
        spec.subtractive = parse_subtractive(obj["subtractive"], where + "/subtractive");
    if (obj.contains("pso")) spec.pso = parse_pso(obj["pso"], where + "/pso");
    if (obj.contains("kmeans")) {
        const json& km = obj["kmeans"];
        reject_unknown_keys(km, {"max_iters", "tol"}, where + "/kmeans");
        if (km.contains("max_iters"))
            spec.kmeans.max_iters = require_type<std::size_t>(km["max_iters"], "positive integer",
                                                              where + "/kmeans/max_iters");
        if (km.contains("tol"))
            spec.kmeans.tol = require_type<double>(km["tol"], "number", where + "/kmeans/tol");
    }
    if (obj.contains("lloyd_refine"))
        spec.lloyd_refine = require_type<bool>(obj["lloyd_refine"], "bool", where + "/lloyd_refine");
    if (obj.contains("refine_gbest_only"))
        spec.refine_gbest_only =
            require_type<bool>(obj["refine_gbest_only"], "bool", where + "/refine_gbest_only");
    if (obj.contains("seed_fraction"))
        spec.seed_fraction =
            require_type<double>(obj["seed_fraction"], "number", where + "/seed_fraction");
    if (obj.contains("normalize"))
        spec.normalize = require_type<bool>(obj["normalize"], "bool", where + "/normalize");

    // algorithm-specific requirements
    const std::string name = to_string(spec.kind);
    const bool needs_k =
        spec.kind == AlgorithmKind::kmeans || spec.kind == AlgorithmKind::pso;
    if (needs_k && !spec.k)
        throw ConfigError("config: algorithm '" + name + "' requires 'k' at " + where);
    if (!needs_k && spec.k)
        throw ConfigError("config: algorithm '" + name + "' must not fix 'k' at " + where);
    if (spec.normalize && !needs_k)
        throw ConfigError("config: 'normalize' only applies to kmeans/pso at " + where);
    if (spec.k && *spec.k < 1)
        throw ConfigError("config: 'k' must be >= 1 at " + where);
    if (spec.seed_fraction < 0.0 || spec.seed_fraction > 1.0)
        throw ConfigError("config: 'seed_fraction' must be in [0,1] at " + where);
    return spec;
}

inline DatasetSpec parse_dataset(const json& value, const std::string& where) {
    DatasetSpec spec;
    if (value.is_string()) {
        spec.builtin = value.get<std::string>();
        try {
            builtin_descriptor(spec.builtin);
        } catch (const std::invalid_argument&) {
            throw ConfigError("config: unknown builtin dataset '" + spec.builtin + "' at " +
                              where);
        }
        return spec;
    }
    if (!value.is_object())
        throw ConfigError("config: 'dataset' must be a builtin name or an object at " + where);
    reject_unknown_keys(value, {"path", "delimiter", "has_header", "label_column"}, where);
    if (!value.contains("path"))
        throw ConfigError("config: missing key '" + where + "/path'");
    spec.path = require_type<std::string>(value["path"], "string", where + "/path");
    if (value.contains("delimiter")) {
        const auto s =
            require_type<std::string>(value["delimiter"], "string", where + "/delimiter");
        if (s.size() != 1)
            throw ConfigError("config: 'delimiter' must be a single character at " + where);
        spec.schema.delimiter = s[0];
    }
    if (value.contains("has_header"))
        spec.schema.has_header =
            require_type<bool>(value["has_header"], "bool", where + "/has_header");
    if (value.contains("label_column"))
        spec.schema.label_column = require_type<std::size_t>(
            value["label_column"], "non-negative integer", where + "/label_column");
    return spec;
}

}  // namespace config_detail

/// Parse and validate an experiment config. Unknown keys anywhere are
/// rejected with the offending path; defaults fill everything optional.
inline ExperimentConfig parse_config_json(const json& root) {
    using namespace config_detail;
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown_keys(root,
                        {"dataset", "algorithm", "algorithms", "k", "seeds", "subtractive",
                         "pso", "kmeans", "lloyd_refine", "refine_gbest_only", "seed_fraction",
                         "normalize", "output"},
                        "");

    ExperimentConfig config;
    if (!root.contains("dataset")) throw ConfigError("config: missing key '/dataset'");
    config.dataset = parse_dataset(root["dataset"], "/dataset");

    if (!root.contains("seeds")) throw ConfigError("config: missing key '/seeds'");
    if (!root["seeds"].is_array() || root["seeds"].empty())
        throw ConfigError("config: '/seeds' must be a non-empty array");
    for (const auto& s : root["seeds"])
        config.seeds.push_back(
            require_type<std::uint64_t>(s, "non-negative integer", "/seeds"));

    const bool has_single = root.contains("algorithm");
    const bool has_list = root.contains("algorithms");
    if (has_single == has_list)
        throw ConfigError("config: exactly one of '/algorithm' or '/algorithms' is required");
    if (has_single) {
        config.algorithms.push_back(parse_algorithm_fields(root, ""));
    } else {
        if (!root["algorithms"].is_array() || root["algorithms"].empty())
            throw ConfigError("config: '/algorithms' must be a non-empty array");
        for (const auto& key : {"k", "subtractive", "pso", "kmeans", "lloyd_refine",
                                "refine_gbest_only", "seed_fraction", "normalize"})
            if (root.contains(key))
                throw ConfigError(std::string("config: '/") + key +
                                  "' belongs inside '/algorithms' entries");
        std::size_t i = 0;
        for (const auto& entry : root["algorithms"]) {
            const std::string where = "/algorithms[" + std::to_string(i++) + "]";
            if (!entry.is_object())
                throw ConfigError("config: expected object at " + where);
            config_detail::reject_unknown_keys(
                entry,
                {"algorithm", "k", "subtractive", "pso", "kmeans", "lloyd_refine",
                 "refine_gbest_only", "seed_fraction", "normalize"},
                where);
            config.algorithms.push_back(parse_algorithm_fields(entry, where));
        }
    }

    if (root.contains("output")) {
        const json& out = root["output"];
        reject_unknown_keys(out, {"report", "trace"}, "/output");
        if (out.contains("report"))
            config.report_path =
                require_type<std::string>(out["report"], "string", "/output/report");
        if (out.contains("trace"))
            config.trace_dir =
                require_type<std::string>(out["trace"], "string", "/output/trace");
    }
    return config;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: malformed JSON in '" + path + "': " + e.what());
    }
    return parse_config_json(root);
}

/// Emit a config with all defaults materialized; parses back to an equal
/// ExperimentConfig.
inline json serialize_config(const ExperimentConfig& config) {
    json root;
    if (!config.dataset.builtin.empty()) {
        root["dataset"] = config.dataset.builtin;
    } else {
        json ds;
        ds["path"] = config.dataset.path;
        ds["delimiter"] = std::string(1, config.dataset.schema.delimiter);
        ds["has_header"] = config.dataset.schema.has_header;
        if (config.dataset.schema.label_column)
            ds["label_column"] = *config.dataset.schema.label_column;
        root["dataset"] = ds;
    }
    root["seeds"] = config.seeds;
    json algos = json::array();
    for (const auto& spec : config.algorithms) {
        json a;
        a["algorithm"] = to_string(spec.kind);
        if (spec.k) a["k"] = *spec.k;
        a["subtractive"] = {{"ra", spec.subtractive.ra},
                            {"rb_factor", spec.subtractive.rb_factor},
                            {"eps_up", spec.subtractive.eps_up},
                            {"eps_down", spec.subtractive.eps_down},
                            {"k_max", spec.subtractive.k_max},
                            {"kernel_denominator", spec.subtractive.kernel_denominator}};
        a["pso"] = {{"swarm_size", spec.pso.swarm_size},
                    {"c1", spec.pso.c1},
                    {"c2", spec.pso.c2},
                    {"w_max", spec.pso.w_max},
                    {"w_min", spec.pso.w_min},
                    {"v_max_factor", spec.pso.v_max_factor},
                    {"max_iters", spec.pso.max_iters},
                    {"stall_window", spec.pso.stall_window},
                    {"stall_tol", spec.pso.stall_tol},
                    {"inertia", spec.pso.inertia == InertiaSchedule::linear ? "linear"
                                                                            : "exponential"},
                    {"boundary", spec.pso.boundary == BoundaryMode::revert_zero_vel
                                     ? "revert-zero-velocity"
                                     : "revert"}};
        a["kmeans"] = {{"max_iters", spec.kmeans.max_iters}, {"tol", spec.kmeans.tol}};
        a["lloyd_refine"] = spec.lloyd_refine;
        a["refine_gbest_only"] = spec.refine_gbest_only;
        a["seed_fraction"] = spec.seed_fraction;
        if (spec.kind == AlgorithmKind::kmeans || spec.kind == AlgorithmKind::pso)
            a["normalize"] = spec.normalize;
        algos.push_back(a);
    }
    root["algorithms"] = algos;
    json out;
    out["report"] = config.report_path;
    if (config.trace_dir) out["trace"] = *config.trace_dir;
    root["output"] = out;
    return root;
}

// ---------------------------------------------------------------------------
// dataset resolution
// ---------------------------------------------------------------------------

/// Directory holding the bundled CSVs; SWARM_CLUSTER_DATA overrides the
/// compiled-in default.
inline std::string data_directory() {
    if (const char* env = std::getenv("SWARM_CLUSTER_DATA")) return env;
    return SWARMCLUSTER_DATA_DIR;
}

/// Load a dataset spec. Builtin datasets are validated against their
/// published descriptor: n/d/C mismatches are hard errors, class-size
/// differences only warn (public copies vary).
inline Dataset load_dataset(const DatasetSpec& spec, std::ostream& warnings = std::cerr) {
    if (spec.builtin.empty()) return load_csv(spec.path, spec.schema);

    const DatasetDescriptor desc = builtin_descriptor(spec.builtin);
    const std::string path =
        (std::filesystem::path(data_directory()) / (spec.builtin + ".csv")).string();
    CsvSchema schema;
    schema.label_column = desc.n_dimensions;  // features first, label last
    Dataset ds = load_csv(path, schema);

    if (ds.size() != desc.n_instances || ds.dim() != desc.n_dimensions ||
        static_cast<std::size_t>(ds.num_classes()) != desc.n_classes) {
        std::ostringstream msg;
        msg << "dataset '" << spec.builtin << "' at " << path << " has shape " << ds.size()
            << "x" << ds.dim() << " with " << ds.num_classes() << " classes; expected "
            << desc.n_instances << "x" << desc.n_dimensions << " with " << desc.n_classes;
        throw std::runtime_error(msg.str());
    }
    std::vector<std::size_t> sizes(desc.n_classes, 0);
    for (int l : *ds.labels) ++sizes[static_cast<std::size_t>(l)];
    if (sizes != desc.class_sizes) {
        warnings << "warning: dataset '" << spec.builtin
                 << "' class sizes differ from the published ones\n";
    }
    return ds;
}

// ---------------------------------------------------------------------------
// experiment execution
// ---------------------------------------------------------------------------

namespace detail {

// Map a result produced in normalized space back to original units, with
// assignments and SICD recomputed there.
inline ClusteringResult denormalized_result(const Dataset& original, ClusteringResult run,
                                            const NormalizationParams& params) {
    CentroidSet centers(denormalize_centers(run.centers, params));
    ClusteringResult out =
        finish_result(original, std::move(centers), std::move(run.trace), run.iterations_run);
    out.seed_info = std::move(run.seed_info);
    return out;
}

}  // namespace detail

/// Run one algorithm spec on one seed. Pure given (dataset, spec, seed).
inline ClusteringResult run_algorithm(const Dataset& ds, const AlgorithmSpec& spec,
                                      std::uint64_t seed) {
    ClusteringParams params;
    params.pso = spec.pso;
    params.lloyd_refine = spec.lloyd_refine;
    params.refine_gbest_only = spec.refine_gbest_only;
    params.seed_fraction = spec.seed_fraction;
    params.subtractive = spec.subtractive;

    switch (spec.kind) {
        case AlgorithmKind::kmeans: {
            if (!spec.normalize)
                return kmeans(ds, *spec.k, seed, spec.kmeans.max_iters, spec.kmeans.tol);
            auto [normalized, norm_params] = min_max_normalize(ds);
            return detail::denormalized_result(
                ds, kmeans(normalized, *spec.k, seed, spec.kmeans.max_iters, spec.kmeans.tol),
                norm_params);
        }
        case AlgorithmKind::pso: {
            if (!spec.normalize) return pso_cluster(ds, *spec.k, params, std::nullopt, seed);
            auto [normalized, norm_params] = min_max_normalize(ds);
            return detail::denormalized_result(
                ds, pso_cluster(normalized, *spec.k, params, std::nullopt, seed), norm_params);
        }
        case AlgorithmKind::sc_brapso:
            return sc_br_apso(ds, params, seed);
        case AlgorithmKind::subtractive_only: {
            auto [normalized, norm_params] = min_max_normalize(ds);
            SeedingResult seeding = select_centers(normalized, spec.subtractive);
            CentroidSet centers(denormalize_centers(seeding.centers, norm_params));
            ClusteringResult result =
                swarmcluster::detail::finish_result(ds, std::move(centers), {}, 0);
            result.seed_info = std::move(seeding);
            return result;
        }
    }
    throw std::logic_error("run_algorithm: unreachable");
}

inline void write_trace(const std::vector<TraceRecord>& trace, const std::string& path);

/// Execute every (algorithm, seed) pair. Rows come back grouped by
/// algorithm in config order, seeds in config order within each group.
/// A run that aborts (non-finite fitness) produces a failed row and the
/// remaining runs still execute. Traces are written one JSONL file per run
/// when trace_dir is set.
inline std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
    const Dataset ds = load_dataset(config.dataset);
    std::vector<ReportRow> rows;

    for (const auto& spec : config.algorithms) {
        if (spec.k && *spec.k > ds.size())
            throw ConfigError("config: k exceeds dataset size for algorithm '" +
                              to_string(spec.kind) + "'");
        for (std::uint64_t seed : config.seeds) {
            ReportRow row;
            row.dataset = config.dataset.display_name();
            row.algorithm = to_string(spec.kind);
            row.seed = seed;
            const auto start = std::chrono::steady_clock::now();
            try {
                ClusteringResult run = run_algorithm(ds, spec, seed);
                const auto end = std::chrono::steady_clock::now();
                const double wall_ms =
                    std::chrono::duration<double, std::milli>(end - start).count();
                const RunMetrics metrics = compute_run_metrics(run, ds.labels, wall_ms, seed);
                row.k = run.k;
                row.sicd = metrics.sicd;
                row.error_rate_matching = metrics.error_rate_matching;
                row.error_rate_purity = metrics.error_rate_purity;
                row.convergence_iteration = metrics.convergence_iteration;
                row.min_inter_cluster = metrics.min_inter_cluster;
                row.iterations_run = run.iterations_run;
                row.wall_ms = wall_ms;
                if (config.trace_dir && !run.trace.empty()) {
                    std::filesystem::create_directories(*config.trace_dir);
                    const std::string name = row.dataset + "_" + row.algorithm + "_seed" +
                                             std::to_string(seed) + ".jsonl";
                    write_trace(run.trace,
                                (std::filesystem::path(*config.trace_dir) / name).string());
                }
            } catch (const std::runtime_error& e) {
                const auto end = std::chrono::steady_clock::now();
                row.failed = true;
                row.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
                std::cerr << "run failed (" << row.algorithm << ", seed " << seed
                          << "): " << e.what() << "\n";
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// report and trace emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

template <typename T>
std::string format_cell(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>)
        return format_real(*v);
    else
        return std::to_string(*v);
}

}  // namespace detail

inline constexpr const char* kReportHeader =
    "dataset,algorithm,seed,k,sicd,error_rate_matching,error_rate_purity,"
    "convergence_iteration,min_inter_cluster,iterations_run,wall_ms";

/// CSV report, reals at 6 significant digits. Every field except wall_ms is
/// reproducible bit-for-bit for a fixed (config, seed).
inline void write_report(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open '" + path + "'");
    out << kReportHeader << "\n";
    for (const auto& row : rows) {
        out << row.dataset << ',' << row.algorithm << ',' << row.seed << ','
            << detail::format_cell(row.k) << ',' << detail::format_cell(row.sicd) << ','
            << detail::format_cell(row.error_rate_matching) << ','
            << detail::format_cell(row.error_rate_purity) << ','
            << detail::format_cell(row.convergence_iteration) << ','
            << detail::format_cell(row.min_inter_cluster) << ',' << row.iterations_run << ','
            << detail::format_real(row.wall_ms) << "\n";
    }
    if (!out) throw std::runtime_error("write_report: I/O failure writing '" + path + "'");
}

/// JSONL, one record per iteration: {"t": .., "gbest_fitness": .., "w": ..}
/// with w omitted where it does not apply.
inline void write_trace(const std::vector<TraceRecord>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace: cannot open '" + path + "'");
    for (const auto& rec : trace) {
        json line;
        line["t"] = rec.t;
        line["gbest_fitness"] = rec.gbest_fitness;
        if (rec.w) line["w"] = *rec.w;
        out << line.dump() << "\n";
    }
    if (!out) throw std::runtime_error("write_trace: I/O failure writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// aggregation
// ---------------------------------------------------------------------------

inline double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

/// Median of each numeric metric over a group of rows (failed rows skipped).
struct AggregateRow {
    std::string algorithm;
    std::size_t runs = 0;
    std::optional<double> sicd;
    std::optional<double> error_rate_matching;
    std::optional<double> error_rate_purity;
    std::optional<double> convergence_iteration;
    std::optional<double> wall_ms;
};

inline AggregateRow aggregate(const std::string& algorithm, const std::vector<ReportRow>& rows) {
    AggregateRow agg;
    agg.algorithm = algorithm;
    std::vector<double> sicd, match, purity, conv, wall;
    for (const auto& row : rows) {
        if (row.algorithm != algorithm || row.failed) continue;
        ++agg.runs;
        if (row.sicd) sicd.push_back(*row.sicd);
        if (row.error_rate_matching) match.push_back(*row.error_rate_matching);
        if (row.error_rate_purity) purity.push_back(*row.error_rate_purity);
        if (row.convergence_iteration)
            conv.push_back(static_cast<double>(*row.convergence_iteration));
        wall.push_back(row.wall_ms);
    }
    if (!sicd.empty()) agg.sicd = median(std::move(sicd));
    if (!match.empty()) agg.error_rate_matching = median(std::move(match));
    if (!purity.empty()) agg.error_rate_purity = median(std::move(purity));
    if (!conv.empty()) agg.convergence_iteration = median(std::move(conv));
    if (!wall.empty()) agg.wall_ms = median(std::move(wall));
    return agg;
}

// ---------------------------------------------------------------------------
// radius calibration
// ---------------------------------------------------------------------------

/// k as a function of ra over an even grid (normalization included), for
/// radius calibration. Rows come back sorted by ra ascending.
inline std::vector<std::pair<double, std::size_t>> sweep_ra(const Dataset& ds, double from,
                                                            double to, std::size_t steps,
                                                            SubtractiveParams base = {}) {
    if (steps < 1) throw std::invalid_argument("sweep_ra: steps must be >= 1");
    if (!(from > 0.0) || !(to > 0.0)) throw std::invalid_argument("sweep_ra: radii must be > 0");
    if (from > to) std::swap(from, to);
    auto [normalized, norm_params] = min_max_normalize(ds);
    (void)norm_params;
    std::vector<std::pair<double, std::size_t>> out;
    for (std::size_t i = 0; i < steps; ++i) {
        const double ra =
            steps == 1 ? from
                       : from + (to - from) * static_cast<double>(i) /
                             static_cast<double>(steps - 1);
        SubtractiveParams params = base;
        params.ra = ra;
        out.emplace_back(ra, select_centers(normalized, params).k);
    }
    return out;
}

}  // namespace swarmcluster
