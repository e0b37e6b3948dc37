// Command-line harness: seeded experiment runs, optimizer benchmarks,
// subtractive seeding, and radius calibration.
//
// Exit codes: 0 success, 1 config/validation error, 2 runtime failure.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmcluster/swarmcluster.hpp"

namespace sc = swarmcluster;

namespace {

std::string opt_cell(const std::optional<double>& v) {
    return v ? sc::detail::format_real(*v) : std::string("-");
}

void print_aggregates(const std::vector<sc::ReportRow>& rows,
                      const std::vector<sc::AlgorithmSpec>& algorithms) {
    std::cout << "\nmedians over seeds\n";
    std::cout << std::left << std::setw(18) << "algorithm" << std::right << std::setw(6)
              << "runs" << std::setw(14) << "sicd" << std::setw(12) << "err_match"
              << std::setw(12) << "err_purity" << std::setw(10) << "conv_it" << std::setw(12)
              << "wall_ms" << "\n";
    // rows come back grouped per config entry, so slice rather than filter by
    // name (the same algorithm may be listed twice with different params)
    const std::size_t per_entry = rows.size() / algorithms.size();
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        const std::vector<sc::ReportRow> slice(rows.begin() + i * per_entry,
                                               rows.begin() + (i + 1) * per_entry);
        const sc::AggregateRow agg = sc::aggregate(sc::to_string(algorithms[i].kind), slice);
        std::cout << std::left << std::setw(18) << agg.algorithm << std::right << std::setw(6)
                  << agg.runs << std::setw(14) << opt_cell(agg.sicd) << std::setw(12)
                  << opt_cell(agg.error_rate_matching) << std::setw(12)
                  << opt_cell(agg.error_rate_purity) << std::setw(10)
                  << opt_cell(agg.convergence_iteration) << std::setw(12)
                  << opt_cell(agg.wall_ms) << "\n";
    }
}

int run_command(const std::string& config_path, const std::string& trace_dir) {
    sc::ExperimentConfig config = sc::parse_config(config_path);
    if (!trace_dir.empty()) config.trace_dir = trace_dir;
    const std::vector<sc::ReportRow> rows = sc::run_experiment(config);
    const std::string report_path =
        config.report_path.empty() ? "report.csv" : config.report_path;
    sc::write_report(rows, report_path);
    std::cout << "wrote " << rows.size() << " rows to " << report_path << "\n";
    print_aggregates(rows, config.algorithms);
    return 0;
}

int bench_command(const std::string& function, std::size_t dim, std::size_t iters,
                  std::size_t swarm, std::uint64_t seed, const std::string& trace_path) {
    const sc::BenchmarkFunction bench = sc::benchmark_objective(function, dim);
    sc::PsoParams params;
    params.swarm_size = swarm;
    params.max_iters = iters;
    const sc::OptimizationResult result =
        sc::optimize(bench.objective, bench.bounds, params, seed);
    std::cout << function << " d=" << dim << " seed=" << seed
              << ": best=" << sc::detail::format_real(result.best_fitness)
              << " iterations=" << result.iterations_run << " stop="
              << (result.stop_reason == sc::StopReason::stalled ? "stalled" : "max_iters")
              << "\n";
    if (!trace_path.empty()) {
        sc::write_trace(result.trace, trace_path);
        std::cout << "trace written to " << trace_path << "\n";
    }
    return 0;
}

sc::Dataset load_input(const std::string& input, const std::optional<std::size_t>& label_col) {
    sc::CsvSchema schema;
    schema.label_column = label_col;
    return sc::load_csv(input, schema);
}

int seed_command(const std::string& input, const std::optional<std::size_t>& label_col,
                 double ra) {
    const sc::Dataset ds = load_input(input, label_col);
    auto [normalized, norm_params] = sc::min_max_normalize(ds);
    sc::SubtractiveParams params;
    params.ra = ra;
    const sc::SeedingResult seeding = sc::select_centers(normalized, params);
    const sc::Matrix centers = sc::denormalize_centers(seeding.centers, norm_params);
    std::cout << "k=" << seeding.k << "\n";
    for (std::size_t i = 0; i < centers.rows; ++i) {
        for (std::size_t j = 0; j < centers.cols; ++j)
            std::cout << (j ? "," : "") << sc::detail::format_real(centers(i, j));
        std::cout << "\n";
    }
    return 0;
}

int sweep_command(const std::string& input, const std::optional<std::size_t>& label_col,
                  double from, double to, std::size_t steps) {
    const sc::Dataset ds = load_input(input, label_col);
    std::cout << "ra,k\n";
    for (const auto& [ra, k] : sc::sweep_ra(ds, from, to, steps))
        std::cout << sc::detail::format_real(ra) << "," << k << "\n";
    return 0;
}

int compare_command(const std::string& config_path) {
    sc::ExperimentConfig config = sc::parse_config(config_path);
    if (config.algorithms.size() < 2)
        std::cerr << "note: compare config lists fewer than two algorithms\n";
    const std::vector<sc::ReportRow> rows = sc::run_experiment(config);
    if (!config.report_path.empty()) {
        sc::write_report(rows, config.report_path);
        std::cout << "wrote " << rows.size() << " rows to " << config.report_path << "\n";
    }
    print_aggregates(rows, config.algorithms);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subtractive-seeded, boundary-restricted adaptive PSO clustering harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute an experiment config");
    std::string run_config;
    std::string run_trace_dir;
    run->add_option("--config", run_config, "experiment config (JSON)")->required();
    run->add_option("--trace-dir", run_trace_dir, "directory for per-run JSONL traces");

    auto* bench = app.add_subcommand("bench", "optimizer-only validation on a test function");
    std::string bench_function;
    std::size_t bench_dim = 10, bench_iters = 1000, bench_swarm = 30;
    std::uint64_t bench_seed = 1;
    std::string bench_trace;
    bench->add_option("--function", bench_function,
                      "sphere|rosenbrock|rastrigin|griewank|ackley")
        ->required();
    bench->add_option("--dim", bench_dim, "problem dimension")->required();
    bench->add_option("--iters", bench_iters, "iteration budget")->required();
    bench->add_option("--swarm", bench_swarm, "swarm size")->required();
    bench->add_option("--seed", bench_seed, "rng seed")->required();
    bench->add_option("--trace", bench_trace, "JSONL trace output path");

    auto* seed = app.add_subcommand("seed", "subtractive seeding only: print k and centers");
    std::string seed_input;
    std::optional<std::size_t> seed_label_col;
    double seed_ra = 0.4;
    seed->add_option("--input", seed_input, "CSV file")->required();
    seed->add_option("--label-col", seed_label_col, "zero-based label column");
    seed->add_option("--ra", seed_ra, "neighborhood radius (normalized units)")->required();

    auto* sweep = app.add_subcommand("sweep-ra", "k vs. ra table for radius calibration");
    std::string sweep_input;
    std::optional<std::size_t> sweep_label_col;
    double sweep_from = 0.1, sweep_to = 1.0;
    std::size_t sweep_steps = 10;
    sweep->add_option("--input", sweep_input, "CSV file")->required();
    sweep->add_option("--label-col", sweep_label_col, "zero-based label column");
    sweep->add_option("--from", sweep_from, "first radius")->required();
    sweep->add_option("--to", sweep_to, "last radius")->required();
    sweep->add_option("--steps", sweep_steps, "grid size")->required();

    auto* compare = app.add_subcommand("compare", "paired medians for every listed algorithm");
    std::string compare_config;
    compare->add_option("--config", compare_config, "experiment config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return run_command(run_config, run_trace_dir);
        if (bench->parsed())
            return bench_command(bench_function, bench_dim, bench_iters, bench_swarm,
                                 bench_seed, bench_trace);
        if (seed->parsed()) return seed_command(seed_input, seed_label_col, seed_ra);
        if (sweep->parsed())
            return sweep_command(sweep_input, sweep_label_col, sweep_from, sweep_to,
                                 sweep_steps);
        if (compare->parsed()) return compare_command(compare_config);
    } catch (const sc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
