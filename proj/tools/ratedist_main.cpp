// Command-line front end: computes rate-distortion and distortion-rate
// points, sweeps curves, and runs the solver comparison suites.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ratedist/cli.hpp"

using ratedist::cli::Command;
using ratedist::cli::OutputFormat;
using ratedist::cli::RunConfig;

namespace {

void add_instance_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("--source", cfg.builtin,
                    "builtin source: gaussian | laplacian | uniform | binary | berger");
    app->add_option("--instance", cfg.instance_path, "instance JSON file");
    app->add_option("--sigma", cfg.sigma, "gaussian standard deviation");
    app->add_option("--b", cfg.laplace_b, "laplacian scale");
    app->add_option("--L", cfg.half_width, "grid half width");
    app->add_option("--K", cfg.source_points, "source grid size");
    app->add_option("--N", cfg.repro_points, "reproduction grid size");
    app->add_option("--distortion", cfg.distortion, "distortion kind: squared | absolute");
    app->add_option("--p", cfg.binary_p, "binary source probability");
}

void add_solver_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("--tol", cfg.stop_tol, "objective-decrease stopping tolerance");
    app->add_option("--max-iters", cfg.max_iterations, "outer iteration cap");
    app->add_option("--newton-tol", cfg.newton_tol, "multiplier root tolerance");
    app->add_flag("--no-warm-start", cfg.no_warm_start, "cold-start the multiplier every iteration");
    app->add_option("--trace-stride", cfg.trace_stride, "record every n-th iteration (0 = off)");
    app->add_option("--trace-out", cfg.trace_path, "trace CSV path (last solve of the run)");
}

void add_output_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("--format", [&cfg](const std::vector<std::string>& v) {
        if (v.front() == "csv") cfg.format = OutputFormat::Csv;
        else if (v.front() == "json") cfg.format = OutputFormat::Json;
        else return false;
        return true;
    }, "output format: csv | json");
    app->add_option("--out", cfg.out_path, "output path (default: stdout)");
    app->add_option("--units", [&cfg](const std::vector<std::string>& v) {
        if (v.front() == "nats") cfg.units = ratedist::Units::Nats;
        else if (v.front() == "bits") cfg.units = ratedist::Units::Bits;
        else return false;
        return true;
    }, "rate units: nats | bits");
    app->add_option("--seed", cfg.seed, "seed recorded for randomized suites");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate-distortion and distortion-rate solver"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* rd = app.add_subcommand("rd", "compute R(D) at one or more distortion targets");
    rd->add_option("--D", cfg.targets, "target distortion(s)");
    add_instance_options(rd, cfg);
    add_solver_options(rd, cfg);
    add_output_options(rd, cfg);

    CLI::App* dr = app.add_subcommand("dr", "compute D(R) at one or more rate targets (nats)");
    dr->add_option("--R", cfg.targets, "target rate(s) in nats");
    add_instance_options(dr, cfg);
    add_solver_options(dr, cfg);
    add_output_options(dr, cfg);

    CLI::App* sweep = app.add_subcommand("sweep", "sweep an R(D) curve over a distortion grid");
    sweep->add_option("--D-grid", cfg.grid, "distortion grid start:stop:count");
    sweep->add_option("--D", cfg.targets, "explicit distortion targets (alternative to --D-grid)");
    sweep->add_option("--algorithm", cfg.algorithm, "curve solver: cba | ba");
    sweep->add_flag("--warm-start-r", cfg.sweep_warm_start,
                    "carry the reproduction along the sweep (avoid across linear segments)");
    sweep->add_option("--ba-outer-tol", cfg.ba_outer_tol, "multiplier-search distortion tolerance");
    sweep->add_option("--ba-max-trials", cfg.ba_max_trials, "multiplier-search trial cap");
    add_instance_options(sweep, cfg);
    add_solver_options(sweep, cfg);
    add_output_options(sweep, cfg);

    CLI::App* bench = app.add_subcommand("bench", "run a solver comparison suite");
    bench->add_option("--suite", cfg.bench_suite, "table1 | table2 | table3 | bifurcation")
        ->required();
    bench->add_option("--ba-outer-tol", cfg.ba_outer_tol, "multiplier-search target tolerance");
    bench->add_option("--ba-max-trials", cfg.ba_max_trials, "multiplier-search trial cap");
    add_solver_options(bench, cfg);
    add_output_options(bench, cfg);

    CLI::App* validate = app.add_subcommand("validate", "validate an instance and print its feasibility range");
    add_instance_options(validate, cfg);
    add_output_options(validate, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (rd->parsed()) cfg.command = Command::Rd;
    else if (dr->parsed()) cfg.command = Command::Dr;
    else if (sweep->parsed()) cfg.command = Command::Sweep;
    else if (bench->parsed()) cfg.command = Command::Bench;
    else cfg.command = Command::Validate;

    return ratedist::cli::run(cfg, std::cout, std::cerr);
}
