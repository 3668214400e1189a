#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ratedist/ba.hpp"
#include "ratedist/cba.hpp"
#include "ratedist/errors.hpp"
#include "ratedist/io.hpp"
#include "ratedist/report.hpp"
#include "ratedist/sources.hpp"

namespace ratedist::cli {

enum class Command { Rd, Dr, Sweep, Bench, Validate };
enum class OutputFormat { Csv, Json };

/// Fully resolved invocation. The argv parser in the CLI tool fills this in;
/// tests drive run() with it directly.
struct RunConfig {
    Command command = Command::Rd;

    // Instance source: either a builtin family or a JSON instance file.
    std::string builtin;  ///< gaussian | laplacian | uniform | binary | berger
    std::string instance_path;
    double sigma = 1.0;
    double laplace_b = 1.0;
    double half_width = 8.0;
    std::size_t source_points = 100;
    std::size_t repro_points = 100;
    std::string distortion = "squared";  ///< squared | absolute
    double binary_p = 0.5;

    std::vector<double> targets;  ///< D values (rd/sweep) or R values (dr)
    std::string grid;             ///< sweep grid "start:stop:count", overrides targets
    std::string algorithm = "cba";  ///< sweep solver: cba | ba
    std::string bench_suite;        ///< table1 | table2 | table3 | bifurcation

    double stop_tol = 1e-10;
    std::int64_t max_iterations = 1'000'000;
    double newton_tol = 1e-12;
    double ba_outer_tol = 1e-6;
    int ba_max_trials = 100;
    bool no_warm_start = false;
    bool sweep_warm_start = false;  ///< carry r along the sweep (unsafe on linear segments)

    OutputFormat format = OutputFormat::Csv;
    std::string out_path;    ///< empty = standard output
    Units units = Units::Nats;
    std::int64_t trace_stride = 0;
    std::string trace_path = "trace.csv";
    std::uint64_t seed = 0;  ///< reserved for randomized suites; echoed in JSON output only
};

namespace detail {

struct NamedInstance {
    ProblemInstance inst;
    std::string name;
};

inline NamedInstance make_instance(const RunConfig& cfg) {
    if (!cfg.instance_path.empty() && !cfg.builtin.empty())
        raise(Errc::ShapeMismatch, "give either a builtin source or an instance file, not both");
    if (!cfg.instance_path.empty())
        return {io::load_instance(cfg.instance_path), cfg.instance_path};

    const DistortionKind kind = [&] {
        if (cfg.distortion == "squared") return DistortionKind::SquaredError;
        if (cfg.distortion == "absolute") return DistortionKind::AbsoluteError;
        raise(Errc::ShapeMismatch, "unknown distortion kind: " + cfg.distortion);
    }();
    const GridSpec spec{cfg.half_width, cfg.source_points, cfg.repro_points};
    std::ostringstream name;

    if (cfg.builtin == "gaussian") {
        name << "gaussian(sigma=" << cfg.sigma << ",L=" << cfg.half_width << ",K=" << cfg.source_points
             << ",N=" << cfg.repro_points << "," << cfg.distortion << ")";
        return {discretize_density({Density::Family::Gaussian, cfg.sigma}, spec, kind), name.str()};
    }
    if (cfg.builtin == "laplacian") {
        name << "laplacian(b=" << cfg.laplace_b << ",L=" << cfg.half_width << ",K=" << cfg.source_points
             << ",N=" << cfg.repro_points << "," << cfg.distortion << ")";
        return {discretize_density({Density::Family::Laplacian, cfg.laplace_b}, spec, kind), name.str()};
    }
    if (cfg.builtin == "uniform") {
        name << "uniform(L=" << cfg.half_width << ",K=" << cfg.source_points << ",N=" << cfg.repro_points
             << "," << cfg.distortion << ")";
        return {discretize_density({Density::Family::Uniform, 0.0}, spec, kind), name.str()};
    }
    if (cfg.builtin == "binary") {
        name << "binary(p=" << cfg.binary_p << ")";
        return {validate_instance(binary_hamming(cfg.binary_p)), name.str()};
    }
    if (cfg.builtin == "berger") {
        return {validate_instance(berger_bifurcation()), "berger"};
    }
    raise(Errc::ShapeMismatch, "unknown builtin source: '" + cfg.builtin + "'");
}

inline std::vector<double> parse_grid(const std::string& grid) {
    // "start:stop:count", count >= 1 evenly spaced values inclusive of both ends.
    double start = 0.0, stop = 0.0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(grid);
    if (!(in >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
        raise(Errc::ShapeMismatch, "grid must be start:stop:count, got '" + grid + "'");
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = start;
        return v;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + step * static_cast<double>(i);
    v.back() = stop;
    return v;
}

inline SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions opts;
    opts.stop.objective_decrease_tol = cfg.stop_tol;
    opts.stop.max_iterations = cfg.max_iterations;
    opts.root.tolerance = cfg.newton_tol;
    opts.warm_start_lambda = !cfg.no_warm_start;
    opts.trace_stride = cfg.trace_stride;
    return opts;
}

inline RunRecord record_from_report(const NamedInstance& src, double target, bool target_is_rate,
                                    const SolveReport& rep) {
    RunRecord rec;
    rec.source = src.name;
    rec.M = src.inst.num_source;
    rec.N = src.inst.num_repro;
    rec.target = target;
    rec.target_is_rate = target_is_rate;
    rec.rate = rep.rate;
    rec.distortion = rep.distortion;
    rec.lambda = rep.lambda;
    rec.iterations = rep.iterations;
    rec.newton_steps_total = rep.newton_steps_total;
    rec.wall_time_s = rep.wall_time_s;
    rec.stop_reason = to_string(rep.stop_reason);
    return rec;
}

inline BaConfig ba_config(const RunConfig& cfg) {
    BaConfig ba;
    ba.inner_stop.objective_decrease_tol = cfg.stop_tol;
    ba.inner_stop.max_iterations = cfg.max_iterations;
    ba.outer_tolerance = cfg.ba_outer_tol;
    ba.max_outer_trials = cfg.ba_max_trials;
    return ba;
}

struct BenchPair {
    std::string builtin;
    double sigma = 1.0;
    double laplace_b = 1.0;
    std::size_t grid_points = 100;
    bool rate_target = false;
    double target = 0.0;
    double stop_tol = 1e-10;
};

inline std::vector<BenchPair> bench_pairs(const std::string& suite) {
    std::vector<BenchPair> pairs;
    const auto add = [&](const std::string& b, std::size_t k, bool rt, double t, double tol) {
        BenchPair p;
        p.builtin = b;
        p.grid_points = k;
        p.rate_target = rt;
        p.target = t;
        p.stop_tol = tol;
        pairs.push_back(p);
    };
    if (suite == "table1") {
        for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) add("gaussian", 100, false, d, 1e-10);
        for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) add("laplacian", 100, false, d, 1e-10);
    } else if (suite == "table2") {
        for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) add("gaussian", 100, true, r, 1e-10);
        for (double r : {0.1, 0.5, 0.9, 1.3, 1.7}) add("laplacian", 100, true, r, 1e-10);
    } else if (suite == "table3") {
        for (std::size_t k : {std::size_t{20}, std::size_t{40}})
            for (double d : {2.0, 4.0, 8.0, 16.0}) add("uniform", k, false, d, 1e-13);
    } else if (suite == "bifurcation") {
        for (double d : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) add("berger", 0, false, d, 1e-8);
    } else {
        raise(Errc::ShapeMismatch, "unknown bench suite: '" + suite + "'");
    }
    return pairs;
}

} // namespace detail

/// Runs the named comparison suite: the constrained solver and the adaptive
/// fixed-multiplier search on every (source, target) pair, with the suite's
/// stopping tolerance. Per-pair failures are recorded inline and the run
/// continues.
inline std::vector<BenchRecord> bench(const RunConfig& cfg) {
    std::vector<BenchRecord> out;
    for (const auto& pair : detail::bench_pairs(cfg.bench_suite)) {
        RunConfig icfg = cfg;
        icfg.builtin = pair.builtin;
        icfg.instance_path.clear();
        icfg.distortion = pair.builtin == "laplacian" ? "absolute" : "squared";
        if (pair.grid_points > 0) {
            icfg.source_points = pair.grid_points;
            icfg.repro_points = pair.grid_points;
        }
        const detail::NamedInstance src = detail::make_instance(icfg);

        BenchRecord rec;
        rec.source = src.name;
        rec.M = src.inst.num_source;
        rec.N = src.inst.num_repro;
        rec.target_kind = pair.rate_target ? "R" : "D";
        rec.target = pair.target;

        SolveOptions opts = detail::solve_options(cfg);
        opts.stop.objective_decrease_tol = pair.stop_tol;
        try {
            const SolveReport rep = pair.rate_target ? solve_dr(src.inst, pair.target, opts)
                                                     : solve_rd(src.inst, pair.target, opts);
            rec.cba_status = "ok";
            rec.cba_rate = rep.rate;
            rec.cba_distortion = rep.distortion;
            rec.cba_lambda = rep.lambda;
            rec.cba_iters = rep.iterations;
            rec.cba_time_s = rep.wall_time_s;
        } catch (const Error& e) {
            rec.cba_status = errc_name(e.code());
        }

        BaConfig ba = detail::ba_config(cfg);
        ba.inner_stop.objective_decrease_tol = pair.stop_tol;
        try {
            const BaReport rep = pair.rate_target ? ba_search_dr(src.inst, pair.target, ba)
                                                  : ba_search_rd(src.inst, pair.target, ba);
            rec.ba_status = to_string(rep.status);
            rec.ba_rate = rep.rate;
            rec.ba_distortion = rep.distortion;
            rec.ba_lambda = rep.lambda;
            rec.ba_outer_trials = rep.outer_trials;
            rec.ba_last_inner_iters = rep.last_inner_iterations;
            rec.ba_total_inner_iters = rep.total_inner_iterations;
            rec.ba_time_s = rep.wall_time_s;
        } catch (const Error& e) {
            rec.ba_status = errc_name(e.code());
        }
        rec.speedup = rec.cba_time_s > 0.0 ? rec.ba_time_s / rec.cba_time_s : 0.0;
        out.push_back(std::move(rec));
    }
    return out;
}

/// Executes one parsed invocation, writing the artifact to `out` (or the
/// configured output path) and diagnostics to `err`. Returns the process
/// exit code: 0 success, 1 solver error, 2 configuration error.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ofstream file_out;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty()) {
        file_out.open(cfg.out_path);
        if (!file_out) {
            err << "ShapeMismatch: cannot open output file " << cfg.out_path << '\n';
            return 2;
        }
        sink = &file_out;
    }

    try {
        if (cfg.command == Command::Bench) {
            const std::vector<BenchRecord> records = bench(cfg);
            if (cfg.format == OutputFormat::Csv)
                write_bench_csv(*sink, records, cfg.units);
            else
                write_bench_json(*sink, records, cfg.units);
            return 0;
        }

        const detail::NamedInstance src = detail::make_instance(cfg);

        if (cfg.command == Command::Validate) {
            const FeasibilityRange range = feasibility_range(src.inst);
            nlohmann::json o;
            o["source"] = src.name;
            o["M"] = src.inst.num_source;
            o["N"] = src.inst.num_repro;
            o["d_min"] = range.d_min;
            o["d_max"] = range.d_max;
            *sink << o.dump(2) << '\n';
            return 0;
        }

        std::vector<RunRecord> records;
        IterationTrace last_trace;

        if (cfg.command == Command::Rd || cfg.command == Command::Dr) {
            const bool is_dr = cfg.command == Command::Dr;
            if (cfg.targets.empty())
                raise(Errc::ShapeMismatch, is_dr ? "dr requires at least one --R target"
                                                 : "rd requires at least one --D target");
            const SolveOptions opts = detail::solve_options(cfg);
            for (double t : cfg.targets) {
                SolveReport rep = is_dr ? solve_dr(src.inst, t, opts) : solve_rd(src.inst, t, opts);
                records.push_back(detail::record_from_report(src, t, is_dr, rep));
                last_trace = std::move(rep.trace);
            }
        } else {  // Sweep
            std::vector<double> targets = cfg.grid.empty() ? cfg.targets : detail::parse_grid(cfg.grid);
            if (targets.empty())
                raise(Errc::ShapeMismatch, "sweep requires --grid or at least one --D target");
            if (cfg.algorithm == "cba") {
                const SolveOptions opts = detail::solve_options(cfg);
                for (const CurvePoint& pt :
                     sweep_rd_curve(src.inst, targets, opts, cfg.sweep_warm_start)) {
                    RunRecord rec;
                    rec.source = src.name;
                    rec.M = src.inst.num_source;
                    rec.N = src.inst.num_repro;
                    rec.target = pt.target;
                    rec.rate = pt.rate;
                    rec.distortion = pt.distortion;
                    rec.lambda = pt.lambda;
                    rec.iterations = pt.iterations;
                    rec.newton_steps_total = pt.newton_steps_total;
                    rec.wall_time_s = pt.wall_time_s;
                    rec.stop_reason = pt.error.empty() ? to_string(pt.stop_reason) : pt.error;
                    records.push_back(std::move(rec));
                }
            } else if (cfg.algorithm == "ba") {
                const BaConfig ba = detail::ba_config(cfg);
                for (double t : targets) {
                    RunRecord rec;
                    rec.source = src.name;
                    rec.M = src.inst.num_source;
                    rec.N = src.inst.num_repro;
                    rec.target = t;
                    try {
                        const BaReport rep = ba_search_rd(src.inst, t, ba);
                        rec.rate = rep.rate;
                        rec.distortion = rep.distortion;
                        rec.lambda = rep.lambda;
                        rec.iterations = rep.total_inner_iterations;
                        rec.newton_steps_total = rep.outer_trials;
                        rec.wall_time_s = rep.wall_time_s;
                        rec.stop_reason = to_string(rep.status);
                    } catch (const Error& e) {
                        rec.stop_reason = errc_name(e.code());
                    }
                    records.push_back(std::move(rec));
                }
            } else {
                raise(Errc::ShapeMismatch, "unknown sweep algorithm: '" + cfg.algorithm + "'");
            }
        }

        if (cfg.format == OutputFormat::Csv)
            write_records_csv(*sink, records, cfg.units);
        else
            write_records_json(*sink, records, cfg.units);

        if (cfg.trace_stride > 0 && !last_trace.records.empty()) {
            std::ofstream trace_out(cfg.trace_path);
            if (!trace_out) {
                err << "ShapeMismatch: cannot open trace file " << cfg.trace_path << '\n';
                return 2;
            }
            write_trace_csv(trace_out, last_trace);
        }
        return 0;
    } catch (const Error& e) {
        err << e.what() << '\n';
        // Configuration-shaped problems exit 2, solver failures exit 1.
        switch (e.code()) {
            case Errc::ShapeMismatch:
            case Errc::OutOfRange:
            case Errc::TooLarge:
                return 2;
            default:
                return 1;
        }
    }
}

} // namespace ratedist::cli
