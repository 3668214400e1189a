#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratedist/cba.hpp"
#include "ratedist/io.hpp"

namespace ratedist {

enum class Units { Nats, Bits };

/// One emitted solve record. Rates are stored in nats; the writers divide by
/// ln 2 at output time when bits are requested (rate column, plus the target
/// column when the target is itself a rate).
struct RunRecord {
    std::string source;
    std::size_t M = 0;
    std::size_t N = 0;
    double target = 0.0;
    bool target_is_rate = false;
    double rate = 0.0;
    double distortion = 0.0;
    double lambda = 0.0;
    std::int64_t iterations = 0;
    std::int64_t newton_steps_total = 0;
    double wall_time_s = 0.0;
    std::string stop_reason;
};

/// One row of a solver comparison (constrained vs fixed-multiplier search).
struct BenchRecord {
    std::string source;
    std::size_t M = 0;
    std::size_t N = 0;
    std::string target_kind;  ///< "D" or "R"
    double target = 0.0;
    std::string cba_status;   ///< "ok" or error name
    double cba_rate = 0.0;
    double cba_distortion = 0.0;
    double cba_lambda = 0.0;
    std::int64_t cba_iters = 0;
    double cba_time_s = 0.0;
    std::string ba_status;
    double ba_rate = 0.0;
    double ba_distortion = 0.0;
    double ba_lambda = 0.0;
    int ba_outer_trials = 0;
    std::int64_t ba_last_inner_iters = 0;
    std::int64_t ba_total_inner_iters = 0;
    double ba_time_s = 0.0;
    double speedup = 0.0;  ///< ba_time_s / cba_time_s
};

namespace detail {

inline double rate_out(double nats, Units u) { return u == Units::Bits ? nats / std::numbers::ln2 : nats; }

} // namespace detail

inline const char* run_record_header() {
    return "source,M,N,target,rate,distortion,lambda,iterations,newton_steps_total,wall_time_s,stop_reason";
}

inline void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records, Units units) {
    out << run_record_header() << '\n';
    for (const auto& r : records) {
        const double target = r.target_is_rate ? detail::rate_out(r.target, units) : r.target;
        out << r.source << ',' << r.M << ',' << r.N << ',' << io::format_real(target) << ','
            << io::format_real(detail::rate_out(r.rate, units)) << ',' << io::format_real(r.distortion)
            << ',' << io::format_real(r.lambda) << ',' << r.iterations << ',' << r.newton_steps_total
            << ',' << io::format_real(r.wall_time_s) << ',' << r.stop_reason << '\n';
    }
}

inline void write_records_json(std::ostream& out, const std::vector<RunRecord>& records, Units units) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json o;
        o["source"] = r.source;
        o["M"] = r.M;
        o["N"] = r.N;
        o["target"] = r.target_is_rate ? detail::rate_out(r.target, units) : r.target;
        o["rate"] = detail::rate_out(r.rate, units);
        o["distortion"] = r.distortion;
        o["lambda"] = r.lambda;
        o["iterations"] = r.iterations;
        o["newton_steps_total"] = r.newton_steps_total;
        o["wall_time_s"] = r.wall_time_s;
        o["stop_reason"] = r.stop_reason;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
}

inline const char* bench_record_header() {
    return "source,M,N,target_kind,target,cba_status,cba_rate,cba_distortion,cba_lambda,cba_iters,"
           "cba_time_s,ba_status,ba_rate,ba_distortion,ba_lambda,ba_outer_trials,ba_last_inner_iters,"
           "ba_total_inner_iters,ba_time_s,speedup";
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records, Units units) {
    out << bench_record_header() << '\n';
    for (const auto& r : records) {
        const bool rate_target = r.target_kind == "R";
        out << r.source << ',' << r.M << ',' << r.N << ',' << r.target_kind << ','
            << io::format_real(rate_target ? detail::rate_out(r.target, units) : r.target) << ','
            << r.cba_status << ',' << io::format_real(detail::rate_out(r.cba_rate, units)) << ','
            << io::format_real(r.cba_distortion) << ',' << io::format_real(r.cba_lambda) << ','
            << r.cba_iters << ',' << io::format_real(r.cba_time_s) << ',' << r.ba_status << ','
            << io::format_real(detail::rate_out(r.ba_rate, units)) << ','
            << io::format_real(r.ba_distortion) << ',' << io::format_real(r.ba_lambda) << ','
            << r.ba_outer_trials << ',' << r.ba_last_inner_iters << ',' << r.ba_total_inner_iters
            << ',' << io::format_real(r.ba_time_s) << ',' << io::format_real(r.speedup) << '\n';
    }
}

inline void write_bench_json(std::ostream& out, const std::vector<BenchRecord>& records, Units units) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        const bool rate_target = r.target_kind == "R";
        nlohmann::json o;
        o["source"] = r.source;
        o["M"] = r.M;
        o["N"] = r.N;
        o["target_kind"] = r.target_kind;
        o["target"] = rate_target ? detail::rate_out(r.target, units) : r.target;
        o["cba_status"] = r.cba_status;
        o["cba_rate"] = detail::rate_out(r.cba_rate, units);
        o["cba_distortion"] = r.cba_distortion;
        o["cba_lambda"] = r.cba_lambda;
        o["cba_iters"] = r.cba_iters;
        o["cba_time_s"] = r.cba_time_s;
        o["ba_status"] = r.ba_status;
        o["ba_rate"] = detail::rate_out(r.ba_rate, units);
        o["ba_distortion"] = r.ba_distortion;
        o["ba_lambda"] = r.ba_lambda;
        o["ba_outer_trials"] = r.ba_outer_trials;
        o["ba_last_inner_iters"] = r.ba_last_inner_iters;
        o["ba_total_inner_iters"] = r.ba_total_inner_iters;
        o["ba_time_s"] = r.ba_time_s;
        o["speedup"] = r.speedup;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
}

inline const char* trace_header() { return "n,lambda,objective,achieved,root_steps,r_update_kl"; }

inline void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
    out << trace_header() << '\n';
    for (const auto& rec : trace.records) {
        out << rec.n << ',' << io::format_real(rec.lambda) << ',' << io::format_real(rec.objective)
            << ',' << io::format_real(rec.achieved) << ',' << rec.root_steps << ','
            << io::format_real(rec.r_update_kl) << '\n';
    }
}

} // namespace ratedist
