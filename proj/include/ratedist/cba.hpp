#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratedist/errors.hpp"
#include "ratedist/kernels.hpp"
#include "ratedist/problem.hpp"
#include "ratedist/rootfind.hpp"

namespace ratedist {

/// Outer-loop stop rule: finish when the objective decrease falls below
/// objective_decrease_tol, or after max_iterations regardless.
struct StopCriterion {
    double objective_decrease_tol = 1e-10;
    std::int64_t max_iterations = 1'000'000;
};

enum class StopReason { ToleranceMet, MaxIterations, ZeroRateShortcut };

inline const char* to_string(StopReason s) noexcept {
    switch (s) {
        case StopReason::ToleranceMet: return "ToleranceMet";
        case StopReason::MaxIterations: return "MaxIterations";
        case StopReason::ZeroRateShortcut: return "ZeroRateShortcut";
    }
    return "?";
}

struct IterationRecord {
    std::int64_t n = 0;       ///< outer iteration index, 1-based
    double lambda = 0.0;      ///< multiplier root found this iteration
    double objective = 0.0;   ///< f^(n): rate objective (RD) or distortion (DR)
    double achieved = 0.0;    ///< constraint value reached: distortion (RD) / rate (DR)
    int root_steps = 0;       ///< Newton + bisection steps spent on the root
    double r_update_kl = 0.0; ///< KL(r^(n+1) || r^(n)) of the reproduction update
};

struct IterationTrace {
    std::int64_t stride = 0;  ///< 0 = recording disabled
    std::vector<IterationRecord> records;
};

struct SolveReport {
    double rate = 0.0;        ///< nats
    double distortion = 0.0;
    double lambda = 0.0;
    std::int64_t iterations = 0;
    StopReason stop_reason = StopReason::ToleranceMet;
    std::int64_t newton_steps_total = 0;
    double wall_time_s = 0.0;
    IterationTrace trace;
    ReproductionDistribution final_r;
    std::optional<ConditionalDistribution> final_w;
};

/// Knobs beyond the stop rule. trace_stride > 0 records every stride-th
/// iteration (and always the last). warm_start_lambda seeds each root find
/// with the previous iteration's multiplier; initial_r overrides the uniform
/// reproduction init (curve sweeps pass the neighbouring solution).
struct SolveOptions {
    StopCriterion stop;
    RootConfig root;
    std::int64_t trace_stride = 0;
    bool warm_start_lambda = true;
    bool keep_final_w = false;
    std::optional<ReproductionDistribution> initial_r;
};

namespace detail {

enum class ConstraintKind { Distortion, Rate };

/// Shared alternating loop of the two constrained solvers. Each iteration
/// re-solves the multiplier so the active constraint holds for the current
/// reproduction distribution, then applies the closed-form conditional and
/// marginal updates.
inline SolveReport cba_loop(const ProblemInstance& inst, ConstraintKind kind, double target,
                            const SolveOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n_repro = inst.num_repro;

    SolveReport rep;
    rep.trace.stride = opts.trace_stride;

    ReproductionDistribution r =
        opts.initial_r ? *opts.initial_r : ReproductionDistribution::uniform(n_repro);
    ReproductionDistribution r_next;
    ConditionalDistribution w;
    KernelWorkspace ws(inst);

    const double domain_min = (kind == ConstraintKind::Rate) ? 1e-300 : 0.0;
    const Direction dir =
        (kind == ConstraintKind::Rate) ? Direction::Increasing : Direction::Decreasing;

    RootConfig root_cfg = opts.root;
    double f_prev = std::numeric_limits<double>::infinity();
    std::int64_t n = 0;
    rep.stop_reason = StopReason::MaxIterations;

    while (n < opts.stop.max_iterations) {
        ++n;

        const auto gap = [&](double lam) {
            return kind == ConstraintKind::Distortion
                       ? distortion_gap(inst, r, Multiplier{lam}, target, ws)
                       : rate_gap(inst, r, Multiplier{lam}, target, ws);
        };
        const RootResult root = solve_monotone(gap, dir, root_cfg, domain_min);
        if (root.status == RootStatus::BracketFailed) {
            if (kind == ConstraintKind::Rate)
                raise(Errc::RateTooHigh,
                      "no multiplier reaches rate " + std::to_string(target) +
                          " for the current reproduction distribution; the target exceeds the "
                          "achievable mutual information (at most log N = " +
                          std::to_string(std::log(static_cast<double>(n_repro))) +
                          " nats). Choose a smaller rate.");
            raise(Errc::BracketFailed,
                  "no sign change found for the distortion constraint at D = " + std::to_string(target));
        }
        if (root.status == RootStatus::MaxSteps)
            raise(Errc::MaxSteps, "root refinement did not reach tolerance " +
                                      std::to_string(root_cfg.tolerance) + " at iteration " +
                                      std::to_string(n));

        const double lam = root.lambda_star;
        rep.newton_steps_total += root.newton_steps + root.bisection_steps;
        if (opts.warm_start_lambda) root_cfg.initial_guess = lam;

        // The workspace still holds the evaluation at the root, so the
        // conditional update and the objective come for free.
        update_w(inst, r, Multiplier{lam}, ws, w);
        const double f = (kind == ConstraintKind::Distortion) ? kernel_rate_value(inst, ws)
                                                              : kernel_distortion_value(inst, ws);

        update_r(inst, w, r_next);
        const bool stopping =
            (f_prev - f < opts.stop.objective_decrease_tol) || n == opts.stop.max_iterations;

        if (opts.trace_stride > 0 && (n % opts.trace_stride == 0 || stopping || n == 1)) {
            IterationRecord rec;
            rec.n = n;
            rec.lambda = lam;
            rec.objective = f;
            rec.achieved = target + root.residual;
            rec.root_steps = root.newton_steps + root.bisection_steps;
            rec.r_update_kl = kl_divergence(r_next, r);
            rep.trace.records.push_back(rec);
        }

        rep.lambda = lam;
        std::swap(r, r_next);
        if (f_prev - f < opts.stop.objective_decrease_tol) {
            rep.stop_reason = StopReason::ToleranceMet;
            break;
        }
        f_prev = f;
    }

    rep.iterations = n;
    rep.rate = rate_objective(inst, w, r);
    rep.distortion = distortion_objective(inst, w);
    rep.final_r = std::move(r);
    if (opts.keep_final_w) rep.final_w = std::move(w);
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline SolveReport zero_rate_report(const ProblemInstance& inst, bool keep_w) {
    SolveReport rep;
    const std::size_t j = zero_rate_column(inst);
    rep.rate = 0.0;
    rep.distortion = feasibility_range(inst).d_max;
    rep.lambda = 0.0;
    rep.iterations = 0;
    rep.stop_reason = StopReason::ZeroRateShortcut;
    rep.final_r.r.assign(inst.num_repro, 0.0);
    rep.final_r.r[j] = 1.0;
    if (keep_w) {
        ConditionalDistribution w;
        w.rows = inst.num_source;
        w.cols = inst.num_repro;
        w.w.assign(w.rows * w.cols, 0.0);
        for (std::size_t i = 0; i < w.rows; ++i) w(i, j) = 1.0;
        rep.final_w = std::move(w);
    }
    return rep;
}

} // namespace detail

/// Rate solve: minimal mutual information subject to expected distortion
/// <= target. Targets at or above d_max short-circuit to the zero-rate
/// solution; targets below d_min are infeasible.
inline SolveReport solve_rd(const ProblemInstance& inst, double target_distortion,
                            const SolveOptions& opts = {}) {
    const FeasibilityRange range = feasibility_range(inst);
    switch (classify_target_distortion(range, target_distortion)) {
        case TargetClass::Infeasible:
            raise(Errc::InfeasibleTarget, "target distortion " + std::to_string(target_distortion) +
                                              " is below d_min = " + std::to_string(range.d_min));
        case TargetClass::ZeroRate:
            return detail::zero_rate_report(inst, opts.keep_final_w);
        case TargetClass::Interior:
            break;
    }
    return detail::cba_loop(inst, detail::ConstraintKind::Distortion, target_distortion, opts);
}

/// Distortion solve: minimal expected distortion subject to mutual
/// information <= target rate (nats). The rate must be positive and below
/// the achievable mutual information, otherwise RateTooHigh is raised.
inline SolveReport solve_dr(const ProblemInstance& inst, double target_rate,
                            const SolveOptions& opts = {}) {
    if (!(target_rate > 0.0))
        raise(Errc::NonPositiveRate, "target rate must be positive, got " + std::to_string(target_rate));
    return detail::cba_loop(inst, detail::ConstraintKind::Rate, target_rate, opts);
}

/// One sample of a rate-distortion curve sweep.
struct CurvePoint {
    double target = 0.0;
    double rate = 0.0;
    double distortion = 0.0;
    double lambda = 0.0;
    std::int64_t iterations = 0;
    std::int64_t newton_steps_total = 0;
    double wall_time_s = 0.0;
    StopReason stop_reason = StopReason::ToleranceMet;
    bool warm_started = false;  ///< reproduction carried over from the previous point
    std::string error;          ///< empty on success, error name otherwise
};

/// Solves a whole list of distortion targets, recording failures per point
/// and continuing. Each point starts from the uniform reproduction by
/// default. Passing warm_start_r carries the previous converged point's
/// reproduction and multiplier forward (targets should then be ascending);
/// that saves iterations on strictly convex curves but must not be used
/// across linear segments of the curve, where the objective-decrease stop
/// fires long before the carried iterate has migrated to the new target's
/// solution (the per-point record keeps the flag so runs are attributable).
inline std::vector<CurvePoint> sweep_rd_curve(const ProblemInstance& inst,
                                              const std::vector<double>& targets,
                                              const SolveOptions& opts = {},
                                              bool warm_start_r = false) {
    std::vector<CurvePoint> out;
    out.reserve(targets.size());
    std::optional<ReproductionDistribution> carry_r;
    double carry_lambda = opts.root.initial_guess;

    for (double target : targets) {
        CurvePoint pt;
        pt.target = target;
        SolveOptions local = opts;
        if (warm_start_r && carry_r) {
            local.initial_r = carry_r;
            local.root.initial_guess = carry_lambda;
            pt.warm_started = true;
        }
        try {
            const SolveReport rep = solve_rd(inst, target, local);
            pt.rate = rep.rate;
            pt.distortion = rep.distortion;
            pt.lambda = rep.lambda;
            pt.iterations = rep.iterations;
            pt.newton_steps_total = rep.newton_steps_total;
            pt.wall_time_s = rep.wall_time_s;
            pt.stop_reason = rep.stop_reason;
            if (rep.stop_reason != StopReason::ZeroRateShortcut) {
                carry_r = rep.final_r;
                carry_lambda = rep.lambda;
            }
        } catch (const Error& e) {
            pt.error = errc_name(e.code());
        }
        out.push_back(std::move(pt));
    }
    return out;
}

} // namespace ratedist
