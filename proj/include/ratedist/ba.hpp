#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>

#include "ratedist/cba.hpp"
#include "ratedist/errors.hpp"
#include "ratedist/kernels.hpp"
#include "ratedist/problem.hpp"

namespace ratedist {

/// Settings for the classical fixed-multiplier baseline and its outer
/// multiplier search. The outer tolerance applies to |achieved - target| of
/// the searched quantity (distortion for rd, rate for dr).
struct BaConfig {
    StopCriterion inner_stop{1e-10, 1'000'000};
    double outer_tolerance = 1e-6;
    int max_outer_trials = 100;
    double lambda_growth = 2.0;
};

enum class BaStatus { Converged, MaxOuterTrials, NoConvergenceOnSegment };

inline const char* to_string(BaStatus s) noexcept {
    switch (s) {
        case BaStatus::Converged: return "Converged";
        case BaStatus::MaxOuterTrials: return "MaxOuterTrials";
        case BaStatus::NoConvergenceOnSegment: return "NoConvergenceOnSegment";
    }
    return "?";
}

struct BaFixedResult {
    ConditionalDistribution w;
    ReproductionDistribution r;
    double rate = 0.0;
    double distortion = 0.0;
    std::int64_t iterations = 0;
};

/// Classical Blahut-Arimoto inner loop: alternating closed-form updates that
/// minimize the Lagrangian rate + lambda * distortion at a fixed multiplier,
/// from a uniform reproduction start. Returns the tangent point of the curve
/// at slope -lambda.
inline BaFixedResult ba_fixed_lambda(const ProblemInstance& inst, Multiplier lambda,
                                     const StopCriterion& stop) {
    BaFixedResult res;
    ReproductionDistribution r = ReproductionDistribution::uniform(inst.num_repro);
    KernelWorkspace ws(inst);
    double lagrangian_prev = std::numeric_limits<double>::infinity();
    std::int64_t n = 0;
    while (n < stop.max_iterations) {
        ++n;
        ws.refresh(inst, r, lambda);
        // At the half step w = kernel(r) the Lagrangian collapses to
        // -sum_i p_i log Z_i (true, unshifted partition values).
        double lagrangian = 0.0;
        for (std::size_t i = 0; i < inst.num_source; ++i) {
            if (inst.p[i] == 0.0) continue;
            lagrangian -= inst.p[i] * (std::log(ws.row_sums[i]) - lambda.value * ws.row_min_d[i]);
        }
        update_w(inst, r, lambda, ws, res.w);
        update_r(inst, res.w, r);
        if (lagrangian_prev - lagrangian < stop.objective_decrease_tol) break;
        lagrangian_prev = lagrangian;
    }
    res.iterations = n;
    res.rate = rate_objective(inst, res.w, r);
    res.distortion = distortion_objective(inst, res.w);
    res.r = std::move(r);
    return res;
}

struct BaReport {
    double rate = 0.0;
    double distortion = 0.0;
    double lambda = 0.0;
    int outer_trials = 0;
    std::int64_t last_inner_iterations = 0;
    std::int64_t total_inner_iterations = 0;
    double wall_time_s = 0.0;
    BaStatus status = BaStatus::Converged;
};

namespace detail {

/// Outer bisection on the multiplier shared by the rd and dr searches.
/// decreasing = true searches the distortion (non-increasing in lambda),
/// false the rate. On curves with linear segments the achieved value jumps
/// across the target while the multiplier bracket collapses; that is
/// reported as NoConvergenceOnSegment instead of looping forever.
inline BaReport ba_bisect(const ProblemInstance& inst, double target, bool decreasing,
                          const BaConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    BaReport rep;
    rep.status = BaStatus::MaxOuterTrials;

    const auto finish = [&](BaStatus st) {
        rep.status = st;
        rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    };
    // Signed so that value > 0 means "multiplier too small".
    const auto gap = [&](const BaFixedResult& r) {
        const double a = decreasing ? r.distortion : r.rate;
        return decreasing ? a - target : target - a;
    };
    const auto trial = [&](double lam) {
        BaFixedResult r = ba_fixed_lambda(inst, Multiplier{lam}, cfg.inner_stop);
        ++rep.outer_trials;
        rep.total_inner_iterations += r.iterations;
        rep.last_inner_iterations = r.iterations;
        rep.rate = r.rate;
        rep.distortion = r.distortion;
        rep.lambda = lam;
        return r;
    };

    double lo = 0.0;
    BaFixedResult res = trial(lo);
    if (std::abs(gap(res)) <= cfg.outer_tolerance) return finish(BaStatus::Converged);
    if (gap(res) < 0.0) {
        // Already past the target at lambda = 0: the constraint is inactive
        // (rd with a near-zero-rate target); the lambda = 0 point is optimal.
        return finish(BaStatus::Converged);
    }

    double hi = 1.0;
    for (;;) {
        if (rep.outer_trials >= cfg.max_outer_trials) return finish(BaStatus::MaxOuterTrials);
        res = trial(hi);
        if (std::abs(gap(res)) <= cfg.outer_tolerance) return finish(BaStatus::Converged);
        if (gap(res) < 0.0) break;
        lo = hi;
        hi *= cfg.lambda_growth;
    }

    while (rep.outer_trials < cfg.max_outer_trials) {
        if (hi - lo < 1e-13 * (1.0 + hi)) return finish(BaStatus::NoConvergenceOnSegment);
        const double mid = 0.5 * (lo + hi);
        res = trial(mid);
        if (std::abs(gap(res)) <= cfg.outer_tolerance) return finish(BaStatus::Converged);
        if (gap(res) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return finish(BaStatus::MaxOuterTrials);
}

} // namespace detail

/// Adaptive multiplier search reproducing how the fixed-slope baseline must
/// be driven to hit a distortion target: bisection on lambda against the
/// non-increasing achieved distortion.
inline BaReport ba_search_rd(const ProblemInstance& inst, double target_distortion,
                             const BaConfig& cfg = {}) {
    const FeasibilityRange range = feasibility_range(inst);
    if (classify_target_distortion(range, target_distortion) == TargetClass::Infeasible)
        raise(Errc::InfeasibleTarget, "target distortion " + std::to_string(target_distortion) +
                                          " is below d_min = " + std::to_string(range.d_min));
    return detail::ba_bisect(inst, target_distortion, /*decreasing=*/true, cfg);
}

/// Adaptive multiplier search against a rate target (non-decreasing achieved
/// rate in lambda).
inline BaReport ba_search_dr(const ProblemInstance& inst, double target_rate, const BaConfig& cfg = {}) {
    if (!(target_rate > 0.0))
        raise(Errc::NonPositiveRate, "target rate must be positive, got " + std::to_string(target_rate));
    return detail::ba_bisect(inst, target_rate, /*decreasing=*/false, cfg);
}

} // namespace ratedist
