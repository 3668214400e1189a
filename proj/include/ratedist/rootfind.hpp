#pragma once

#include <cmath>
#include <utility>

namespace ratedist {

enum class Direction { Decreasing, Increasing };

/// Settings for the one-dimensional monotone root find. The solve stops as
/// soon as |G(lambda)| <= tolerance; max_newton_steps bounds the refinement
/// steps after a bracket exists.
struct RootConfig {
    double tolerance = 1e-12;
    int max_newton_steps = 100;
    double bracket_growth = 2.0;
    double initial_guess = 1.0;
};

enum class RootStatus { Converged, MaxSteps, BracketFailed };

struct RootResult {
    double lambda_star = 0.0;
    double residual = 0.0;
    int newton_steps = 0;
    int bisection_steps = 0;
    int evaluations = 0;
    RootStatus status = RootStatus::Converged;
};

/// Safeguarded Newton for a monotone function G on [domain_min, inf).
///
/// The caller guarantees a sign change exists on the domain (for a
/// decreasing G: positive near domain_min, nonpositive in the limit).
/// Procedure: bracket the root by exponential expansion from the initial
/// guess, then run Newton from the guess, projecting any iterate that
/// leaves the bracket (or meets a vanishing derivative) onto the bracket
/// midpoint. Every evaluation shrinks the bracket, and Newton stagnation
/// without residual decrease falls back to bisection, so the bracket
/// invariant sign(G(lo)) != sign(G(hi)) holds throughout.
///
/// G must be callable as g(double) returning an object with .value and
/// .derivative members.
template <typename G>
RootResult solve_monotone(G&& g, Direction direction, const RootConfig& cfg, double domain_min = 0.0) {
    RootResult res;
    // Normalize to a decreasing function: h(x) = +-G(x).
    const double flip = (direction == Direction::Decreasing) ? 1.0 : -1.0;
    const auto eval = [&](double x, double& h, double& dh) {
        auto e = g(x);
        ++res.evaluations;
        res.lambda_star = x;
        res.residual = e.value;
        h = flip * e.value;
        dh = flip * e.derivative;
    };

    double x = std::max(cfg.initial_guess, domain_min);
    double h, dh;
    eval(x, h, dh);
    if (std::abs(res.residual) <= cfg.tolerance) return res;

    // Bracket [lo, hi] with h(lo) > 0 > h(hi) by exponential expansion.
    constexpr int kMaxExpansions = 200;
    double lo, hi, h_lo, h_hi, dh_lo, dh_hi;
    if (h > 0.0) {
        lo = x;
        h_lo = h;
        dh_lo = dh;
        double cur = (x > 0.0) ? x : 1.0 / cfg.bracket_growth;
        int k = 0;
        for (;; ++k) {
            if (k >= kMaxExpansions) {
                res.status = RootStatus::BracketFailed;
                return res;
            }
            cur *= cfg.bracket_growth;
            eval(cur, h, dh);
            if (std::abs(res.residual) <= cfg.tolerance) return res;
            if (h <= 0.0) break;
            lo = cur;
            h_lo = h;
            dh_lo = dh;
        }
        hi = cur;
        h_hi = h;
        dh_hi = dh;
    } else {
        hi = x;
        h_hi = h;
        dh_hi = dh;
        double cur = x;
        int k = 0;
        for (;; ++k) {
            if (k >= kMaxExpansions) {
                res.status = RootStatus::BracketFailed;
                return res;
            }
            double next = cur / cfg.bracket_growth;
            if (next < domain_min) next = domain_min;
            eval(next, h, dh);
            if (std::abs(res.residual) <= cfg.tolerance) return res;
            if (h > 0.0) break;
            hi = next;
            h_hi = h;
            dh_hi = dh;
            if (next == domain_min) {
                // No sign change on the whole domain.
                res.status = RootStatus::BracketFailed;
                return res;
            }
            cur = next;
        }
        lo = res.lambda_star;
        h_lo = h;
        dh_lo = dh;
    }

    // Newton from the bracket endpoint nearest the warm start, midpoint
    // bisection whenever the step is unusable.
    const bool start_low = std::abs(cfg.initial_guess - lo) <= std::abs(cfg.initial_guess - hi);
    x = start_low ? lo : hi;
    h = start_low ? h_lo : h_hi;
    dh = start_low ? dh_lo : dh_hi;
    double prev_abs_h = std::abs(h);
    bool force_bisection = false;

    for (int step = 0; step < cfg.max_newton_steps; ++step) {
        double x_next;
        bool is_newton = false;
        if (!force_bisection && std::abs(dh) >= 1e-300) {
            x_next = x - h / dh;
            is_newton = (x_next > lo && x_next < hi);
        }
        if (!is_newton || force_bisection) {
            x_next = 0.5 * (lo + hi);
            is_newton = false;
        }
        const double step_size = std::abs(x_next - x);
        if (is_newton)
            ++res.newton_steps;
        else
            ++res.bisection_steps;

        eval(x_next, h, dh);
        if (std::abs(res.residual) <= cfg.tolerance) return res;

        // Stagnating Newton without residual progress switches to bisection.
        force_bisection = is_newton && step_size < 1e-16 * (1.0 + std::abs(x)) && std::abs(h) >= prev_abs_h;
        prev_abs_h = std::abs(h);

        if (h > 0.0)
            lo = x_next;
        else
            hi = x_next;
        x = x_next;
    }
    res.status = RootStatus::MaxSteps;
    return res;
}

} // namespace ratedist
