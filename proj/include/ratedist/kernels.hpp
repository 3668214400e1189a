#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ratedist/errors.hpp"
#include "ratedist/problem.hpp"

namespace ratedist {

/// Lagrange multiplier of the active constraint; geometrically the negated
/// slope of the rate-distortion curve. Nonnegative for rate solves, strictly
/// positive for distortion solves.
struct Multiplier {
    double value = 0.0;
};

/// Per-evaluation scratch for the exponential kernel e^{-lambda d_ij} r_j.
///
/// All exponentials are taken after shifting each row by its minimum
/// distortion, so the largest term per row is at most 1 and raw underflow of
/// e^{-lambda d} at large multipliers cannot wipe out a row. The shift
/// cancels exactly in the conditional-mean and w-update ratios and is
/// compensated additively wherever a log of the partition value is needed.
///
/// One refresh() feeds the gap value, its derivative, and the w update, so a
/// Newton step costs a single O(MN) pass.
struct KernelWorkspace {
    std::vector<double> row_min_d;   ///< min_j d_ij, fixed per instance
    std::vector<double> scratch;     ///< e^{-lambda (d_ij - row_min)} r_j, row-major
    std::vector<double> row_sums;    ///< Z_i = sum_j scratch_ij
    std::vector<double> row_mean_d;  ///< E_i[d - row_min] under the kernel row
    std::vector<double> row_mean_d2; ///< E_i[(d - row_min)^2] under the kernel row
    double lambda = std::numeric_limits<double>::quiet_NaN();  ///< multiplier of last refresh

    KernelWorkspace() = default;

    explicit KernelWorkspace(const ProblemInstance& inst)
        : row_min_d(inst.num_source),
          scratch(inst.num_source * inst.num_repro),
          row_sums(inst.num_source),
          row_mean_d(inst.num_source),
          row_mean_d2(inst.num_source) {
        for (std::size_t i = 0; i < inst.num_source; ++i) {
            const double* di = inst.dist_row(i);
            double m = di[0];
            for (std::size_t j = 1; j < inst.num_repro; ++j) m = std::min(m, di[j]);
            row_min_d[i] = m;
        }
    }

    /// Recompute scratch, partition values and the shifted conditional
    /// moments for the given reproduction distribution and multiplier.
    /// Throws DegenerateRow if a row with positive source mass loses its
    /// entire partition sum (all supported reproduction letters underflow).
    void refresh(const ProblemInstance& inst, const ReproductionDistribution& r, Multiplier mult) {
        const std::size_t m = inst.num_source;
        const std::size_t n = inst.num_repro;
        const double lam = mult.value;
        for (std::size_t i = 0; i < m; ++i) {
            const double* di = inst.dist_row(i);
            double* ti = scratch.data() + i * n;
            const double shift = row_min_d[i];
            double z = 0.0, s1 = 0.0, s2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double dd = di[j] - shift;
                const double t = std::exp(-lam * dd) * r.r[j];
                ti[j] = t;
                z += t;
                s1 += dd * t;
                s2 += dd * dd * t;
            }
            row_sums[i] = z;
            if (z > 0.0) {
                row_mean_d[i] = s1 / z;
                row_mean_d2[i] = s2 / z;
            } else {
                if (inst.p[i] > 0.0)
                    raise(Errc::DegenerateRow,
                          "partition sum underflowed in row " + std::to_string(i) +
                              " at lambda = " + std::to_string(lam));
                row_mean_d[i] = 0.0;
                row_mean_d2[i] = 0.0;
            }
        }
        lambda = lam;
    }

    /// Conditional variance of the distortion in row i; shift-invariant, so
    /// computed from the shifted moments without cancellation against the
    /// row minimum.
    double row_var(std::size_t i) const {
        const double mu = row_mean_d[i];
        double v = row_mean_d2[i] - mu * mu;
        return v > 0.0 ? v : 0.0;
    }
};

struct GapEval {
    double value = 0.0;
    double derivative = 0.0;
};

namespace detail {

inline void refresh_if_needed(const ProblemInstance& inst, const ReproductionDistribution& r,
                              Multiplier mult, KernelWorkspace& ws) {
    if (ws.row_sums.size() != inst.num_source || ws.scratch.size() != inst.num_source * inst.num_repro)
        ws = KernelWorkspace(inst);
    ws.refresh(inst, r, mult);
}

} // namespace detail

/// Expected distortion of the kernel-optimal conditional minus the target:
/// the monotone function whose root in lambda enforces E[d] = target on a
/// rate solve. Strictly non-increasing; derivative is -sum_i p_i Var_i[d].
inline GapEval distortion_gap(const ProblemInstance& inst, const ReproductionDistribution& r,
                              Multiplier mult, double target_distortion, KernelWorkspace& ws) {
    detail::refresh_if_needed(inst, r, mult, ws);
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        mean += pi * (ws.row_mean_d[i] + ws.row_min_d[i]);
        var += pi * ws.row_var(i);
    }
    return {mean - target_distortion, -var};
}

/// Mutual information achieved by the kernel-optimal conditional minus the
/// target rate: the monotone function whose root in lambda enforces the rate
/// constraint on a distortion solve. Non-decreasing for lambda > 0;
/// derivative is lambda * sum_i p_i Var_i[d]. The partition log is evaluated
/// as log(shifted sum) - lambda * row_min, which here cancels the row-min
/// contribution of the mean term entirely.
inline GapEval rate_gap(const ProblemInstance& inst, const ReproductionDistribution& r,
                        Multiplier mult, double target_rate, KernelWorkspace& ws) {
    detail::refresh_if_needed(inst, r, mult, ws);
    const double lam = mult.value;
    double acc = 0.0, var = 0.0;
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        acc += pi * (std::log(ws.row_sums[i]) + lam * ws.row_mean_d[i]);
        var += pi * ws.row_var(i);
    }
    return {-acc - target_rate, lam * var};
}

/// Closed-form conditional update w_ij = e^{-lambda d_ij} r_j / Z_i. Reuses
/// the workspace scratch when it already holds this multiplier (the usual
/// case right after a root find), otherwise refreshes it. Rows with zero
/// source mass whose partition sum underflowed carry no information; they
/// are set to the row's cheapest reproduction letter to keep w stochastic.
inline void update_w(const ProblemInstance& inst, const ReproductionDistribution& r, Multiplier mult,
                     KernelWorkspace& ws, ConditionalDistribution& out) {
    const std::size_t m = inst.num_source;
    const std::size_t n = inst.num_repro;
    if (!(ws.lambda == mult.value) || ws.scratch.size() != m * n)
        detail::refresh_if_needed(inst, r, mult, ws);
    out.rows = m;
    out.cols = n;
    out.w.resize(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ti = ws.scratch.data() + i * n;
        double* wi = out.w.data() + i * n;
        const double z = ws.row_sums[i];
        if (z > 0.0) {
            for (std::size_t j = 0; j < n; ++j) wi[j] = ti[j] / z;
        } else {
            const double* di = inst.dist_row(i);
            std::size_t jmin = 0;
            for (std::size_t j = 1; j < n; ++j)
                if (di[j] < di[jmin]) jmin = j;
            for (std::size_t j = 0; j < n; ++j) wi[j] = 0.0;
            wi[jmin] = 1.0;
        }
    }
}

inline ConditionalDistribution update_w(const ProblemInstance& inst, const ReproductionDistribution& r,
                                        Multiplier mult, KernelWorkspace& ws) {
    ConditionalDistribution out;
    update_w(inst, r, mult, ws, out);
    return out;
}

/// Reproduction update r_j = sum_i w_ij p_i (the optimal marginal for a
/// fixed conditional).
inline void update_r(const ProblemInstance& inst, const ConditionalDistribution& w,
                     ReproductionDistribution& out) {
    const std::size_t m = inst.num_source;
    const std::size_t n = inst.num_repro;
    out.r.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        const double* wi = w.row(i);
        for (std::size_t j = 0; j < n; ++j) out.r[j] += pi * wi[j];
    }
}

inline ReproductionDistribution update_r(const ProblemInstance& inst, const ConditionalDistribution& w) {
    ReproductionDistribution out;
    update_r(inst, w, out);
    return out;
}

/// Rate objective sum_ij p_i w_ij (log w_ij - log r_j) in nats. Zero terms
/// follow the 0 log 0 = 0 convention; a pair with w_ij > 0 but r_j = 0 on a
/// row with source mass is a SupportViolation.
inline double rate_objective(const ProblemInstance& inst, const ConditionalDistribution& w,
                             const ReproductionDistribution& r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        const double* wi = w.row(i);
        for (std::size_t j = 0; j < inst.num_repro; ++j) {
            const double wij = wi[j];
            if (wij == 0.0) continue;
            if (r.r[j] == 0.0)
                raise(Errc::SupportViolation,
                      "w[" + std::to_string(i) + "][" + std::to_string(j) + "] > 0 but r[" +
                          std::to_string(j) + "] = 0");
            acc += pi * wij * (std::log(wij) - std::log(r.r[j]));
        }
    }
    return acc;
}

/// Expected distortion sum_ij p_i w_ij d_ij.
inline double distortion_objective(const ProblemInstance& inst, const ConditionalDistribution& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        const double* wi = w.row(i);
        const double* di = inst.dist_row(i);
        double row = 0.0;
        for (std::size_t j = 0; j < inst.num_repro; ++j) row += wi[j] * di[j];
        acc += pi * row;
    }
    return acc;
}

/// Rate objective of the kernel-updated conditional against the r used to
/// build it, read off the workspace in O(M): for w_ij = t_ij / Z_i the sum
/// p_i w_ij (log w_ij - log r_j) collapses to
/// -sum_i p_i (log Z_i + lambda E_i[d - row_min]). Equal to
/// rate_objective(inst, update_w(...), r) up to rounding.
inline double kernel_rate_value(const ProblemInstance& inst, const KernelWorkspace& ws) {
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        acc += pi * (std::log(ws.row_sums[i]) + ws.lambda * ws.row_mean_d[i]);
    }
    return -acc;
}

/// Expected distortion of the kernel-updated conditional, read off the
/// workspace in O(M).
inline double kernel_distortion_value(const ProblemInstance& inst, const KernelWorkspace& ws) {
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        const double pi = inst.p[i];
        if (pi == 0.0) continue;
        acc += pi * (ws.row_mean_d[i] + ws.row_min_d[i]);
    }
    return acc;
}

/// KL divergence sum_j a_j log(a_j / b_j) in nats, with 0 log 0 = 0.
/// Assumes supp(a) within supp(b), which holds for successive reproduction
/// iterates (the update never grows support).
inline double kl_divergence(const ReproductionDistribution& a, const ReproductionDistribution& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.r.size(); ++j) {
        if (a.r[j] == 0.0) continue;
        acc += a.r[j] * (std::log(a.r[j]) - std::log(b.r[j]));
    }
    return acc;
}

} // namespace ratedist
