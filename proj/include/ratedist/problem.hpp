#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ratedist/errors.hpp"

namespace ratedist {

/// A finite rate-distortion problem: a source distribution p over M letters
/// and a nonnegative M x N distortion matrix against N reproduction letters.
///
/// Instances are plain data; run them through validate_instance() once and
/// treat them as immutable afterwards. Validated instances are safe to share
/// read-only across threads.
struct ProblemInstance {
    std::vector<double> p;   ///< source probabilities, length M
    std::vector<double> d;   ///< distortion matrix, row-major M x N
    std::size_t num_source = 0;  ///< M
    std::size_t num_repro = 0;   ///< N

    /// Optional real grid labels (empty when the alphabets are abstract).
    std::vector<double> source_labels;
    std::vector<double> repro_labels;

    double dist(std::size_t i, std::size_t j) const { return d[i * num_repro + j]; }
    const double* dist_row(std::size_t i) const { return d.data() + i * num_repro; }
};

/// Row-stochastic conditional distribution w[i][j] = P(Y = y_j | X = x_i).
struct ConditionalDistribution {
    std::vector<double> w;  ///< row-major rows x cols
    std::size_t rows = 0;
    std::size_t cols = 0;

    double operator()(std::size_t i, std::size_t j) const { return w[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return w[i * cols + j]; }
    const double* row(std::size_t i) const { return w.data() + i * cols; }

    /// Max over rows of |sum_j w_ij - 1|; rows must stay within 1e-10.
    double max_row_sum_error() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += w[i * cols + j];
            worst = std::max(worst, std::abs(s - 1.0));
        }
        return worst;
    }
};

/// Marginal distribution of the reproduction letter.
struct ReproductionDistribution {
    std::vector<double> r;

    std::size_t size() const { return r.size(); }
    double operator[](std::size_t j) const { return r[j]; }

    double sum_error() const {
        double s = 0.0;
        for (double v : r) s += v;
        return std::abs(s - 1.0);
    }

    static ReproductionDistribution uniform(std::size_t n) {
        return ReproductionDistribution{std::vector<double>(n, 1.0 / static_cast<double>(n))};
    }
};

/// Distortion interval on which the rate-distortion function is finite and
/// nonzero: infeasible below d_min, identically zero at or above d_max.
struct FeasibilityRange {
    double d_min = 0.0;
    double d_max = 0.0;
};

enum class TargetClass { Infeasible, Interior, ZeroRate };

inline const char* to_string(TargetClass c) noexcept {
    switch (c) {
        case TargetClass::Infeasible: return "Infeasible";
        case TargetClass::Interior: return "Interior";
        case TargetClass::ZeroRate: return "ZeroRate";
    }
    return "?";
}

/// Checks shapes, signs and normalization. Probability vectors whose sum
/// deviates from 1 by at most 1e-9 are renormalized in place (discretized
/// continuous sources carry small truncation mass defects); larger
/// deviations are rejected as NonStochastic.
inline ProblemInstance validate_instance(ProblemInstance inst) {
    const std::size_t m = inst.num_source;
    const std::size_t n = inst.num_repro;
    if (m < 1 || n < 1)
        raise(Errc::ShapeMismatch, "alphabet sizes must satisfy M >= 1 and N >= 1");
    if (inst.p.size() != m)
        raise(Errc::ShapeMismatch, "p has " + std::to_string(inst.p.size()) +
                                       " entries, expected M = " + std::to_string(m));
    if (inst.d.size() != m * n)
        raise(Errc::ShapeMismatch, "d has " + std::to_string(inst.d.size()) +
                                       " entries, expected M*N = " + std::to_string(m * n));
    if (!inst.source_labels.empty() && inst.source_labels.size() != m)
        raise(Errc::ShapeMismatch, "source_labels length does not match M");
    if (!inst.repro_labels.empty() && inst.repro_labels.size() != n)
        raise(Errc::ShapeMismatch, "repro_labels length does not match N");

    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pi = inst.p[i];
        if (!(pi >= 0.0) || !std::isfinite(pi))
            raise(Errc::NegativeProbability, "p[" + std::to_string(i) + "] = " + std::to_string(pi));
        sum += pi;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        raise(Errc::NonStochastic, "sum(p) = " + std::to_string(sum));
    // Renormalize only genuine mass defects; vectors already within the
    // 1e-12 invariant stay untouched so validation is idempotent at the ulp
    // level (and saved instances reload bit-exactly).
    if (std::abs(sum - 1.0) > 1e-12) {
        for (double& pi : inst.p) pi /= sum;
    }

    for (std::size_t k = 0; k < inst.d.size(); ++k) {
        const double v = inst.d[k];
        if (!(v >= 0.0) || !std::isfinite(v))
            raise(Errc::NegativeDistortion,
                  "d[" + std::to_string(k / n) + "][" + std::to_string(k % n) + "] = " + std::to_string(v));
    }
    return inst;
}

/// d_min = min_{i,j} d_ij and d_max = min_j sum_i p_i d_ij. R(D) is +inf for
/// D < d_min and 0 for D >= d_max; solvers run only on the open interior.
inline FeasibilityRange feasibility_range(const ProblemInstance& inst) {
    double dmin = std::numeric_limits<double>::infinity();
    for (double v : inst.d) dmin = std::min(dmin, v);

    double dmax = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.num_repro; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < inst.num_source; ++i) col += inst.p[i] * inst.dist(i, j);
        dmax = std::min(dmax, col);
    }
    return {dmin, dmax};
}

/// Index of the column attaining d_max (the zero-rate reproduction letter).
inline std::size_t zero_rate_column(const ProblemInstance& inst) {
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.num_repro; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < inst.num_source; ++i) col += inst.p[i] * inst.dist(i, j);
        if (col < best_val) {
            best_val = col;
            best = j;
        }
    }
    return best;
}

inline TargetClass classify_target_distortion(const FeasibilityRange& range, double target) {
    if (target < range.d_min) return TargetClass::Infeasible;
    if (target >= range.d_max) return TargetClass::ZeroRate;
    return TargetClass::Interior;
}

} // namespace ratedist
