#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ratedist/errors.hpp"
#include "ratedist/kernels.hpp"
#include "ratedist/problem.hpp"

// Independent reference computations used to validate the solvers. Nothing
// here touches the iterative machinery: closed forms plus brute force only.

namespace ratedist::oracle {

struct OracleResult {
    double rate = 0.0;  ///< nats
    double distortion = 0.0;
    enum class Method { AnalyticBinary, AnalyticGaussianSLB, GridSearch } method;
};

inline double binary_entropy(double q) {
    if (q == 0.0 || q == 1.0) return 0.0;
    return -q * std::log(q) - (1.0 - q) * std::log(1.0 - q);
}

/// Closed-form curve of a binary source under Hamming distortion:
/// H_b(p) - H_b(D) nats for D up to min(p, 1-p), zero beyond.
inline double analytic_binary_rd(double p, double target) {
    if (!(p > 0.0 && p < 1.0)) raise(Errc::OutOfRange, "p must lie in (0, 1)");
    if (!(target >= 0.0)) raise(Errc::OutOfRange, "distortion must be nonnegative");
    const double dmax = std::min(p, 1.0 - p);
    if (target >= dmax) return 0.0;
    return binary_entropy(p) - binary_entropy(target);
}

/// Closed-form curve of a Gaussian source under squared error:
/// (1/2) log(sigma^2 / D) nats on (0, sigma^2].
inline double analytic_gaussian_rd(double sigma, double target) {
    if (!(sigma > 0.0)) raise(Errc::OutOfRange, "sigma must be positive");
    if (!(target > 0.0 && target <= sigma * sigma))
        raise(Errc::OutOfRange, "distortion must lie in (0, sigma^2]");
    return 0.5 * std::log(sigma * sigma / target);
}

namespace detail {

/// All length-n compositions of `resolution` parts, as probability rows.
inline std::vector<std::vector<double>> simplex_grid(std::size_t n, int resolution) {
    std::vector<std::vector<double>> rows;
    std::vector<int> parts(n, 0);
    const auto emit = [&]() {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j)
            row[j] = static_cast<double>(parts[j]) / static_cast<double>(resolution);
        rows.push_back(std::move(row));
    };
    // Odometer over the first n-1 coordinates; the last takes the remainder.
    const auto rec = [&](auto&& self, std::size_t idx, int remaining) -> void {
        if (idx == n - 1) {
            parts[idx] = remaining;
            emit();
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            parts[idx] = v;
            self(self, idx + 1, remaining - v);
        }
    };
    rec(rec, 0, resolution);
    return rows;
}

} // namespace detail

/// Exhaustive minimization of the mutual information over row-stochastic
/// conditionals on a per-row simplex grid, keeping those within the
/// distortion budget. The reproduction marginal is the source-weighted row
/// mixture, which is optimal for any fixed conditional, so only the
/// conditional is enumerated. Because the grid conditionals are a subset of
/// the feasible set, the result is a true upper bound on the rate, and
/// doubling the resolution refines the grid in place, so the bound
/// converges from above. Cost grows as C(resolution + N - 1, N - 1)^M,
/// hence the size guards.
inline OracleResult grid_search_rd(const ProblemInstance& inst, double target, int resolution) {
    const std::size_t m = inst.num_source;
    const std::size_t n = inst.num_repro;
    if (m > 3 || n > 3 || resolution > 200)
        raise(Errc::TooLarge, "grid search is guarded to M <= 3, N <= 3, resolution <= 200");

    const std::vector<std::vector<double>> rows = detail::simplex_grid(n, resolution);
    const double combos = std::pow(static_cast<double>(rows.size()), static_cast<double>(m));
    if (combos > 5e8) raise(Errc::TooLarge, "grid search would enumerate > 5e8 conditionals");

    // Per candidate row: expected distortion against each source row and the
    // negative entropy; the mutual information of a full conditional is then
    // sum_i p_i negH(row_i) + H(mixture).
    std::vector<std::vector<double>> row_dist(m, std::vector<double>(rows.size()));
    std::vector<double> row_negent(rows.size());
    for (std::size_t c = 0; c < rows.size(); ++c) {
        double neg = 0.0;
        for (double v : rows[c])
            if (v > 0.0) neg += v * std::log(v);
        row_negent[c] = neg;
        for (std::size_t i = 0; i < m; ++i) {
            const double* di = inst.dist_row(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += rows[c][j] * di[j];
            row_dist[i][c] = acc;
        }
    }

    // A hair of slack absorbs accumulation rounding only; the feasible set
    // stays a subset of the true one for grid-representable targets.
    const double budget = target * (1.0 + 1e-12) + 1e-15;
    double best_rate = std::numeric_limits<double>::infinity();
    double best_distortion = 0.0;

    std::vector<std::size_t> pick(m, 0);
    std::vector<double> mix(n);
    const auto rec = [&](auto&& self, std::size_t i, double dist_so_far) -> void {
        if (dist_so_far > budget) return;
        if (i == m) {
            std::fill(mix.begin(), mix.end(), 0.0);
            double neg = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                neg += inst.p[k] * row_negent[pick[k]];
                for (std::size_t j = 0; j < n; ++j) mix[j] += inst.p[k] * rows[pick[k]][j];
            }
            double ent = 0.0;
            for (double v : mix)
                if (v > 0.0) ent -= v * std::log(v);
            const double rate = neg + ent;
            if (rate < best_rate) {
                best_rate = rate;
                best_distortion = dist_so_far;
            }
            return;
        }
        for (std::size_t c = 0; c < rows.size(); ++c) {
            pick[i] = c;
            self(self, i + 1, dist_so_far + inst.p[i] * row_dist[i][c]);
        }
    };
    rec(rec, 0, 0.0);

    if (!std::isfinite(best_rate))
        raise(Errc::OutOfRange, "no grid conditional met the distortion budget " + std::to_string(budget));
    return {best_rate < 0.0 ? 0.0 : best_rate, best_distortion, OracleResult::Method::GridSearch};
}

} // namespace ratedist::oracle
