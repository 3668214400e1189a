#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ratedist/errors.hpp"
#include "ratedist/problem.hpp"

namespace ratedist {

/// Uniform discretization of [-half_width, half_width]: source_points cell
/// midpoints for the input alphabet, repro_points for the output alphabet.
struct GridSpec {
    double half_width = 8.0;       ///< L
    std::size_t source_points = 100;  ///< K
    std::size_t repro_points = 100;   ///< N
};

enum class DistortionKind { SquaredError, AbsoluteError };

struct Density {
    enum class Family { Gaussian, Laplacian, Uniform };
    Family family = Family::Gaussian;
    double param = 1.0;  ///< sigma for Gaussian, scale b for Laplacian, unused for Uniform
};

inline std::vector<double> grid_points(double half_width, std::size_t count) {
    const double step = 2.0 * half_width / static_cast<double>(count);
    std::vector<double> pts(count);
    // Fill the lower half by the midpoint formula and mirror the rest, so
    // the grid is symmetric to the last bit and symmetric densities come
    // out exactly palindromic.
    for (std::size_t i = 0; i < count / 2; ++i) {
        pts[i] = -half_width + (static_cast<double>(i) + 0.5) * step;
        pts[count - 1 - i] = -pts[i];
    }
    if (count % 2 == 1) pts[count / 2] = 0.0;
    return pts;
}

/// Cell midpoints x_i = -L + (i - 1/2) * 2L/K for both alphabets.
inline std::pair<std::vector<double>, std::vector<double>> make_grid(const GridSpec& spec) {
    return {grid_points(spec.half_width, spec.source_points),
            grid_points(spec.half_width, spec.repro_points)};
}

/// Truncates the density to the grid, evaluates it pointwise at the cell
/// midpoints and renormalizes (any constant factor cancels). Density values
/// below 1e-300 become exact zeros; the model permits zero-mass source
/// letters. The distortion matrix is (x - y)^2 or |x - y| on the grid pair.
inline ProblemInstance discretize_density(const Density& density, const GridSpec& spec,
                                          DistortionKind kind) {
    if (spec.half_width <= 0.0 || spec.source_points < 1 || spec.repro_points < 1)
        raise(Errc::ShapeMismatch, "grid spec requires L > 0, K >= 1, N >= 1");
    if ((density.family == Density::Family::Gaussian || density.family == Density::Family::Laplacian) &&
        !(density.param > 0.0))
        raise(Errc::OutOfRange, "density scale parameter must be positive");

    auto [xs, ys] = make_grid(spec);
    ProblemInstance inst;
    inst.num_source = spec.source_points;
    inst.num_repro = spec.repro_points;
    inst.p.resize(xs.size());

    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = 1.0;
        switch (density.family) {
            case Density::Family::Gaussian:
                v = std::exp(-xs[i] * xs[i] / (2.0 * density.param * density.param));
                break;
            case Density::Family::Laplacian:
                v = std::exp(-std::abs(xs[i]) / density.param);
                break;
            case Density::Family::Uniform:
                v = 1.0;
                break;
        }
        if (v < 1e-300) v = 0.0;
        inst.p[i] = v;
        total += v;
    }
    for (double& pi : inst.p) pi /= total;

    inst.d.resize(xs.size() * ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double diff = xs[i] - ys[j];
            inst.d[i * ys.size() + j] =
                kind == DistortionKind::SquaredError ? diff * diff : std::abs(diff);
        }
    }
    inst.source_labels = std::move(xs);
    inst.repro_labels = std::move(ys);
    return validate_instance(std::move(inst));
}

/// Binary source (p, 1-p) under Hamming distortion; the standard instance
/// with a closed-form rate-distortion function.
inline ProblemInstance binary_hamming(double p) {
    if (!(p > 0.0 && p < 1.0))
        raise(Errc::OutOfRange, "binary source probability must lie in (0, 1)");
    ProblemInstance inst;
    inst.p = {p, 1.0 - p};
    inst.d = {0.0, 1.0, 1.0, 0.0};
    inst.num_source = 2;
    inst.num_repro = 2;
    return inst;
}

/// Two-letter source with a three-letter reproduction alphabet whose curve
/// has two bifurcations and a linear segment between them; the classic
/// stress case for fixed-slope sweeps.
inline ProblemInstance berger_bifurcation() {
    ProblemInstance inst;
    inst.p = {0.4, 0.6};
    inst.d = {1.0, 0.0, 0.3, 0.0, 1.0, 0.3};
    inst.num_source = 2;
    inst.num_repro = 3;
    return inst;
}

} // namespace ratedist
