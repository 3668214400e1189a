#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ratedist/oracle.hpp"
#include "ratedist/sources.hpp"

using namespace ratedist;
using oracle::analytic_binary_rd;
using oracle::analytic_gaussian_rd;
using oracle::grid_search_rd;

TEST_CASE("analytic binary curve") {
    const double hb25 = -0.25 * std::log(0.25) - 0.75 * std::log(0.75);
    CHECK(analytic_binary_rd(0.5, 0.25) == Catch::Approx(std::log(2.0) - hb25).margin(1e-15));
    CHECK(analytic_binary_rd(0.5, 0.0) == Catch::Approx(std::log(2.0)).margin(1e-15));
    CHECK(analytic_binary_rd(0.5, 0.5) == 0.0);
    CHECK(analytic_binary_rd(0.5, 0.7) == 0.0);
    CHECK_THROWS_AS(analytic_binary_rd(0.5, -0.1), Error);
    CHECK_THROWS_AS(analytic_binary_rd(1.2, 0.1), Error);
}

TEST_CASE("analytic Gaussian curve") {
    CHECK(analytic_gaussian_rd(1.0, 0.5) == Catch::Approx(0.3465735902799726).margin(1e-15));
    CHECK(analytic_gaussian_rd(1.0, 1.0) == 0.0);
    CHECK(analytic_gaussian_rd(2.0, 1.0) == Catch::Approx(std::log(2.0)).margin(1e-15));
    CHECK_THROWS_AS(analytic_gaussian_rd(1.0, 1.5), Error);
    CHECK_THROWS_AS(analytic_gaussian_rd(1.0, 0.0), Error);
    CHECK_THROWS_AS(analytic_gaussian_rd(-1.0, 0.5), Error);
}

TEST_CASE("grid search approaches the analytic binary value from above") {
    auto inst = validate_instance(binary_hamming(0.5));
    const double analytic = analytic_binary_rd(0.5, 0.25);
    auto res = grid_search_rd(inst, 0.25, 200);
    CHECK(res.rate >= analytic - 1e-12);
    CHECK(res.rate == Catch::Approx(analytic).margin(1e-3));
}

TEST_CASE("grid search upper bound never worsens with resolution") {
    auto inst = validate_instance(binary_hamming(0.5));
    double prev = std::numeric_limits<double>::infinity();
    for (int res : {25, 50, 100, 200}) {
        const double rate = grid_search_rd(inst, 0.25, res).rate;
        CHECK(rate <= prev + 1e-12);
        prev = rate;
    }
}

TEST_CASE("grid search returns zero at and beyond the zero-rate boundary") {
    auto inst = validate_instance(binary_hamming(0.5));
    CHECK(grid_search_rd(inst, 0.5, 50).rate == Catch::Approx(0.0).margin(1e-12));
    CHECK(grid_search_rd(inst, 0.9, 50).rate == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("grid search cost guards") {
    ProblemInstance big;
    big.p = {0.25, 0.25, 0.25, 0.25};
    big.d.assign(16, 1.0);
    big.num_source = big.num_repro = 4;
    big = validate_instance(std::move(big));
    CHECK_THROWS_MATCHES(grid_search_rd(big, 0.5, 10), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::TooLarge; }));

    auto ok = validate_instance(binary_hamming(0.5));
    CHECK_THROWS_AS(grid_search_rd(ok, 0.25, 201), Error);
}
