#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "ratedist/io.hpp"
#include "ratedist/sources.hpp"

using namespace ratedist;

TEST_CASE("make_grid places cell midpoints") {
    SECTION("two half-intervals") {
        auto [xs, ys] = make_grid(GridSpec{8.0, 2, 2});
        REQUIRE(xs.size() == 2);
        CHECK(xs[0] == -4.0);
        CHECK(xs[1] == 4.0);
        CHECK(ys == xs);
    }
    SECTION("hundred points") {
        auto [xs, ys] = make_grid(GridSpec{8.0, 100, 100});
        CHECK(xs.front() == Catch::Approx(-7.92).margin(1e-12));
        CHECK(xs.back() == Catch::Approx(7.92).margin(1e-12));
        CHECK(xs[1] - xs[0] == Catch::Approx(0.16).margin(1e-12));
    }
    SECTION("single point sits at the origin") {
        auto [xs, ys] = make_grid(GridSpec{1.0, 1, 1});
        REQUIRE(xs.size() == 1);
        CHECK(xs[0] == 0.0);
    }
}

TEST_CASE("uniform density discretizes to a flat vector") {
    auto inst = discretize_density({Density::Family::Uniform, 0.0}, {8.0, 4, 4},
                                   DistortionKind::SquaredError);
    for (double pi : inst.p) CHECK(pi == 0.25);
}

TEST_CASE("two-point Gaussian grid") {
    auto inst = discretize_density({Density::Family::Gaussian, 1.0}, {8.0, 2, 2},
                                   DistortionKind::SquaredError);
    CHECK(inst.p[0] == 0.5);
    CHECK(inst.p[1] == 0.5);
    CHECK(inst.dist(0, 0) == 0.0);
    CHECK(inst.dist(0, 1) == 64.0);
    CHECK(inst.dist(1, 0) == 64.0);
}

TEST_CASE("three-point Laplacian is symmetric with the mode at zero") {
    auto inst = discretize_density({Density::Family::Laplacian, 1.0}, {8.0, 3, 3},
                                   DistortionKind::AbsoluteError);
    CHECK(inst.p[1] > inst.p[0]);
    CHECK(inst.p[0] == inst.p[2]);
}

TEST_CASE("discretized mass sums to one exactly enough for validation") {
    for (auto family : {Density::Family::Gaussian, Density::Family::Laplacian}) {
        auto inst = discretize_density({family, 1.0}, {8.0, 100, 100}, DistortionKind::SquaredError);
        double sum = 0.0;
        for (double pi : inst.p) sum += pi;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("symmetric densities produce bitwise palindromic mass") {
    for (std::size_t k : {std::size_t{20}, std::size_t{99}, std::size_t{100}}) {
        auto inst = discretize_density({Density::Family::Gaussian, 1.0}, {8.0, k, k},
                                       DistortionKind::SquaredError);
        for (std::size_t i = 0; i < k; ++i) CHECK(inst.p[i] == inst.p[k - 1 - i]);
    }
}

TEST_CASE("matched grids have an exactly zero diagonal") {
    auto inst = discretize_density({Density::Family::Laplacian, 1.0}, {8.0, 30, 30},
                                   DistortionKind::AbsoluteError);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 30; ++j) {
            if (i == j)
                CHECK(inst.dist(i, j) == 0.0);
            else
                CHECK(inst.dist(i, j) > 0.0);
        }
    }
}

TEST_CASE("far tails underflow to exact zeros and stay valid") {
    auto inst = discretize_density({Density::Family::Gaussian, 1.0}, {60.0, 5, 5},
                                   DistortionKind::SquaredError);
    CHECK(inst.p[0] == 0.0);
    CHECK(inst.p[2] > 0.0);
}

TEST_CASE("canonical instances are exactly the published matrices") {
    auto berger = berger_bifurcation();
    CHECK(berger.p == std::vector<double>{0.4, 0.6});
    CHECK(berger.d == std::vector<double>{1.0, 0.0, 0.3, 0.0, 1.0, 0.3});

    auto sym = binary_hamming(0.5);
    CHECK(sym.p == std::vector<double>{0.5, 0.5});
    CHECK(sym.d == std::vector<double>{0.0, 1.0, 1.0, 0.0});

    auto skew = binary_hamming(0.4);
    CHECK(skew.p == std::vector<double>{0.4, 0.6});

    CHECK_THROWS_AS(binary_hamming(0.0), Error);
    CHECK_THROWS_AS(binary_hamming(1.5), Error);
}

TEST_CASE("instance JSON round trip is exact") {
    auto inst = discretize_density({Density::Family::Gaussian, 1.0}, {8.0, 17, 9},
                                   DistortionKind::AbsoluteError);
    const std::string path = "roundtrip_instance.json";
    io::save_instance(inst, path);
    auto back = io::load_instance(path);
    std::remove(path.c_str());
    CHECK(back.p == inst.p);
    CHECK(back.d == inst.d);
    CHECK(back.source_labels == inst.source_labels);
    CHECK(back.repro_labels == inst.repro_labels);
}
