#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ratedist/problem.hpp"

using namespace ratedist;

namespace {

ProblemInstance make(std::vector<double> p, std::vector<double> d, std::size_t n) {
    ProblemInstance inst;
    inst.num_source = p.size();
    inst.num_repro = n;
    inst.p = std::move(p);
    inst.d = std::move(d);
    return inst;
}

} // namespace

TEST_CASE("validate_instance accepts a well-formed symmetric instance") {
    auto inst = validate_instance(make({0.5, 0.5}, {0, 1, 1, 0}, 2));
    CHECK(inst.p[0] == 0.5);
    CHECK(inst.dist(0, 1) == 1.0);
}

TEST_CASE("validate_instance rejects probability vectors off the simplex") {
    CHECK_THROWS_MATCHES(validate_instance(make({0.5, 0.6}, {0, 1, 1, 0}, 2)), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NonStochastic; }));
    CHECK_THROWS_MATCHES(validate_instance(make({-0.1, 1.1}, {0, 1, 1, 0}, 2)), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NegativeProbability; }));
}

TEST_CASE("validate_instance rejects negative distortion entries") {
    auto bad = make({0.4, 0.6}, {1, 0, -0.3, 0, 1, 0.3}, 3);
    CHECK_THROWS_MATCHES(validate_instance(bad), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NegativeDistortion; }));
}

TEST_CASE("validate_instance rejects shape mismatches") {
    CHECK_THROWS_MATCHES(validate_instance(make({1.0}, {0, 1, 1, 0}, 2)), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::ShapeMismatch; }));
    CHECK_THROWS_AS(validate_instance(make({}, {}, 1)), Error);
}

TEST_CASE("tiny mass defects are renormalized, larger ones rejected") {
    auto ok = validate_instance(make({0.5, 0.5 + 9e-10}, {0, 1, 1, 0}, 2));
    double sum = ok.p[0] + ok.p[1];
    CHECK(std::abs(sum - 1.0) <= 1e-15);

    CHECK_THROWS_AS(validate_instance(make({0.5, 0.5 + 1e-8}, {0, 1, 1, 0}, 2)), Error);
}

TEST_CASE("zero-probability source letters are permitted") {
    auto inst = validate_instance(make({0.0, 1.0}, {0, 1, 1, 0}, 2));
    CHECK(inst.p[0] == 0.0);
}

TEST_CASE("feasibility_range on the symmetric Hamming instance") {
    auto inst = validate_instance(make({0.5, 0.5}, {0, 1, 1, 0}, 2));
    auto range = feasibility_range(inst);
    CHECK(range.d_min == 0.0);
    CHECK(range.d_max == 0.5);
}

TEST_CASE("feasibility_range evaluates both minima on a 2x3 instance") {
    auto inst = validate_instance(make({0.4, 0.6}, {1, 0, 0.3, 0, 1, 0.3}, 3));
    auto range = feasibility_range(inst);
    CHECK(range.d_min == 0.0);
    // column averages: 0.4, 0.6, 0.3
    CHECK(range.d_max == Catch::Approx(0.3).margin(1e-15));
}

TEST_CASE("feasibility_range on a single-entry instance") {
    auto inst = validate_instance(make({1.0}, {2.0}, 1));
    auto range = feasibility_range(inst);
    CHECK(range.d_min == 2.0);
    CHECK(range.d_max == 2.0);
}

TEST_CASE("classify_target_distortion labels the three regions") {
    FeasibilityRange r{0.0, 0.5};
    CHECK(classify_target_distortion(r, 0.25) == TargetClass::Interior);
    CHECK(classify_target_distortion(r, 0.5) == TargetClass::ZeroRate);  // inclusive at d_max
    CHECK(classify_target_distortion(r, 0.7) == TargetClass::ZeroRate);
    CHECK(classify_target_distortion(FeasibilityRange{0.1, 0.5}, 0.05) == TargetClass::Infeasible);
    CHECK(classify_target_distortion(r, 0.0) == TargetClass::Interior);
}

TEST_CASE("random instances satisfy d_min <= d_max and the labels partition") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng() % 6;
        const std::size_t n = 1 + rng() % 6;
        std::vector<double> p(m), d(m * n);
        double sum = 0.0;
        for (auto& v : p) sum += (v = -std::log(unif(rng) + 1e-12));
        for (auto& v : p) v /= sum;
        for (auto& v : d) v = unif(rng);
        auto inst = validate_instance(make(p, d, n));
        auto range = feasibility_range(inst);
        REQUIRE(range.d_min <= range.d_max);

        for (double target : {-0.5, range.d_min, 0.5 * (range.d_min + range.d_max), range.d_max, 2.0}) {
            int labels = 0;
            auto c = classify_target_distortion(range, target);
            labels += (c == TargetClass::Infeasible) + (c == TargetClass::Interior) +
                      (c == TargetClass::ZeroRate);
            REQUIRE(labels == 1);
            if (target < range.d_min) CHECK(c == TargetClass::Infeasible);
            if (target >= range.d_max) CHECK(c == TargetClass::ZeroRate);
        }
    }
}
