#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ransomgame/game_core.hpp"

using namespace ransomgame;

TEST_CASE("linear profile values") {
    const auto p = build_profiles(500.0, 6, DecayProfile::linear(), 0.7);
    REQUIRE(p.losses.size() == 6);
    CHECK(p.losses[5] == 0.0);
    CHECK(p.sale_profits[5] == 0.0);
    CHECK(p.losses[2] == doctest::Approx(250.0).epsilon(1e-12));
    CHECK(p.sale_profits[2] == doctest::Approx(175.0).epsilon(1e-12));
}

TEST_CASE("circular profile at the midpoint") {
    const auto p = build_profiles(500.0, 6, DecayProfile::circular(), 0.7);
    CHECK(p.losses[2] == doctest::Approx(500.0 * std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("built-in kinds end at zero and never increase") {
    for (auto decay : {DecayProfile::quadratic(), DecayProfile::linear(), DecayProfile::circular()}) {
        CHECK(decay(0.0) == 1.0);
        CHECK(decay(1.0) == 0.0);
        for (int n = 1; n <= 12; ++n) {
            for (double v : {0.0, 1.0, 333.3, 1e6}) {
                const auto p = build_profiles(v, n, decay, 0.7);
                CHECK(p.losses.back() == 0.0);
                for (int i = 1; i < n; ++i) CHECK(p.losses[i] <= p.losses[i - 1]);
            }
        }
    }
}

TEST_CASE("profiles scale linearly with the data value") {
    for (auto decay : {DecayProfile::quadratic(), DecayProfile::linear(), DecayProfile::circular()}) {
        const auto base = build_profiles(123.0, 7, decay, 0.4);
        const auto scaled = build_profiles(3.0 * 123.0, 7, decay, 0.4);
        for (int i = 0; i < 7; ++i) {
            CHECK(scaled.losses[i] == doctest::Approx(3.0 * base.losses[i]).epsilon(1e-12));
            CHECK(scaled.sale_profits[i] == doctest::Approx(3.0 * base.sale_profits[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("build_profiles rejects bad input") {
    CHECK_THROWS_AS(build_profiles(100.0, 0, DecayProfile::linear(), 0.7), std::invalid_argument);
    CHECK_THROWS_AS(build_profiles(100.0, 3, DecayProfile::custom({0.5, 0.6, 0.1}), 0.7),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_profiles(100.0, 3, DecayProfile::linear(), 1.5), std::invalid_argument);
    const auto p = build_profiles(100.0, 3, DecayProfile::custom({0.9, 0.5, 0.5}), 0.5);
    CHECK(p.losses[1] == doctest::Approx(50.0));
    CHECK(p.sale_profits[0] == doctest::Approx(45.0));
}

TEST_CASE("validation reports field paths") {
    GameInstance inst;
    inst.n = 2;
    inst.ransoms = {10.0, 10.0};
    inst.data_value = 100.0;
    inst.losses = {100.0, 150.0};
    inst.sale_profits = {1.0, 1.0};
    auto v = validate_instance(inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].message == "losses not non-increasing at index 1");
    CHECK(v[0].field == "losses[1]");

    inst.losses = {150.0, 100.0};
    inst.ransoms[1] = 0.0;
    v = validate_instance(inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].message == "ransom must be positive");
    CHECK(v[0].field == "ransoms[1]");

    inst.ransoms = {10.0, 10.0};
    inst.data_value = NAN;
    inst.recovery_cost = -1.0;
    v = validate_instance(inst);
    CHECK(v.size() == 2);
    CHECK_THROWS_AS(require_valid(inst), std::invalid_argument);
}

TEST_CASE("canonical instance is valid") {
    const auto inst = make_instance(500.0, 6, 800.0, 0.5, DecayProfile::linear(), 0.7);
    CHECK(validate_instance(inst).empty());
    CHECK(inst.ransom(1) == 400.0);
    CHECK(inst.ransom(6) == doctest::Approx(80.0));
    CHECK(inst.total_ransom() == doctest::Approx(800.0));
}

TEST_CASE("reputation validation") {
    CHECK(validate_reputation(Reputation::perfect(3), 3).empty());
    CHECK(validate_reputation(Reputation::worst(3), 3).empty());
    CHECK(validate_reputation(Reputation::perfect(3), 4).size() == 1);
    Reputation r{1.5, {0.0, -0.1}};
    CHECK(validate_reputation(r, 2).size() == 2);
}

TEST_CASE("split_ransom") {
    const auto r = split_ransom(1000.0, 8, 0.5);
    CHECK(r[0] == 500.0);
    for (int i = 1; i < 8; ++i) CHECK(r[i] == doctest::Approx(500.0 / 7.0));
    CHECK(split_ransom(1000.0, 1, 0.5) == std::vector<double>{1000.0});
    CHECK_THROWS_AS(split_ransom(1000.0, 3, 0.0), std::invalid_argument);
}
