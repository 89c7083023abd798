#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ransomgame/montecarlo.hpp"
#include "ransomgame/report.hpp"
#include "ransomgame/sampling.hpp"
#include "ransomgame/strategy.hpp"

using namespace ransomgame;

namespace {

ScenarioConfig fig2_config(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    return cfg;
}

std::string csv_of(const std::vector<ScenarioResult>& results) {
    std::ostringstream os;
    write_victims_csv(os, results);
    write_rounds_csv(os, results);
    return os.str();
}

}  // namespace

TEST_CASE("worst mode pays out the first-round sale value") {
    auto cfg = fig2_config(3);
    cfg.mode = ReputationMode::kWorst;
    const auto r = run_scenario(cfg);
    double expected = 0.0;
    for (const auto& v : r.victims) {
        const auto inst = scenario_instance(cfg, v.data_value, v.decay);
        CHECK(v.profit == inst.sale(1));
        CHECK(v.abort_round == 1);
        expected += inst.sale(1);
    }
    CHECK(r.total_profit == expected);
}

TEST_CASE("perfect single-round victims either refuse or pay in full") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto cfg = fig2_config(seed);
        cfg.value_lo = 200.0;
        cfg.value_hi = 1200.0;
        cfg.recovery_cost = 15.0;
        cfg.mode = ReputationMode::kPerfectSingle;
        const auto r = run_scenario(cfg);
        for (const auto& v : r.victims) {
            const auto inst = scenario_instance(cfg, v.data_value, v.decay);
            const bool refused = v.profit == inst.sale(1);
            const bool paid = v.profit == cfg.total_ransom - cfg.recovery_cost;
            CHECK((refused || paid));
        }
    }
}

TEST_CASE("overcharged victims and the first-round share") {
    // With half the demand up front, R_1 = 500 exceeds V + L_1 - L_2 for
    // every V <= 350 and every built-in decay, so nobody pays in either mode.
    auto cfg = fig2_config(7);
    auto results = compare_scenarios(
        cfg, {ReputationMode::kWorst, ReputationMode::kPerfectSingle, ReputationMode::kPerfectMulti});
    CHECK(results[1].total_profit == results[0].total_profit);
    CHECK(results[2].total_profit == results[0].total_profit);
    // A smaller first installment makes the multi-round schedule pay off.
    cfg.first_round_fraction = 0.3;
    results = compare_scenarios(cfg, {ReputationMode::kPerfectSingle, ReputationMode::kPerfectMulti});
    CHECK(results[1].total_profit > results[0].total_profit);
}

TEST_CASE("single victim with a point distribution") {
    ScenarioConfig cfg;
    cfg.victim_count = 1;
    cfg.value_lo = cfg.value_hi = 420.0;
    cfg.decay_mix = {DecayKind::kCircular};
    cfg.mode = ReputationMode::kOptimalMulti;
    const auto r = run_scenario(cfg);
    const auto inst = make_instance(420.0, 8, 1000.0, 0.5, DecayProfile::circular(), 0.7);
    const auto opt = optimal_reputation(inst);
    CHECK(r.total_profit == opt.expected_profit);
    CHECK(r.victims[0].loss == victim_policy(inst, opt.reputation).expected_loss);
    CHECK(r.victims[0].data_value == 420.0);
}

TEST_CASE("modes share victim draws") {
    auto cfg = fig2_config(11);
    const auto results = compare_scenarios(
        cfg, {ReputationMode::kWorst, ReputationMode::kPerfectSingle, ReputationMode::kPerfectMulti,
              ReputationMode::kOptimalMulti});
    for (size_t m = 1; m < results.size(); ++m) {
        for (size_t v = 0; v < results[0].victims.size(); ++v) {
            CHECK(results[m].victims[v].data_value == results[0].victims[v].data_value);
            CHECK(results[m].victims[v].decay == results[0].victims[v].decay);
        }
    }
    const auto single = run_scenario(cfg);
    CHECK(single.total_profit == results[2].total_profit);
}

TEST_CASE("aggregates") {
    auto cfg = fig2_config(5);
    cfg.mode = ReputationMode::kOptimalMulti;
    const auto r = run_scenario(cfg);
    double total = 0.0;
    for (const auto& v : r.victims) total += v.profit;
    CHECK(r.total_profit == total);
    CHECK(r.mean_profit == doctest::Approx(total / cfg.victim_count));
    for (size_t i = 1; i < r.cumulative_profit.size(); ++i)
        CHECK(r.cumulative_profit[i] >= r.cumulative_profit[i - 1] - 1e-9);
    CHECK(r.cumulative_profit.back() == doctest::Approx(r.total_profit).epsilon(1e-12));
}

TEST_CASE("thread count does not change the output") {
    auto cfg = fig2_config(7);
    const std::vector<ReputationMode> modes{ReputationMode::kWorst, ReputationMode::kPerfectSingle,
                                            ReputationMode::kPerfectMulti,
                                            ReputationMode::kOptimalMulti};
    const auto one = csv_of(compare_scenarios(cfg, modes, 1));
    const auto many = csv_of(compare_scenarios(cfg, modes, 8));
    CHECK(one == many);
    CHECK(csv_of(compare_scenarios(cfg, modes, 3)) == one);
}

TEST_CASE("detection lag") {
    Rng rng(19);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n);
        const auto rep = random_reputation(rng, n);
        for (int t = 1; t <= n + 1; ++t) {
            const auto plain = lagged_outcome(inst, rep, t, 0);
            CHECK(plain.profit ==
                  doctest::Approx(attacker_expected_profit(inst, rep, t).expected_profit).epsilon(1e-12));
            CHECK(plain.loss == doctest::Approx(victim_expected_loss(inst, rep, t)).epsilon(1e-12));
            const auto lagged = lagged_outcome(inst, rep, t, 2);
            CHECK(lagged.profit >= plain.profit - 1e-9);
            CHECK(lagged.profit - plain.profit == doctest::Approx(lagged.loss - plain.loss));
        }
    }
    auto cfg = fig2_config(7);
    cfg.detection_lag = 0;
    const auto base = run_scenario(cfg);
    cfg.detection_lag = 3;
    cfg.mode = ReputationMode::kOptimalMulti;
    const auto lagged = run_scenario(cfg);
    cfg.detection_lag = 0;
    CHECK(lagged.total_profit >= run_scenario(cfg).total_profit - 1e-9);
    CHECK(base.total_profit > 0.0);
}

TEST_CASE("config validation") {
    ScenarioConfig cfg;
    cfg.value_lo = 10.0;
    cfg.value_hi = 5.0;
    CHECK_FALSE(validate_config(cfg).empty());
    CHECK_THROWS_AS(run_scenario(cfg), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.victim_count = 0;
    CHECK_FALSE(validate_config(cfg).empty());
    cfg = ScenarioConfig{};
    cfg.first_round_fraction = 0.0;
    CHECK_FALSE(validate_config(cfg).empty());
    CHECK(validate_config(ScenarioConfig{}).empty());
    CHECK_THROWS_AS(compare_scenarios(ScenarioConfig{}, {}), std::invalid_argument);
}

TEST_CASE("reputation sweep") {
    const std::vector<double> grid{800.0, 900.0, 1000.0, 1100.0, 1200.0};
    const auto rows = reputation_sweep(500.0, 6, DecayProfile::quadratic(), 0.7, 0.0, grid);
    REQUIRE(rows.size() == grid.size());
    for (const auto& row : rows) CHECK(row.reputation.betas.size() == 6);
    CHECK(reputation_sweep(500.0, 6, DecayProfile::linear(), 0.7, 0.0, {900.0}).size() == 1);
    // Tiny demands: collecting alone is not worth it.
    const auto tiny = reputation_sweep(500.0, 6, DecayProfile::linear(), 0.7, 0.0, {1.0});
    CHECK((tiny[0].fallback || tiny[0].reputation.beta_r < 1.0));
    std::ostringstream os;
    write_reputation_sweep_csv(os, rows, 6);
    CHECK(os.str().rfind("x,series,value\n", 0) == 0);
}

TEST_CASE("expected-profit sweep") {
    std::vector<double> grid;
    for (double r = 500.0; r <= 3000.0; r += 250.0) grid.push_back(r);
    const auto rows = expected_profit_sweep(500.0, 6, DecayProfile::linear(), 0.7, 0.0, grid);
    REQUIRE(rows.size() == grid.size());
    for (const auto& row : rows) CHECK(row.bound == rows.front().bound);
    CHECK(rows.back().bound_applies);
    CHECK(rows.back().profit >= rows.back().bound);
    CHECK(expected_profit_sweep(500.0, 6, DecayProfile::linear(), 0.7, 0.0, {}).empty());
}

TEST_CASE("csv layout") {
    auto cfg = fig2_config(1);
    cfg.victim_count = 2;
    cfg.rounds = 3;
    const auto r = run_scenario(cfg);
    std::ostringstream v;
    write_victims_csv(v, {r});
    CHECK(v.str().rfind("victim_id,data_value,decay,mode,abort_round,profit,loss\n", 0) == 0);
    std::ostringstream rounds;
    write_rounds_csv(rounds, {r});
    CHECK(rounds.str().find("perfect_multi,3,") != std::string::npos);

    GameInstance hopeless;
    hopeless.n = 2;
    hopeless.ransoms = {900.0, 900.0};
    hopeless.data_value = 10.0;
    hopeless.losses = {5.0, 1.0};
    hopeless.sale_profits = {1.0, 0.5};
    std::ostringstream cases;
    write_cases_csv(cases, optimal_reputation(hopeless), 2);
    const std::string text = cases.str();
    CHECK(text.rfind("case,status,lp_value,beta_r,beta_1,beta_2,tree_profit,induced_abort_round\n", 0) == 0);
    CHECK(text.find("1,INFEASIBLE,,,,,,\n") != std::string::npos);
    CHECK(format_number(-1e-12) == "0.000000000");
    CHECK(format_number(1.5) == "1.500000000");
}
