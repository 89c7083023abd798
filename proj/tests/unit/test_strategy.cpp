#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ransomgame/sampling.hpp"
#include "ransomgame/strategy.hpp"

using namespace ransomgame;

namespace {

GameInstance two_round(std::vector<double> losses, std::vector<double> sales = {0.0, 0.0}) {
    GameInstance inst;
    inst.n = 2;
    inst.ransoms = {100.0, 50.0};
    inst.data_value = 200.0;
    inst.losses = std::move(losses);
    inst.sale_profits = std::move(sales);
    return inst;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("worst case: victim never pays, attacker sells") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const auto inst = random_instance(rng, n);
        const auto w = worst_case_equilibrium(inst);
        CHECK(w.policy.abort_round == 1);
        CHECK(w.attacker_sell_round == 1);
        CHECK(w.attacker_payoff == inst.sale(1));
        CHECK(w.victim_payoff == -inst.loss(1));
        CHECK(attacker_expected_profit(inst, Reputation::worst(n), w.policy).expected_profit ==
              inst.sale(1));
    }
    auto inst = two_round({300.0, 150.0});
    CHECK(worst_case_equilibrium(inst).attacker_payoff == 0.0);
}

TEST_CASE("last-round payoff table") {
    GameInstance inst;
    inst.n = 2;
    inst.ransoms = {100.0, 50.0};
    inst.data_value = 200.0;
    inst.losses = {300.0, 100.0};
    inst.sale_profits = {210.0, 70.0};
    const auto m = round_payoff_matrix(inst, 2);
    CHECK(m[1][1].attacker == 120.0);
    CHECK(m[1][1].victim == -150.0);
    CHECK(m[1][0].attacker == 50.0);
    CHECK(m[1][0].victim == -50.0);
    CHECK(m[0][1].attacker == 70.0);
    CHECK(m[0][1].victim == -100.0);
    CHECK(m[0][0].attacker == 70.0);
    CHECK(m[0][0].victim == -100.0);
    // Selling dominates keeping for the attacker in every row.
    for (int round = 1; round <= 2; ++round) {
        const auto t = round_payoff_matrix(inst, round);
        for (int pay = 0; pay < 2; ++pay) CHECK(t[pay][1].attacker >= t[pay][0].attacker);
    }
}

TEST_CASE("perfect reputation recursion") {
    auto p = perfect_reputation_policy(two_round({300.0, 150.0}));
    CHECK(p.continuation_values[1] == 50.0);
    CHECK(p.continuation_values[0] == -50.0);
    CHECK(p.pays_all());

    p = perfect_reputation_policy(two_round({300.0, 40.0}));
    CHECK(p.continuation_values[1] == 40.0);
    CHECK(p.abort_round == 2);
    CHECK(p.rounds_paid() == 1);

    GameInstance zero;
    zero.n = 3;
    zero.ransoms = {5.0, 5.0, 5.0};
    zero.losses = {0.0, 0.0, 0.0};
    zero.sale_profits = {0.0, 0.0, 0.0};
    p = perfect_reputation_policy(zero);
    CHECK(p.abort_round == 1);
    for (double a : p.continuation_values) CHECK(a == 0.0);

    GameInstance one;
    one.n = 1;
    one.ransoms = {80.0};
    one.data_value = 100.0;
    one.losses = {50.0};
    one.sale_profits = {0.0};
    p = perfect_reputation_policy(one);
    CHECK(p.continuation_values[0] == -20.0);
    CHECK(p.pays_all());
}

TEST_CASE("imperfect reputation recursion") {
    const auto inst = two_round({300.0, 150.0});
    const auto p = victim_policy(inst, {0.9, {0.3, 0.5}});
    CHECK(p.continuation_values[1] == doctest::Approx(125.0).epsilon(1e-15));
    CHECK(p.continuation_values[0] == doctest::Approx(109.75).epsilon(1e-15));
    CHECK(p.pays_all());
    CHECK(p.expected_loss == doctest::Approx(109.75).epsilon(1e-15));
    const auto e = enumerate_best_response(inst, {0.9, {0.3, 0.5}});
    CHECK(e.expected_loss == doctest::Approx(109.75).epsilon(1e-15));
    CHECK(e.pays_all());
}

TEST_CASE("victim policy reduces to the perfect recursion") {
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n);
        const auto a = perfect_reputation_policy(inst);
        const auto b = victim_policy(inst, Reputation::perfect(n));
        CHECK(a.abort_round == b.abort_round);
        for (int i = 0; i < n; ++i)
            CHECK(a.continuation_values[i] == doctest::Approx(b.continuation_values[i]).epsilon(1e-12));
        CHECK(victim_policy(inst, Reputation::worst(n)).abort_round == 1);
    }
}

TEST_CASE("backward induction matches enumeration") {
    Rng rng(2024);
    int paying = 0;
    for (int k = 0; k < 500; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n);
        const auto rep = random_reputation(rng, n);
        const auto p = victim_policy(inst, rep);
        const auto e = enumerate_best_response(inst, rep);
        CHECK(p.abort_round == e.abort_round);
        CHECK(rel_diff(p.expected_loss, e.expected_loss) <= 1e-9);
        CHECK(rel_diff(p.expected_loss, victim_expected_loss(inst, rep, p.threshold())) <= 1e-9);
        for (int i = 0; i < n; ++i) {
            CHECK(p.continuation_values[i] <= inst.loss(i + 1));
            CHECK(rel_diff(p.continuation_values[i], e.continuation_values[i]) <= 1e-9);
        }
        if (p.abort_round != 1) ++paying;
    }
    CHECK(paying > 0);
}

TEST_CASE("policy invariants: continuation below loss before the abort round") {
    Rng rng(99);
    for (int k = 0; k < 300; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n, 100.0);
        const auto rep = random_reputation(rng, n);
        const auto p = victim_policy(inst, rep);
        for (int j = 1; j < p.threshold(); ++j) CHECK(p.continuation_values[j - 1] < inst.loss(j));
        if (p.abort_round) CHECK(p.continuation_values[*p.abort_round - 1] == inst.loss(*p.abort_round));
    }
}

TEST_CASE("tie resolves to abort and flips under a perturbation") {
    // Perfect reputation, single round: a_1 = R - V = L_1 exactly.
    GameInstance inst;
    inst.n = 1;
    inst.ransoms = {150.0};
    inst.data_value = 100.0;
    inst.losses = {50.0};
    inst.sale_profits = {10.0};
    CHECK(victim_policy(inst, Reputation::perfect(1)).abort_round == 1);
    inst.losses = {50.0 + 1e-9};
    CHECK(victim_policy(inst, Reputation::perfect(1)).pays_all());

    // Round-2 tie in a two-round game: R_2 = L_2.
    auto two = two_round({300.0, 50.0});
    CHECK(victim_policy(two, Reputation::perfect(2)).abort_round == 2);
    two.losses[1] = 50.0 + 1e-9;
    CHECK(victim_policy(two, Reputation::perfect(2)).pays_all());
    CHECK(enumerate_best_response(two_round({300.0, 50.0}), Reputation::perfect(2)).abort_round == 2);
}

TEST_CASE("single-round decision") {
    CHECK(decide_single_round(500.0, 400.0, 300.0, 0.9, 0.2));
    CHECK(decide_single_round(699.0, 400.0, 300.0, 1.0, 0.0));
    CHECK_FALSE(decide_single_round(700.0, 400.0, 300.0, 1.0, 0.0));
    CHECK_FALSE(decide_single_round(576.0, 400.0, 300.0, 0.9, 0.2));
    CHECK_FALSE(decide_single_round(1e-6, 400.0, 300.0, 0.0, 0.0));
    CHECK_THROWS_AS(decide_single_round(1.0, 1.0, 1.0, 1.2, 0.0), std::invalid_argument);
}

TEST_CASE("single-round decision agrees with the utility comparison") {
    Rng rng(3);
    for (int k = 0; k < 1000; ++k) {
        const double r = rng.uniform(0.0, 1000.0);
        const double v = rng.uniform(0.0, 1000.0);
        const double l1 = rng.uniform(0.0, 1000.0);
        const double br = rng.uniform();
        const double b1 = rng.uniform();
        const double diff = -r - (1.0 - br) * l1 + br * (v - b1 * l1) + l1;
        if (diff != 0.0) CHECK(decide_single_round(r, v, l1, br, b1) == (diff > 0.0));
    }
}

TEST_CASE("profit tree closed forms") {
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n);
        CHECK(attacker_expected_profit(inst, Reputation::worst(n), 1).expected_profit == inst.sale(1));
        CHECK(attacker_expected_profit(inst, Reputation::worst(n), n + 1).expected_profit ==
              doctest::Approx(inst.ransom(1) + inst.sale(1)));
        CHECK(attacker_expected_profit(inst, Reputation::perfect(n), n + 1).expected_profit ==
              doctest::Approx(inst.total_ransom() - inst.recovery_cost).epsilon(1e-12));
        Reputation sell_now{1.0, std::vector<double>(static_cast<size_t>(n), 1.0)};
        CHECK(attacker_expected_profit(inst, sell_now, 2).expected_profit ==
              doctest::Approx(inst.ransom(1) - inst.recovery_cost + inst.sale(1)).epsilon(1e-12));
    }
}

TEST_CASE("profit breakdown invariants") {
    Rng rng(23);
    for (int k = 0; k < 300; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n);
        const auto rep = random_reputation(rng, n);
        for (int t = 1; t <= n + 1; ++t) {
            const auto b = attacker_expected_profit(inst, rep, t);
            const double sum = b.ransom_component + b.sale_component - b.recovery_cost_component;
            CHECK(rel_diff(b.expected_profit, sum) <= 1e-9);
            const double prob =
                std::accumulate(b.end_with_sale.begin(), b.end_with_sale.end(), b.end_without_sale);
            CHECK(std::abs(prob - 1.0) <= 1e-12);
            const double rounds =
                std::accumulate(b.per_round_profit.begin(), b.per_round_profit.end(), 0.0);
            CHECK(rel_diff(rounds, b.expected_profit) <= 1e-9);
        }
    }
}

TEST_CASE("profit is monotone in each ransom for a fixed policy") {
    Rng rng(29);
    for (int k = 0; k < 100; ++k) {
        const int n = 1 + static_cast<int>(rng.below(6));
        auto inst = random_instance(rng, n);
        const auto rep = random_reputation(rng, n);
        const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n + 1)));
        const double base = attacker_expected_profit(inst, rep, t).expected_profit;
        for (int i = 0; i < n; ++i) {
            auto bumped = inst;
            bumped.ransoms[i] += 10.0;
            CHECK(attacker_expected_profit(bumped, rep, t).expected_profit >= base);
        }
    }
}

TEST_CASE("positive homogeneity") {
    Rng rng(31);
    for (int k = 0; k < 100; ++k) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto inst = random_instance(rng, n);
        const auto rep = random_reputation(rng, n);
        auto scaled = inst;
        const double c = 4.0;
        for (auto* v : {&scaled.ransoms, &scaled.losses, &scaled.sale_profits})
            for (auto& x : *v) x *= c;
        scaled.data_value *= c;
        scaled.recovery_cost *= c;
        const auto p = victim_policy(inst, rep);
        const auto q = victim_policy(scaled, rep);
        CHECK(p.abort_round == q.abort_round);
        CHECK(rel_diff(c * p.expected_loss, q.expected_loss) <= 1e-9);
        CHECK(rel_diff(c * attacker_expected_profit(inst, rep, p).expected_profit,
                       attacker_expected_profit(scaled, rep, q).expected_profit) <= 1e-9);
    }
}

TEST_CASE("threshold decisions") {
    const bool a[] = {true, true, false, false};
    CHECK(threshold_from_decisions(a) == 3);
    const bool b[] = {true, true};
    CHECK(threshold_from_decisions(b) == 3);
    const bool c[] = {true, false, true};
    CHECK_THROWS_AS(threshold_from_decisions(c), std::invalid_argument);
    VictimPolicy bad;
    bad.abort_round = 5;
    bad.continuation_values = {0.0, 0.0};
    CHECK_THROWS_AS(attacker_expected_profit(two_round({3.0, 1.0}), Reputation::perfect(2), bad),
                    std::invalid_argument);
}

TEST_CASE("enumeration budget") {
    GameInstance big;
    big.n = kMaxEnumerationRounds + 1;
    big.ransoms.assign(static_cast<size_t>(big.n), 1.0);
    big.losses.assign(static_cast<size_t>(big.n), 1.0);
    big.sale_profits.assign(static_cast<size_t>(big.n), 0.0);
    CHECK_THROWS_AS(enumerate_best_response(big, Reputation::perfect(big.n)), std::invalid_argument);
}

TEST_CASE("printed expected-profit formulas") {
    Rng rng(41);
    for (int k = 0; k < 50; ++k) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const auto inst = random_instance(rng, n);
        const auto perfect = Reputation::perfect(n);
        double expected = inst.ransom(1) + inst.sale(1) - inst.recovery_cost;
        for (int l = 1; l <= n - 2; ++l)
            expected += inst.ransom(l + 1) + inst.sale(l + 1) - inst.sale(l);
        expected += inst.ransom(n) - inst.sale(n - 1);
        CHECK(printed_ep_reference(inst, perfect, n) == doctest::Approx(expected).epsilon(1e-12));
        // At perfect reputation the pay-all case agrees with the tree.
        CHECK(printed_ep_reference(inst, perfect, n) ==
              doctest::Approx(attacker_expected_profit(inst, perfect, n + 1).expected_profit)
                  .epsilon(1e-12));
        auto rep = random_reputation(rng, n);
        rep.beta_r = 1.0;
        CHECK(printed_ep_reference(inst, rep, 1) ==
              doctest::Approx(inst.ransom(1) + inst.sale(1) - inst.recovery_cost).epsilon(1e-12));
    }
}

TEST_CASE("divergence report") {
    const auto rows = random_ep_divergence(7, 100);
    CHECK(rows.size() > 100);
    int diverging = 0;
    for (const auto& r : rows) {
        CHECK(r.abs_diff == doctest::Approx(std::abs(r.printed - r.tree)));
        if (r.abs_diff > 1e-9 * std::max(1.0, std::abs(r.tree))) ++diverging;
    }
    // The printed round-1 term disagrees with the tree whenever beta_r < 1.
    CHECK(diverging > 0);
    CHECK(random_ep_divergence(7, 100).size() == rows.size());
}
