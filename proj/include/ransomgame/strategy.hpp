#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ransomgame/game_core.hpp"

namespace ransomgame {

// One cell of a round's pay/sell payoff table: (attacker, victim).
struct PayoffCell {
    double attacker = 0.0;
    double victim = 0.0;
};

// Indexed [pay][sell], each 0 or 1.
using PayoffMatrix = std::array<std::array<PayoffCell, 2>, 2>;

struct WorstCaseResult {
    VictimPolicy policy;
    int attacker_sell_round = 1;
    double attacker_payoff = 0.0;
    double victim_payoff = 0.0;
};

// Payoff table for `round` when every later round is played at the
// worst-reputation equilibrium (the continuation is (A_{i+1}, -L_{i+1})).
// Round 1 assumes the key is returned after payment.
PayoffMatrix round_payoff_matrix(const GameInstance& inst, int round);

WorstCaseResult worst_case_equilibrium(const GameInstance& inst);

// Backward induction against an attacker who always returns the key and
// never sells after payment.
VictimPolicy perfect_reputation_policy(const GameInstance& inst);

// Backward induction against an arbitrary reputation. Ties resolve to abort.
VictimPolicy victim_policy(const GameInstance& inst, const Reputation& rep);

// Continuation values b_from..b_n for a victim who has reached `from_round`
// with the data still confidential. For from_round >= 2 the returned
// policy's vectors are still length n; entries before from_round are unset
// (NaN) and abort_round is the first t >= from_round with b_t = L_t.
VictimPolicy continuation_policy(const GameInstance& inst, const Reputation& rep, int from_round);

// Single-round rule: pay iff R < beta_r (V + (1 - beta_1) L_1).
bool decide_single_round(double ransom, double data_value, double loss1, double beta_r,
                         double beta_1);

struct ProfitBreakdown {
    double expected_profit = 0.0;
    double ransom_component = 0.0;
    double sale_component = 0.0;
    double recovery_cost_component = 0.0;
    // Probability that the game ends with a sale in round k (index k-1).
    std::vector<double> end_with_sale;
    // Probability that every round is paid and the data is never sold.
    double end_without_sale = 0.0;
    // Expected attacker cash flow attributed to each round.
    std::vector<double> per_round_profit;
};

// Exact evaluation of the attacker's outcome tree under a threshold policy.
ProfitBreakdown attacker_expected_profit(const GameInstance& inst, const Reputation& rep,
                                         const VictimPolicy& policy);
// Same, for threshold t in 1..n+1 (n+1 = pay every round).
ProfitBreakdown attacker_expected_profit(const GameInstance& inst, const Reputation& rep,
                                         int threshold);

// Converts per-round pay decisions into a threshold; throws
// std::invalid_argument if a refusal is followed by a payment.
int threshold_from_decisions(std::span<const bool> pays);

// Victim's expected loss under threshold t, by forward probability-tree
// evaluation (independent of the backward recursion).
double victim_expected_loss(const GameInstance& inst, const Reputation& rep, int threshold);

inline constexpr int kMaxEnumerationRounds = 24;

// Brute force over all threshold policies; ties go to the smallest t.
VictimPolicy enumerate_best_response(const GameInstance& inst, const Reputation& rep);

// Attacker expected profit for case k (victim pays the first k rounds)
// using the closed-form expressions as printed, including their known
// inconsistencies. Kept for divergence reporting only.
double printed_ep_reference(const GameInstance& inst, const Reputation& rep, int case_k);

struct EpDivergenceRow {
    int point = 0;
    int n = 0;
    int case_k = 0;
    double printed = 0.0;
    double tree = 0.0;
    double abs_diff = 0.0;
};

std::vector<EpDivergenceRow> ep_divergence(const GameInstance& inst, const Reputation& rep,
                                           int point = 0);
// `count` random points with n in [2, max_n], every case k per point.
std::vector<EpDivergenceRow> random_ep_divergence(std::uint64_t seed, int count, int max_n = 6);

}  // namespace ransomgame
