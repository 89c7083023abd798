#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ransomgame/game_core.hpp"
#include "ransomgame/lp.hpp"

namespace ransomgame {

// Default strict-inequality margin: 1e-6 * max(V, sum R).
double default_epsilon_margin(const GameInstance& inst);

// Program for "victim pays rounds 1..case_i, then refuses" (case_i = n means
// every round is paid), over x_1..x_{case_i+1} with
// x_1 = beta_r and x_{j+1} = x_j (1 - beta_j). The objective omits the
// constant R_1 + A_1; rows are the strict payment conditions stored with
// the given margin. Throws std::invalid_argument if case_i is outside 1..n.
lp::LinearProgram build_lp(const GameInstance& inst, int case_i, double epsilon_margin);

// Constant term dropped from the objective of every case program.
double lp_objective_offset(const GameInstance& inst);

// x -> (beta_r, beta_1..beta_n). Trailing betas past the program's
// variables, and every beta after a zero x_j, are set to 1.
// Throws std::invalid_argument if x breaks 0 <= x_{j+1} <= x_j <= 1.
Reputation recover_reputation(const std::vector<double>& x, int n);

// Inverse map, x_1..x_{n+1}.
std::vector<double> reputation_to_x(const Reputation& rep);

struct CaseResult {
    int case_index = 0;  // 0 = victim pays nothing (worst reputation)
    lp::Status status = lp::Status::kInfeasible;
    double lp_value = 0.0;
    int iterations = 0;
    double max_violation = 0.0;
    std::optional<Reputation> reputation;
    double tree_profit = 0.0;
    std::optional<int> induced_abort_round;  // empty = pays all
    bool induces_case = false;
};

struct OptimalReputationResult {
    Reputation reputation;
    int case_index = 0;  // winning case; 0 = fallback to worst reputation
    double expected_profit = 0.0;
    bool all_infeasible = false;
    double epsilon_margin = 0.0;
    std::vector<CaseResult> cases;  // cases 1..n in order
};

OptimalReputationResult optimal_reputation(const GameInstance& inst,
                                           std::optional<double> epsilon_margin = std::nullopt);

// Attacker profit when the victim best-responds to `rep`.
double profit_at(const GameInstance& inst, const Reputation& rep);

struct GridSearchResult {
    Reputation reputation;
    double profit = 0.0;
    bool heuristic = false;
    long long evaluations = 0;
};

inline constexpr int kMaxFullGridRounds = 3;

// Full grid over (beta_r, beta_1..beta_n) for n <= 3; coordinate descent
// from seeded random starts beyond that (flagged heuristic). Throws
// std::invalid_argument if the evaluation budget would be exceeded.
GridSearchResult grid_search_reputation(const GameInstance& inst, double resolution,
                                        unsigned seed = 1,
                                        long long max_evaluations = 50'000'000);

struct OverchargeBound {
    double bound = 0.0;
    bool holds = false;
    double optimal_profit = 0.0;
    bool precondition_ok = true;
    std::string precondition_message;
};

// Checks profit > (1 - gamma) V + A_1 - C_r for an instance whose first
// ransom is meant to be (1 - gamma) V.
OverchargeBound overcharge_bound(const GameInstance& inst, double gamma);

// Canonical overcharge schedule: first round (1 - gamma) V, remainder
// spread evenly.
GameInstance make_overcharge_instance(double data_value, int n, double total_ransom, double gamma,
                                      const DecayProfile& decay, double sale_ratio,
                                      double recovery_cost);

struct SingleRoundOptimum {
    double beta_r = 0.0;
    double beta_1 = 1.0;
    double expected_profit = 0.0;
    bool victim_pays = false;
};

SingleRoundOptimum single_round_optimum(double ransom, double data_value, double loss1,
                                        double sale1, double recovery_cost);

// Row-by-row comparison of build_lp against the coefficients as printed in
// the closed-form system.
struct LpDivergenceRow {
    int case_i = 0;
    std::string row;       // constraint label
    int variable = 0;      // 0 = constant term, j = x_j
    double printed = 0.0;
    double generated = 0.0;
};

std::vector<LpDivergenceRow> lp_divergence(const GameInstance& inst, int case_i);

}  // namespace ransomgame
