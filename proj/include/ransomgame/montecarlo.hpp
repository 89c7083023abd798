#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ransomgame/game_core.hpp"
#include "ransomgame/reputation.hpp"

namespace ransomgame {

enum class ReputationMode { kWorst, kPerfectSingle, kPerfectMulti, kOptimalMulti };

std::string_view to_string(ReputationMode mode);
std::optional<ReputationMode> parse_reputation_mode(std::string_view name);

struct ScenarioConfig {
    int rounds = 8;
    double total_ransom = 1000.0;
    double first_round_fraction = 0.5;
    int victim_count = 40;
    double value_lo = 250.0;  // data value ~ U(value_lo, value_hi)
    double value_hi = 350.0;
    std::vector<DecayKind> decay_mix{DecayKind::kQuadratic, DecayKind::kLinear,
                                     DecayKind::kCircular};
    double sale_ratio = 0.7;
    double recovery_cost = 0.0;
    ReputationMode mode = ReputationMode::kPerfectMulti;
    std::uint64_t seed = 1;
    // Rounds the victim keeps paying after a sale before noticing the leak.
    int detection_lag = 0;
    std::optional<double> epsilon_margin;
};

std::vector<Violation> validate_config(const ScenarioConfig& cfg);

struct VictimRecord {
    int victim_id = 0;
    double data_value = 0.0;
    DecayKind decay = DecayKind::kLinear;
    ReputationMode mode = ReputationMode::kWorst;
    Reputation reputation;
    std::optional<int> abort_round;  // empty = paid every round
    int rounds_paid = 0;
    double profit = 0.0;  // attacker expected profit
    double loss = 0.0;    // victim expected loss
    std::vector<double> per_round_profit;  // length n of the scenario
};

struct ScenarioResult {
    ReputationMode mode = ReputationMode::kWorst;
    int rounds = 0;
    std::vector<VictimRecord> victims;
    std::vector<double> cumulative_profit;  // summed over victims, rounds 1..n
    double total_profit = 0.0;
    double mean_profit = 0.0;
};

// The n-round instance a victim with value `data_value` faces.
GameInstance scenario_instance(const ScenarioConfig& cfg, double data_value, DecayKind decay);

// Per-victim draws; depends only on (seed, victim index).
struct VictimDraw {
    double data_value = 0.0;
    DecayKind decay = DecayKind::kLinear;
};
VictimDraw draw_victim(const ScenarioConfig& cfg, int victim_id);

// Expected profit and loss with a detection lag: after a sale the victim
// keeps paying for `lag` more rounds (within their threshold). lag = 0 is
// the plain outcome tree.
struct LaggedOutcome {
    double profit = 0.0;
    double loss = 0.0;
    std::vector<double> per_round_profit;
};
LaggedOutcome lagged_outcome(const GameInstance& inst, const Reputation& rep, int threshold,
                             int lag);

// Throws std::invalid_argument on an invalid config. `threads` <= 0 means
// one worker per hardware thread; output does not depend on it.
ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads = 1);

// Same victim draws for every mode, results in `modes` order.
std::vector<ScenarioResult> compare_scenarios(const ScenarioConfig& base,
                                              const std::vector<ReputationMode>& modes,
                                              int threads = 1);

struct SweepRow {
    double total_ransom = 0.0;
    Reputation reputation;
    int case_index = 0;
    bool fallback = false;
    double profit = 0.0;
};

// Optimal reputation per total ransom, first round taking
// `first_round_fraction` and the rest spread evenly.
std::vector<SweepRow> reputation_sweep(double data_value, int n, const DecayProfile& decay,
                                       double sale_ratio, double recovery_cost,
                                       const std::vector<double>& ransom_grid,
                                       double first_round_fraction = 0.5,
                                       std::optional<double> epsilon_margin = std::nullopt);

struct ProfitSweepRow {
    double total_ransom = 0.0;
    double profit = 0.0;
    double bound = 0.0;       // (1 - gamma) V + A_1 - C_r, constant over the grid
    bool bound_applies = false;
};

// Totals above (1 - gamma) V use the overcharge schedule (first round
// (1 - gamma) V); smaller totals fall back to the 50% split and carry the
// bound for reference only.
std::vector<ProfitSweepRow> expected_profit_sweep(double data_value, int n,
                                                  const DecayProfile& decay, double sale_ratio,
                                                  double recovery_cost,
                                                  const std::vector<double>& ransom_grid,
                                                  double gamma = 0.1);

}  // namespace ransomgame
