#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ransomgame/game_core.hpp"
#include "ransomgame/montecarlo.hpp"
#include "ransomgame/reputation.hpp"
#include "ransomgame/strategy.hpp"

namespace ransomgame {

using json = nlohmann::ordered_json;

// Schema or invariant violation, one entry per offending field path.
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

// Keys: n, ransoms (or total_ransom + first_round_fraction), data_value,
// recovery_cost, losses and sale_profits (optional, derived from decay and
// sale_ratio when absent), decay, decay_table, sale_ratio.
GameInstance instance_from_json(const json& j);
json to_json(const GameInstance& inst);

// {"beta_r": x, "betas": [...]} or a flat array (beta_r, beta_1..beta_n).
Reputation reputation_from_json(const json& j, int n);
json to_json(const Reputation& rep);
// "beta_r,beta_1,...,beta_n"
Reputation parse_reputation_list(std::string_view text, int n);

json to_json(const VictimPolicy& policy);
json to_json(const ProfitBreakdown& breakdown);
json to_json(const OptimalReputationResult& result);
json to_json(const CaseResult& result);

// Every ScenarioConfig field is optional; missing ones keep the defaults.
ScenarioConfig scenario_from_json(const json& j, ScenarioConfig base = {});
json to_json(const ScenarioConfig& cfg);
json summary_json(const ScenarioResult& result);

std::vector<ReputationMode> modes_from_json(const json& j);

// Throws ValidationError unless `text` parses as JSON.
json parse_json(const std::string& text, std::string_view what);

}  // namespace ransomgame
