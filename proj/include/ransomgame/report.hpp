#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ransomgame/montecarlo.hpp"
#include "ransomgame/reputation.hpp"

namespace ransomgame {

// Money and probabilities are written with 9 decimals.
std::string format_number(double value);

// victim_id,data_value,decay,mode,abort_round,profit,loss
void write_victims_csv(std::ostream& os, const std::vector<ScenarioResult>& results);
// mode,round,cumulative_profit
void write_rounds_csv(std::ostream& os, const std::vector<ScenarioResult>& results);
// Long format x,series,value. Reputation columns are the key-return
// probability and the per-round probability of keeping the data
// confidential (1 - beta_i).
void write_reputation_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, int n);
void write_profit_sweep_csv(std::ostream& os, const std::vector<ProfitSweepRow>& rows);
// case,status,lp_value,beta_r,beta_1..beta_n,tree_profit,induced_abort_round
void write_cases_csv(std::ostream& os, const OptimalReputationResult& result, int n);

}  // namespace ransomgame
