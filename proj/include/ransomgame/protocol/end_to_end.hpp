#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ransomgame/protocol/contract.hpp"
#include "ransomgame/protocol/crypto.hpp"

namespace ransomgame::protocol {

enum class AttackerBehavior { kHonest, kWithholdKey, kWrongKey };

struct EndToEndScenario {
    int rounds = 1;                // 1 = single lump-sum payment
    std::optional<int> cancel_at;  // victim cancels after this many withdrawals
    AttackerBehavior attacker = AttackerBehavior::kHonest;
    std::size_t data_size = 256;
    std::int64_t demand = 1000;
    double first_round_fraction = 0.5;
    std::int64_t victim_funds = 5000;
    std::int64_t timelock_blocks = 20;
    std::int64_t blocks_per_round = 5;
    std::uint64_t seed = 1;
};

struct EndToEndResult {
    ContractState genesis_state;
    ContractState final_state;
    std::vector<Action> actions;
    std::vector<Event> transcript;
    std::vector<std::string> steps;  // human-readable protocol log
    Bytes original;
    Bytes recovered;
    bool bundle_verified = false;
    bool data_recovered = false;
    std::int64_t attacker_gain = 0;
    std::int64_t victim_spend = 0;   // deposited minus refunded
    std::int64_t victim_refund = 0;
    bool conservation_ok = false;
    bool replay_ok = false;
};

// Integer schedule: the first round takes floor(fraction * demand), the rest
// is spread evenly with any remainder on the earliest later rounds.
std::vector<std::int64_t> split_demand(std::int64_t demand, int rounds, double first_round_fraction);

// Encrypt, deploy, verify, deposit, reveal, decrypt and withdraw against a
// fresh ledger. Contract refusals are recorded, never thrown.
// Throws std::invalid_argument for invalid scenario parameters.
EndToEndResult run_end_to_end(const GroupParams& params, const EndToEndScenario& scenario);

// One JSON object per event: height, actor, action, phase_before,
// phase_after, balances (and refusal/detail when refused).
void write_transcript_jsonl(std::ostream& os, const std::vector<Event>& events);

}  // namespace ransomgame::protocol
