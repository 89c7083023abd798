#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ransomgame/protocol/crypto.hpp"

namespace ransomgame::protocol {

enum class Phase { kUndeployed, kDeployed, kFunded, kKeyVerified, kComplete, kRefunded, kCancelled };

std::string_view to_string(Phase phase);

struct ScheduleEntry {
    std::int64_t amount = 0;
    std::int64_t unlock_height = 0;
    bool operator==(const ScheduleEntry&) const = default;
};

struct ContractState {
    Phase phase = Phase::kUndeployed;
    std::string attacker_account;
    std::string victim_account;
    mpz_class vk;
    std::vector<ScheduleEntry> schedule;
    std::int64_t timelock_height = 0;
    std::int64_t deposited = 0;  // tokens held by the contract
    std::set<int> withdrawn_rounds;
    std::int64_t height = 0;
    std::optional<mpz_class> revealed_key;
    // Wallets outside the contract.
    std::map<std::string, std::int64_t> balances;
    std::int64_t total_deposited = 0;
    std::int64_t total_withdrawn = 0;
    std::int64_t total_refunded = 0;

    std::int64_t schedule_total() const;
    bool operator==(const ContractState&) const = default;
};

// Wallets funded before deployment.
ContractState genesis(const std::string& attacker, const std::string& victim,
                      std::int64_t victim_funds, std::int64_t attacker_funds = 0);

struct Deploy {
    mpz_class vk;
    std::vector<ScheduleEntry> schedule;
    std::int64_t timelock_height = 0;
};
struct Deposit {
    std::string from;
    std::int64_t amount = 0;
};
struct RevealKey {
    mpz_class sk;
};
struct Withdraw {
    int round = 0;  // 1-based
};
struct Cancel {
    std::string from;
};
struct AdvanceClock {
    std::int64_t blocks = 0;
};
struct ExpireRefund {};

using Action = std::variant<Deploy, Deposit, RevealKey, Withdraw, Cancel, AdvanceClock, ExpireRefund>;

std::string_view action_name(const Action& action);

enum class Refusal {
    kNone,
    kWrongPhase,
    kWrongAccount,
    kWrongAmount,
    kInsufficientFunds,
    kBadKey,
    kTimelockExpired,
    kTimelockActive,
    kBadRound,
    kNotUnlocked,
    kAlreadyWithdrawn,
    kInvalidArgument,
};

std::string_view to_string(Refusal refusal);

struct Event {
    std::int64_t height = 0;
    std::string actor;
    std::string action;
    Phase phase_before = Phase::kUndeployed;
    Phase phase_after = Phase::kUndeployed;
    Refusal refusal = Refusal::kNone;
    std::string detail;
    std::int64_t attacker_balance = 0;
    std::int64_t victim_balance = 0;
    std::int64_t contract_balance = 0;

    bool accepted() const { return refusal == Refusal::kNone; }
};

struct ApplyResult {
    ContractState state;
    std::vector<Event> events;
};

// Pure transition. A refused action leaves the state unchanged and yields
// one event with the refusal kind.
ApplyResult contract_apply(const GroupParams& params, const ContractState& state,
                           const Action& action);

// Sum of wallets and contract escrow.
std::int64_t total_tokens(const ContractState& state);
// deposited + withdrawn + refunded == total deposited.
bool conserves(const ContractState& state);

// Single writer: actions are applied in order and recorded.
class Ledger {
  public:
    Ledger(GroupParams params, ContractState genesis_state);

    const Event& apply(const Action& action);

    const ContractState& state() const { return state_; }
    const ContractState& genesis_state() const { return genesis_; }
    const std::vector<Action>& actions() const { return actions_; }
    const std::vector<Event>& transcript() const { return transcript_; }
    const GroupParams& params() const { return params_; }

  private:
    GroupParams params_;
    ContractState genesis_;
    ContractState state_;
    std::vector<Action> actions_;
    std::vector<Event> transcript_;
};

ContractState replay(const GroupParams& params, const ContractState& genesis_state,
                     const std::vector<Action>& actions);

}  // namespace ransomgame::protocol
