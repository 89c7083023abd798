#include "ransomgame/protocol/contract.hpp"

#include <numeric>

namespace ransomgame::protocol {

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::kUndeployed: return "UNDEPLOYED";
        case Phase::kDeployed: return "DEPLOYED";
        case Phase::kFunded: return "FUNDED";
        case Phase::kKeyVerified: return "KEY_VERIFIED";
        case Phase::kComplete: return "COMPLETE";
        case Phase::kRefunded: return "REFUNDED";
        case Phase::kCancelled: return "CANCELLED";
    }
    return "UNKNOWN";
}

std::string_view to_string(Refusal refusal) {
    switch (refusal) {
        case Refusal::kNone: return "none";
        case Refusal::kWrongPhase: return "wrong_phase";
        case Refusal::kWrongAccount: return "wrong_account";
        case Refusal::kWrongAmount: return "wrong_amount";
        case Refusal::kInsufficientFunds: return "insufficient_funds";
        case Refusal::kBadKey: return "bad_key";
        case Refusal::kTimelockExpired: return "timelock_expired";
        case Refusal::kTimelockActive: return "timelock_active";
        case Refusal::kBadRound: return "bad_round";
        case Refusal::kNotUnlocked: return "not_unlocked";
        case Refusal::kAlreadyWithdrawn: return "already_withdrawn";
        case Refusal::kInvalidArgument: return "invalid_argument";
    }
    return "unknown";
}

std::string_view action_name(const Action& action) {
    struct Visitor {
        std::string_view operator()(const Deploy&) const { return "Deploy"; }
        std::string_view operator()(const Deposit&) const { return "Deposit"; }
        std::string_view operator()(const RevealKey&) const { return "RevealKey"; }
        std::string_view operator()(const Withdraw&) const { return "Withdraw"; }
        std::string_view operator()(const Cancel&) const { return "Cancel"; }
        std::string_view operator()(const AdvanceClock&) const { return "AdvanceClock"; }
        std::string_view operator()(const ExpireRefund&) const { return "ExpireRefund"; }
    };
    return std::visit(Visitor{}, action);
}

std::int64_t ContractState::schedule_total() const {
    return std::accumulate(schedule.begin(), schedule.end(), std::int64_t{0},
                           [](std::int64_t acc, const ScheduleEntry& e) { return acc + e.amount; });
}

ContractState genesis(const std::string& attacker, const std::string& victim,
                      std::int64_t victim_funds, std::int64_t attacker_funds) {
    ContractState s;
    s.attacker_account = attacker;
    s.victim_account = victim;
    s.balances[attacker] = attacker_funds;
    s.balances[victim] = victim_funds;
    return s;
}

std::int64_t total_tokens(const ContractState& state) {
    std::int64_t total = state.deposited;
    for (const auto& [account, balance] : state.balances) total += balance;
    return total;
}

bool conserves(const ContractState& state) {
    return state.deposited + state.total_withdrawn + state.total_refunded == state.total_deposited;
}

namespace {

struct Outcome {
    Refusal refusal = Refusal::kNone;
    std::string detail;
};

Outcome refuse(Refusal r, std::string detail) { return {r, std::move(detail)}; }

Outcome need_phase(const ContractState& s, Phase phase) {
    if (s.phase != phase)
        return refuse(Refusal::kWrongPhase, "requires " + std::string(to_string(phase)) + ", contract is " +
                                                std::string(to_string(s.phase)));
    return {};
}

void refund_all(ContractState& s) {
    s.balances[s.victim_account] += s.deposited;
    s.total_refunded += s.deposited;
    s.deposited = 0;
}

struct Transition {
    const GroupParams& params;
    ContractState& s;

    Outcome operator()(const Deploy& a) {
        if (auto o = need_phase(s, Phase::kUndeployed); o.refusal != Refusal::kNone) return o;
        if (a.schedule.empty()) return refuse(Refusal::kInvalidArgument, "empty schedule");
        for (const auto& e : a.schedule)
            if (e.amount <= 0) return refuse(Refusal::kInvalidArgument, "non-positive scheduled amount");
        if (a.timelock_height <= s.height)
            return refuse(Refusal::kInvalidArgument, "timelock must lie in the future");
        if (!in_subgroup(params, a.vk)) return refuse(Refusal::kInvalidArgument, "vk not in subgroup");
        s.vk = a.vk;
        s.schedule = a.schedule;
        s.timelock_height = a.timelock_height;
        s.phase = Phase::kDeployed;
        return {};
    }

    Outcome operator()(const Deposit& a) {
        if (auto o = need_phase(s, Phase::kDeployed); o.refusal != Refusal::kNone) return o;
        if (a.from != s.victim_account) return refuse(Refusal::kWrongAccount, "only the victim deposits");
        if (a.amount != s.schedule_total())
            return refuse(Refusal::kWrongAmount, "deposit must equal the scheduled total " +
                                                     std::to_string(s.schedule_total()));
        if (s.balances[a.from] < a.amount) return refuse(Refusal::kInsufficientFunds, "victim balance too low");
        s.balances[a.from] -= a.amount;
        s.deposited += a.amount;
        s.total_deposited += a.amount;
        s.phase = Phase::kFunded;
        return {};
    }

    Outcome operator()(const RevealKey& a) {
        if (auto o = need_phase(s, Phase::kFunded); o.refusal != Refusal::kNone) return o;
        if (s.height >= s.timelock_height) return refuse(Refusal::kTimelockExpired, "timelock has passed");
        if (!verify_key(params, s.vk, a.sk)) return refuse(Refusal::kBadKey, "key does not match vk");
        s.revealed_key = a.sk;
        s.phase = Phase::kKeyVerified;
        return {};
    }

    Outcome operator()(const Withdraw& a) {
        if (auto o = need_phase(s, Phase::kKeyVerified); o.refusal != Refusal::kNone) return o;
        if (a.round < 1 || a.round > static_cast<int>(s.schedule.size()))
            return refuse(Refusal::kBadRound, "round " + std::to_string(a.round) + " not scheduled");
        if (s.withdrawn_rounds.count(a.round)) return refuse(Refusal::kAlreadyWithdrawn, "round already paid out");
        const auto& entry = s.schedule[a.round - 1];
        if (entry.unlock_height > s.height)
            return refuse(Refusal::kNotUnlocked, "round unlocks at height " + std::to_string(entry.unlock_height));
        s.deposited -= entry.amount;
        s.total_withdrawn += entry.amount;
        s.balances[s.attacker_account] += entry.amount;
        s.withdrawn_rounds.insert(a.round);
        if (s.withdrawn_rounds.size() == s.schedule.size()) s.phase = Phase::kComplete;
        return {};
    }

    Outcome operator()(const Cancel& a) {
        if (auto o = need_phase(s, Phase::kKeyVerified); o.refusal != Refusal::kNone) return o;
        if (a.from != s.victim_account) return refuse(Refusal::kWrongAccount, "only the victim cancels");
        refund_all(s);
        s.phase = Phase::kCancelled;
        return {};
    }

    Outcome operator()(const AdvanceClock& a) {
        if (a.blocks <= 0) return refuse(Refusal::kInvalidArgument, "clock only moves forward");
        s.height += a.blocks;
        return {};
    }

    Outcome operator()(const ExpireRefund&) {
        if (auto o = need_phase(s, Phase::kFunded); o.refusal != Refusal::kNone) return o;
        if (s.height < s.timelock_height) return refuse(Refusal::kTimelockActive, "timelock not reached");
        refund_all(s);
        s.phase = Phase::kRefunded;
        return {};
    }
};

std::string actor_of(const ContractState& s, const Action& action) {
    if (std::holds_alternative<Deposit>(action) || std::holds_alternative<Cancel>(action) ||
        std::holds_alternative<ExpireRefund>(action))
        return s.victim_account;
    if (std::holds_alternative<AdvanceClock>(action)) return "ledger";
    return s.attacker_account;
}

}  // namespace

ApplyResult contract_apply(const GroupParams& params, const ContractState& state,
                           const Action& action) {
    ApplyResult out{state, {}};
    Transition t{params, out.state};
    const Outcome o = std::visit(t, action);
    if (o.refusal != Refusal::kNone) out.state = state;

    Event e;
    e.height = out.state.height;
    e.actor = actor_of(state, action);
    e.action = std::string(action_name(action));
    e.phase_before = state.phase;
    e.phase_after = out.state.phase;
    e.refusal = o.refusal;
    e.detail = o.detail;
    const auto find = [&](const std::string& acct) {
        const auto it = out.state.balances.find(acct);
        return it == out.state.balances.end() ? std::int64_t{0} : it->second;
    };
    e.attacker_balance = find(out.state.attacker_account);
    e.victim_balance = find(out.state.victim_account);
    e.contract_balance = out.state.deposited;
    out.events.push_back(std::move(e));
    return out;
}

Ledger::Ledger(GroupParams params, ContractState genesis_state)
    : params_(std::move(params)), genesis_(genesis_state), state_(std::move(genesis_state)) {}

const Event& Ledger::apply(const Action& action) {
    auto result = contract_apply(params_, state_, action);
    state_ = std::move(result.state);
    actions_.push_back(action);
    for (auto& e : result.events) transcript_.push_back(std::move(e));
    return transcript_.back();
}

ContractState replay(const GroupParams& params, const ContractState& genesis_state,
                     const std::vector<Action>& actions) {
    ContractState s = genesis_state;
    for (const auto& a : actions) s = contract_apply(params, s, a).state;
    return s;
}

}  // namespace ransomgame::protocol
