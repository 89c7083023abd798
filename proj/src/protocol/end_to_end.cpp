#include "ransomgame/protocol/end_to_end.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace ransomgame::protocol {

std::vector<std::int64_t> split_demand(std::int64_t demand, int rounds, double first_round_fraction) {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (demand < rounds) throw std::invalid_argument("demand must cover one token per round");
    if (!(first_round_fraction > 0.0 && first_round_fraction <= 1.0))
        throw std::invalid_argument("first_round_fraction must lie in (0,1]");
    if (rounds == 1) return {demand};
    std::vector<std::int64_t> out(static_cast<size_t>(rounds));
    out[0] = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::floor(first_round_fraction * static_cast<double>(demand))), 1,
        demand - (rounds - 1));
    const std::int64_t rest = demand - out[0];
    const std::int64_t base = rest / (rounds - 1);
    std::int64_t extra = rest % (rounds - 1);
    for (int i = 1; i < rounds; ++i) out[i] = base + (extra-- > 0 ? 1 : 0);
    return out;
}

EndToEndResult run_end_to_end(const GroupParams& params, const EndToEndScenario& sc) {
    if (sc.data_size == 0) throw std::invalid_argument("data_size must be positive");
    if (sc.cancel_at && (*sc.cancel_at < 1 || *sc.cancel_at > sc.rounds))
        throw std::invalid_argument("cancel_at must lie in 1..rounds");
    if (sc.timelock_blocks < 1 || sc.blocks_per_round < 0)
        throw std::invalid_argument("timelock_blocks must be positive");
    if (sc.victim_funds < sc.demand) throw std::invalid_argument("victim cannot afford the demand");

    EndToEndResult out;
    Rng rng = Rng::stream(sc.seed, 0);
    out.original.resize(sc.data_size);
    for (auto& b : out.original) b = static_cast<std::uint8_t>(rng.next() >> 56);

    // Steps 1-2: encrypt the victim's data under a fresh key with proofs.
    const KeyedBundle keyed = encrypt_with_proof(params, out.original, rng);
    const VeckBundle& bundle = keyed.bundle;
    out.steps.push_back("attacker encrypted " + std::to_string(sc.data_size) + " bytes into " +
                        std::to_string(bundle.ciphertext.size()) + " chunks");

    Ledger ledger(params, genesis("attacker", "victim", sc.victim_funds));
    out.genesis_state = ledger.state();

    // Step 3: ransom demand with the contract schedule.
    const auto amounts = split_demand(sc.demand, sc.rounds, sc.first_round_fraction);
    std::vector<ScheduleEntry> schedule;
    const std::int64_t start = ledger.state().height;
    for (int k = 0; k < sc.rounds; ++k)
        schedule.push_back({amounts[k], start + k * sc.blocks_per_round});
    ledger.apply(Deploy{bundle.vk, schedule, start + sc.timelock_blocks});
    out.steps.push_back("contract deployed, demand " + std::to_string(sc.demand) + " over " +
                        std::to_string(sc.rounds) + " rounds");

    // Steps 4-5: the victim checks the ciphertext against the commitments.
    const VerifyResult check = verify_cipher_data(params, bundle);
    out.bundle_verified = check.accept;
    if (!check.accept) {
        out.steps.push_back("victim rejected the bundle: " + check.reason);
    } else {
        out.steps.push_back("victim verified ciphertext and proofs");
        // Step 6: deposit.
        ledger.apply(Deposit{"victim", sc.demand});
        out.steps.push_back("victim deposited " + std::to_string(sc.demand));

        // Step 7: key release before the timelock.
        if (sc.attacker == AttackerBehavior::kHonest) {
            ledger.apply(RevealKey{keyed.sk});
        } else if (sc.attacker == AttackerBehavior::kWrongKey) {
            mpz_class wrong = keyed.sk + 1;
            if (wrong >= params.q) wrong = 1;
            const Event& e = ledger.apply(RevealKey{wrong});
            out.steps.push_back("wrong key refused: " + std::string(to_string(e.refusal)));
        }
        if (ledger.state().phase != Phase::kKeyVerified) {
            const std::int64_t wait = ledger.state().timelock_height - ledger.state().height;
            if (wait > 0) ledger.apply(AdvanceClock{wait});
            ledger.apply(ExpireRefund{});
            out.steps.push_back("timelock expired, deposit refunded");
        } else {
            // Step 8: decrypt with the key published by the contract.
            out.steps.push_back("key verified on-chain");
            try {
                out.recovered = decrypt(params, *ledger.state().revealed_key, bundle.ciphertext,
                                        bundle.length);
                out.data_recovered = sha256(out.recovered) == bundle.data_digest &&
                                     out.recovered == out.original;
            } catch (const DecryptError& e) {
                out.steps.push_back(std::string("decryption failed: ") + e.what());
            }
            out.steps.push_back(out.data_recovered ? "victim recovered the data"
                                                   : "recovered data does not match");
            // Step 9: withdrawals per unlocked round.
            for (int r = 1; r <= sc.rounds; ++r) {
                const std::int64_t unlock = ledger.state().schedule[r - 1].unlock_height;
                if (unlock > ledger.state().height)
                    ledger.apply(AdvanceClock{unlock - ledger.state().height});
                ledger.apply(Withdraw{r});
                if (sc.cancel_at && *sc.cancel_at == r) {
                    const Event& e = ledger.apply(Cancel{"victim"});
                    out.steps.push_back(e.accepted()
                                            ? "victim cancelled after round " + std::to_string(r)
                                            : "cancel refused: " + std::string(to_string(e.refusal)));
                    if (e.accepted()) break;
                }
            }
        }
    }

    out.final_state = ledger.state();
    out.actions = ledger.actions();
    out.transcript = ledger.transcript();
    out.attacker_gain = out.final_state.balances.at("attacker") - out.genesis_state.balances.at("attacker");
    out.victim_refund = out.final_state.total_refunded;
    out.victim_spend = out.final_state.total_deposited - out.final_state.total_refunded;
    out.conservation_ok = conserves(out.final_state) &&
                          total_tokens(out.final_state) == total_tokens(out.genesis_state) &&
                          out.victim_spend == out.final_state.total_withdrawn + out.final_state.deposited;
    out.replay_ok = replay(params, out.genesis_state, out.actions) == out.final_state;
    out.steps.push_back("final phase " + std::string(to_string(out.final_state.phase)) +
                        ", attacker gain " + std::to_string(out.attacker_gain) + ", refund " +
                        std::to_string(out.victim_refund));
    return out;
}

void write_transcript_jsonl(std::ostream& os, const std::vector<Event>& events) {
    for (const auto& e : events) {
        nlohmann::ordered_json j;
        j["height"] = e.height;
        j["actor"] = e.actor;
        j["action"] = e.action;
        j["phase_before"] = std::string(to_string(e.phase_before));
        j["phase_after"] = std::string(to_string(e.phase_after));
        j["balances"] = {{"attacker", e.attacker_balance},
                         {"victim", e.victim_balance},
                         {"contract", e.contract_balance}};
        if (!e.accepted()) {
            j["refusal"] = std::string(to_string(e.refusal));
            j["detail"] = e.detail;
        }
        os << j.dump() << '\n';
    }
}

}  // namespace ransomgame::protocol
