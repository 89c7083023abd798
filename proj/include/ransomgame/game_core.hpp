#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ransomgame {

// Economic parameters of one attack. Rounds are 1-based in every public
// function; vectors are 0-based (ransoms[0] is R_1).
struct GameInstance {
    int n = 0;
    std::vector<double> ransoms;       // R_1..R_n
    double data_value = 0.0;           // V
    double recovery_cost = 0.0;        // C_r
    std::vector<double> losses;        // L_1..L_n
    std::vector<double> sale_profits;  // A_1..A_n

    double ransom(int round) const { return ransoms[round - 1]; }
    double loss(int round) const { return losses[round - 1]; }
    double sale(int round) const { return sale_profits[round - 1]; }
    double total_ransom() const;
};

// Attacker behaviour: beta_r is the key-return probability after the first
// payment, betas[i-1] is the probability of selling after the i-th payment.
struct Reputation {
    double beta_r = 1.0;
    std::vector<double> betas;

    static Reputation perfect(int n);  // (1, 0, ..., 0)
    static Reputation worst(int n);    // (0, 1, ..., 1)
    double beta(int round) const { return betas[round - 1]; }
};

// Threshold victim strategy: pay rounds 1..abort_round-1, refuse at
// abort_round. An empty abort_round means every round is paid.
struct VictimPolicy {
    std::optional<int> abort_round;
    std::vector<double> continuation_values;  // a_i or b_i, i = 1..n
    double expected_loss = 0.0;

    bool pays_all() const { return !abort_round.has_value(); }
    // Threshold in 1..n+1, where n+1 stands for pay-all.
    int threshold() const {
        return abort_round.value_or(static_cast<int>(continuation_values.size()) + 1);
    }
    int rounds_paid() const { return threshold() - 1; }
};

enum class DecayKind { kQuadratic, kLinear, kCircular, kCustom };

// Fraction of the data's confidentiality value left at normalised time x.
// CUSTOM profiles are tabulated at x = i/n for i = 1..n.
struct DecayProfile {
    DecayKind kind = DecayKind::kLinear;
    std::vector<double> table;

    static DecayProfile quadratic() { return {DecayKind::kQuadratic, {}}; }
    static DecayProfile linear() { return {DecayKind::kLinear, {}}; }
    static DecayProfile circular() { return {DecayKind::kCircular, {}}; }
    static DecayProfile custom(std::vector<double> values) {
        return {DecayKind::kCustom, std::move(values)};
    }

    // Built-in kinds only.
    double operator()(double x) const;
};

std::string_view to_string(DecayKind kind);
std::optional<DecayKind> parse_decay_kind(std::string_view name);

struct Profiles {
    std::vector<double> losses;
    std::vector<double> sale_profits;
};

// L_i = f(i/n) V and A_i = sale_ratio * L_i.
Profiles build_profiles(double data_value, int n, const DecayProfile& decay, double sale_ratio);

// First round takes `first_round_fraction` of the total, the remainder is
// split evenly over rounds 2..n.
std::vector<double> split_ransom(double total, int n, double first_round_fraction);

struct Violation {
    std::string field;
    std::string message;
};

// Every broken invariant, with a field path. Empty means valid.
std::vector<Violation> validate_instance(const GameInstance& inst);
std::vector<Violation> validate_reputation(const Reputation& rep, int n);

// Throws std::invalid_argument listing the violations.
void require_valid(const GameInstance& inst);
void require_valid(const GameInstance& inst, const Reputation& rep);

// Convenience constructor for the canonical experiment layout.
GameInstance make_instance(double data_value, int n, double total_ransom,
                           double first_round_fraction, const DecayProfile& decay,
                           double sale_ratio, double recovery_cost = 0.0);

}  // namespace ransomgame
