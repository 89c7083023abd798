#include "ransomgame/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ransomgame/sampling.hpp"

namespace ransomgame {

namespace {

void check_round(const GameInstance& inst, int round, const char* who) {
    if (round < 1 || round > inst.n)
        throw std::invalid_argument(std::string(who) + ": round " + std::to_string(round) +
                                    " outside 1.." + std::to_string(inst.n));
}

void check_threshold(const GameInstance& inst, int threshold, const char* who) {
    if (threshold < 1 || threshold > inst.n + 1)
        throw std::invalid_argument(std::string(who) + ": threshold " + std::to_string(threshold) +
                                    " outside 1.." + std::to_string(inst.n + 1));
}

}  // namespace

PayoffMatrix round_payoff_matrix(const GameInstance& inst, int round) {
    require_valid(inst);
    check_round(inst, round, "round_payoff_matrix");
    const double r = inst.ransom(round);
    const double a = inst.sale(round);
    const double l = inst.loss(round);
    const double next_a = round < inst.n ? inst.sale(round + 1) : 0.0;
    const double next_l = round < inst.n ? inst.loss(round + 1) : 0.0;
    // Round 1 payment buys the key back: the attacker bears C_r and the
    // victim regains V.
    const double cost = round == 1 ? inst.recovery_cost : 0.0;
    const double value = round == 1 ? inst.data_value : 0.0;

    PayoffMatrix m;
    m[1][1] = {r - cost + a, -r + value - l};
    m[1][0] = {r - cost + next_a, -r + value - next_l};
    m[0][1] = {a, -l};
    m[0][0] = {a, -l};
    return m;
}

WorstCaseResult worst_case_equilibrium(const GameInstance& inst) {
    WorstCaseResult out;
    out.policy = victim_policy(inst, Reputation::worst(inst.n));
    out.attacker_sell_round = 1;
    out.attacker_payoff = inst.sale(1);
    out.victim_payoff = -inst.loss(1);
    return out;
}

VictimPolicy perfect_reputation_policy(const GameInstance& inst) {
    require_valid(inst);
    const int n = inst.n;
    VictimPolicy policy;
    policy.continuation_values.assign(static_cast<size_t>(n), 0.0);
    std::vector<bool> aborts(static_cast<size_t>(n), false);

    double next = 0.0;  // a_{n+1}
    for (int i = n; i >= 1; --i) {
        const double pay = i == 1 ? inst.ransom(1) - inst.data_value + next : inst.ransom(i) + next;
        const double refuse = inst.loss(i);
        aborts[i - 1] = pay >= refuse;
        next = std::min(pay, refuse);
        policy.continuation_values[i - 1] = next;
    }
    for (int i = 1; i <= n; ++i) {
        if (aborts[i - 1]) {
            policy.abort_round = i;
            break;
        }
    }
    policy.expected_loss = policy.continuation_values[0];
    return policy;
}

VictimPolicy continuation_policy(const GameInstance& inst, const Reputation& rep, int from_round) {
    require_valid(inst, rep);
    check_round(inst, from_round, "continuation_policy");
    const int n = inst.n;
    VictimPolicy policy;
    policy.continuation_values.assign(static_cast<size_t>(n),
                                      std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> aborts(static_cast<size_t>(n), false);

    double next = 0.0;  // b_{n+1}
    for (int i = n; i >= from_round; --i) {
        double pay;
        if (i == 1) {
            pay = inst.ransom(1) + (1.0 - rep.beta_r) * inst.loss(1) +
                  rep.beta_r * (-inst.data_value + rep.beta(1) * inst.loss(1) +
                                (1.0 - rep.beta(1)) * next);
        } else {
            pay = inst.ransom(i) + rep.beta(i) * inst.loss(i) + (1.0 - rep.beta(i)) * next;
        }
        const double refuse = inst.loss(i);
        aborts[i - 1] = pay >= refuse;
        next = std::min(pay, refuse);
        policy.continuation_values[i - 1] = next;
    }
    for (int i = from_round; i <= n; ++i) {
        if (aborts[i - 1]) {
            policy.abort_round = i;
            break;
        }
    }
    policy.expected_loss = policy.continuation_values[from_round - 1];
    return policy;
}

VictimPolicy victim_policy(const GameInstance& inst, const Reputation& rep) {
    return continuation_policy(inst, rep, 1);
}

bool decide_single_round(double ransom, double data_value, double loss1, double beta_r,
                         double beta_1) {
    if (!(beta_r >= 0.0 && beta_r <= 1.0 && beta_1 >= 0.0 && beta_1 <= 1.0))
        throw std::invalid_argument("decide_single_round: probabilities must lie in [0,1]");
    return ransom < beta_r * (data_value + (1.0 - beta_1) * loss1);
}

int threshold_from_decisions(std::span<const bool> pays) {
    const auto first_refusal = std::find(pays.begin(), pays.end(), false);
    if (std::find(first_refusal, pays.end(), true) != pays.end())
        throw std::invalid_argument("not a threshold policy: a refusal is followed by a payment");
    return static_cast<int>(first_refusal - pays.begin()) + 1;
}

ProfitBreakdown attacker_expected_profit(const GameInstance& inst, const Reputation& rep,
                                         int threshold) {
    require_valid(inst, rep);
    check_threshold(inst, threshold, "attacker_expected_profit");
    const int n = inst.n;
    ProfitBreakdown out;
    out.end_with_sale.assign(static_cast<size_t>(n), 0.0);
    out.per_round_profit.assign(static_cast<size_t>(n), 0.0);

    if (threshold == 1) {
        out.sale_component = inst.sale(1);
        out.end_with_sale[0] = 1.0;
        out.per_round_profit[0] = inst.sale(1);
        out.expected_profit = out.sale_component;
        return out;
    }

    // Round 1 was paid. Without the key the data is sold at once; with it
    // the attacker bears the recovery cost and then plays the per-round
    // sell/keep lottery.
    out.ransom_component = inst.ransom(1);
    const double withheld = 1.0 - rep.beta_r;
    out.sale_component += withheld * inst.sale(1);
    out.end_with_sale[0] += withheld;
    out.recovery_cost_component = rep.beta_r * inst.recovery_cost;
    out.per_round_profit[0] =
        inst.ransom(1) + withheld * inst.sale(1) - out.recovery_cost_component;

    double reach = rep.beta_r;
    for (int i = 1; i < threshold; ++i) {
        const double sold = reach * rep.beta(i);
        out.sale_component += sold * inst.sale(i);
        out.end_with_sale[i - 1] += sold;
        out.per_round_profit[i - 1] += sold * inst.sale(i);
        reach *= 1.0 - rep.beta(i);
        if (i + 1 < threshold) {
            out.ransom_component += reach * inst.ransom(i + 1);
            out.per_round_profit[i] += reach * inst.ransom(i + 1);
        }
    }
    if (threshold <= n) {
        // Victim refuses while the data is still confidential.
        out.sale_component += reach * inst.sale(threshold);
        out.end_with_sale[threshold - 1] += reach;
        out.per_round_profit[threshold - 1] += reach * inst.sale(threshold);
    } else {
        out.end_without_sale = reach;
    }
    out.expected_profit = out.ransom_component + out.sale_component - out.recovery_cost_component;
    return out;
}

ProfitBreakdown attacker_expected_profit(const GameInstance& inst, const Reputation& rep,
                                         const VictimPolicy& policy) {
    if (policy.continuation_values.size() != static_cast<size_t>(inst.n))
        throw std::invalid_argument("attacker_expected_profit: policy length does not match n");
    if (policy.abort_round && (*policy.abort_round < 1 || *policy.abort_round > inst.n))
        throw std::invalid_argument("attacker_expected_profit: abort round out of range");
    return attacker_expected_profit(inst, rep, policy.threshold());
}

double victim_expected_loss(const GameInstance& inst, const Reputation& rep, int threshold) {
    require_valid(inst, rep);
    check_threshold(inst, threshold, "victim_expected_loss");
    if (threshold == 1) return inst.loss(1);

    double loss = inst.ransom(1) + (1.0 - rep.beta_r) * inst.loss(1) - rep.beta_r * inst.data_value;
    double reach = rep.beta_r;
    for (int i = 1; i < threshold; ++i) {
        loss += reach * rep.beta(i) * inst.loss(i);
        reach *= 1.0 - rep.beta(i);
        if (i + 1 < threshold) loss += reach * inst.ransom(i + 1);
    }
    if (threshold <= inst.n) loss += reach * inst.loss(threshold);
    return loss;
}

VictimPolicy enumerate_best_response(const GameInstance& inst, const Reputation& rep) {
    require_valid(inst, rep);
    if (inst.n > kMaxEnumerationRounds)
        throw std::invalid_argument("enumerate_best_response: n = " + std::to_string(inst.n) +
                                    " exceeds the enumeration budget of " +
                                    std::to_string(kMaxEnumerationRounds));
    const int n = inst.n;
    int best_t = 1;
    double best = victim_expected_loss(inst, rep, 1);
    for (int t = 2; t <= n + 1; ++t) {
        const double loss = victim_expected_loss(inst, rep, t);
        if (loss < best) {
            best = loss;
            best_t = t;
        }
    }
    VictimPolicy policy;
    if (best_t <= n) policy.abort_round = best_t;
    policy.expected_loss = best;
    // Per-round optimal continuation from round i, by the same enumeration
    // restricted to thresholds >= i.
    policy.continuation_values.assign(static_cast<size_t>(n), 0.0);
    for (int i = 1; i <= n; ++i) {
        if (i == 1) {
            policy.continuation_values[0] = best;
            continue;
        }
        double v = inst.loss(i);
        double pay_loss = inst.ransom(i);
        double reach = 1.0;
        // Thresholds t > i, evaluated forward from round i.
        for (int t = i + 1; t <= n + 1; ++t) {
            const int paid = t - 1;
            pay_loss += reach * rep.beta(paid) * inst.loss(paid);
            reach *= 1.0 - rep.beta(paid);
            const double candidate = pay_loss + (t <= n ? reach * inst.loss(t) : 0.0);
            v = std::min(v, candidate);
            if (t <= n) pay_loss += reach * inst.ransom(t);
        }
        policy.continuation_values[i - 1] = v;
    }
    return policy;
}

namespace {

double sale_or_zero(const GameInstance& inst, int round) {
    return round >= 1 && round <= inst.n ? inst.sale(round) : 0.0;
}

// prod_{s=1}^{upto} (1 - beta_s)
double keep_product(const Reputation& rep, int upto) {
    double p = 1.0;
    for (int s = 1; s <= upto; ++s) p *= 1.0 - rep.beta(s);
    return p;
}

}  // namespace

double printed_ep_reference(const GameInstance& inst, const Reputation& rep, int case_k) {
    require_valid(inst, rep);
    check_round(inst, case_k, "printed_ep_reference");
    const int n = inst.n;
    const double br = rep.beta_r;
    const double r1 = inst.ransom(1);
    const double a1 = inst.sale(1);
    const double cr = inst.recovery_cost;

    if (case_k == 1) {
        return r1 + a1 - br * cr + (1.0 - br) * (sale_or_zero(inst, 2) - a1);
    }

    double shared = 0.0;
    for (int l = 1; l <= n - 2; ++l) {
        shared += (inst.ransom(l + 1) + inst.sale(l + 1) - inst.sale(l)) * keep_product(rep, l);
    }
    if (case_k == n) {
        const double tail = keep_product(rep, n - 1);
        return r1 + a1 - br * cr + br * shared + br * tail * (inst.ransom(n) - inst.sale(n - 1)) +
               br * tail * rep.beta(n) * inst.sale(n);
    }
    const int k = case_k;
    return r1 + a1 - cr + br * shared +
           br * keep_product(rep, k - 1) * (inst.ransom(k) + inst.sale(k) - inst.sale(k - 1)) +
           br * (inst.sale(k + 1) - inst.sale(k)) * keep_product(rep, k) * rep.beta(n);
}

std::vector<EpDivergenceRow> ep_divergence(const GameInstance& inst, const Reputation& rep,
                                           int point) {
    std::vector<EpDivergenceRow> rows;
    for (int k = 1; k <= inst.n; ++k) {
        EpDivergenceRow row;
        row.point = point;
        row.n = inst.n;
        row.case_k = k;
        row.printed = printed_ep_reference(inst, rep, k);
        row.tree = attacker_expected_profit(inst, rep, k + 1).expected_profit;
        row.abs_diff = std::abs(row.printed - row.tree);
        rows.push_back(row);
    }
    return rows;
}

std::vector<EpDivergenceRow> random_ep_divergence(std::uint64_t seed, int count, int max_n) {
    if (max_n < 2) throw std::invalid_argument("random_ep_divergence: max_n must be at least 2");
    std::vector<EpDivergenceRow> rows;
    for (int p = 0; p < count; ++p) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(p));
        const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n - 1)));
        const GameInstance inst = random_instance(rng, n);
        const Reputation rep = random_reputation(rng, n);
        auto part = ep_divergence(inst, rep, p);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

}  // namespace ransomgame
