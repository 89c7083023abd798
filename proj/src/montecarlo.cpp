#include "ransomgame/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "ransomgame/sampling.hpp"
#include "ransomgame/strategy.hpp"

namespace ransomgame {

std::string_view to_string(ReputationMode mode) {
    switch (mode) {
        case ReputationMode::kWorst: return "worst";
        case ReputationMode::kPerfectSingle: return "perfect_single";
        case ReputationMode::kPerfectMulti: return "perfect_multi";
        case ReputationMode::kOptimalMulti: return "optimal_multi";
    }
    return "unknown";
}

std::optional<ReputationMode> parse_reputation_mode(std::string_view name) {
    if (name == "worst") return ReputationMode::kWorst;
    if (name == "perfect_single") return ReputationMode::kPerfectSingle;
    if (name == "perfect_multi") return ReputationMode::kPerfectMulti;
    if (name == "optimal_multi") return ReputationMode::kOptimalMulti;
    return std::nullopt;
}

std::vector<Violation> validate_config(const ScenarioConfig& cfg) {
    std::vector<Violation> out;
    if (cfg.rounds < 1) out.push_back({"rounds", "must be at least 1"});
    if (!(cfg.total_ransom > 0.0) || !std::isfinite(cfg.total_ransom))
        out.push_back({"total_ransom", "must be positive"});
    if (!(cfg.first_round_fraction > 0.0 && cfg.first_round_fraction <= 1.0))
        out.push_back({"first_round_fraction", "must lie in (0,1]"});
    if (cfg.rounds > 1 && cfg.first_round_fraction == 1.0)
        out.push_back({"first_round_fraction", "leaves nothing for later rounds"});
    if (cfg.victim_count < 1) out.push_back({"victim_count", "must be at least 1"});
    if (!(cfg.value_lo >= 0.0) || !std::isfinite(cfg.value_hi))
        out.push_back({"value_distribution", "bounds must be finite and non-negative"});
    if (cfg.value_hi < cfg.value_lo)
        out.push_back({"value_distribution", "upper bound below lower bound"});
    if (cfg.decay_mix.empty()) out.push_back({"decay_mix", "must not be empty"});
    for (size_t i = 0; i < cfg.decay_mix.size(); ++i) {
        if (cfg.decay_mix[i] == DecayKind::kCustom)
            out.push_back({"decay_mix[" + std::to_string(i) + "]", "custom profiles are not sampled"});
    }
    if (!(cfg.sale_ratio >= 0.0 && cfg.sale_ratio <= 1.0))
        out.push_back({"sale_ratio", "must lie in [0,1]"});
    if (!(cfg.recovery_cost >= 0.0) || !std::isfinite(cfg.recovery_cost))
        out.push_back({"recovery_cost", "must be finite and non-negative"});
    if (cfg.detection_lag < 0) out.push_back({"detection_lag", "must be non-negative"});
    if (cfg.epsilon_margin && !(*cfg.epsilon_margin >= 0.0))
        out.push_back({"epsilon_margin", "must be non-negative"});
    return out;
}

GameInstance scenario_instance(const ScenarioConfig& cfg, double data_value, DecayKind decay) {
    return make_instance(data_value, cfg.rounds, cfg.total_ransom, cfg.first_round_fraction,
                         DecayProfile{decay, {}}, cfg.sale_ratio, cfg.recovery_cost);
}

VictimDraw draw_victim(const ScenarioConfig& cfg, int victim_id) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(victim_id));
    VictimDraw d;
    d.data_value = rng.uniform(cfg.value_lo, cfg.value_hi);
    d.decay = cfg.decay_mix[rng.below(cfg.decay_mix.size())];
    return d;
}

LaggedOutcome lagged_outcome(const GameInstance& inst, const Reputation& rep, int threshold,
                             int lag) {
    require_valid(inst, rep);
    const int n = inst.n;
    if (threshold < 1 || threshold > n + 1)
        throw std::invalid_argument("lagged_outcome: threshold out of range");
    if (lag < 0) throw std::invalid_argument("lagged_outcome: negative lag");
    LaggedOutcome out;
    out.per_round_profit.assign(static_cast<size_t>(n), 0.0);
    if (threshold == 1) {
        out.profit = inst.sale(1);
        out.loss = inst.loss(1);
        out.per_round_profit[0] = inst.sale(1);
        return out;
    }
    const double withheld = 1.0 - rep.beta_r;
    out.per_round_profit[0] =
        inst.ransom(1) + withheld * inst.sale(1) - rep.beta_r * inst.recovery_cost;
    out.loss = inst.ransom(1) + withheld * inst.loss(1) - rep.beta_r * inst.data_value;
    double reach = rep.beta_r;
    for (int i = 1; i < threshold; ++i) {
        const double sold = reach * rep.beta(i);
        out.per_round_profit[i - 1] += sold * inst.sale(i);
        out.loss += sold * inst.loss(i);
        // Undetected leak: payments continue for up to `lag` rounds.
        for (int k = i + 1; k <= std::min(i + lag, threshold - 1); ++k) {
            out.per_round_profit[k - 1] += sold * inst.ransom(k);
            out.loss += sold * inst.ransom(k);
        }
        reach *= 1.0 - rep.beta(i);
        if (i + 1 < threshold) {
            out.per_round_profit[i] += reach * inst.ransom(i + 1);
            out.loss += reach * inst.ransom(i + 1);
        }
    }
    if (threshold <= n) {
        out.per_round_profit[threshold - 1] += reach * inst.sale(threshold);
        out.loss += reach * inst.loss(threshold);
    }
    for (double p : out.per_round_profit) out.profit += p;
    return out;
}

namespace {

VictimRecord evaluate_victim(const ScenarioConfig& cfg, ReputationMode mode, int victim_id) {
    const VictimDraw draw = draw_victim(cfg, victim_id);
    VictimRecord rec;
    rec.victim_id = victim_id;
    rec.data_value = draw.data_value;
    rec.decay = draw.decay;
    rec.mode = mode;
    rec.per_round_profit.assign(static_cast<size_t>(cfg.rounds), 0.0);

    const GameInstance inst = scenario_instance(cfg, draw.data_value, draw.decay);
    GameInstance played = inst;
    switch (mode) {
        case ReputationMode::kWorst:
            rec.reputation = Reputation::worst(inst.n);
            break;
        case ReputationMode::kPerfectMulti:
            rec.reputation = Reputation::perfect(inst.n);
            break;
        case ReputationMode::kOptimalMulti:
            rec.reputation = optimal_reputation(inst, cfg.epsilon_margin).reputation;
            break;
        case ReputationMode::kPerfectSingle:
            // The whole demand in one round; the data's round-1 loss and
            // sale value are those of the multi-round instance.
            played.n = 1;
            played.ransoms = {cfg.total_ransom};
            played.losses = {inst.loss(1)};
            played.sale_profits = {inst.sale(1)};
            rec.reputation = Reputation::perfect(1);
            break;
    }

    const VictimPolicy policy = victim_policy(played, rec.reputation);
    rec.abort_round = policy.abort_round;
    rec.rounds_paid = policy.rounds_paid();
    if (cfg.detection_lag == 0) {
        const ProfitBreakdown b = attacker_expected_profit(played, rec.reputation, policy);
        rec.profit = b.expected_profit;
        rec.loss = policy.expected_loss;
        std::copy(b.per_round_profit.begin(), b.per_round_profit.end(), rec.per_round_profit.begin());
    } else {
        const LaggedOutcome o =
            lagged_outcome(played, rec.reputation, policy.threshold(), cfg.detection_lag);
        rec.profit = o.profit;
        rec.loss = o.loss;
        std::copy(o.per_round_profit.begin(), o.per_round_profit.end(), rec.per_round_profit.begin());
    }
    return rec;
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads) {
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& v : violations) msg += " " + v.field + ": " + v.message + ";";
        throw std::invalid_argument(msg);
    }
    ScenarioResult out;
    out.mode = cfg.mode;
    out.rounds = cfg.rounds;
    out.victims.resize(static_cast<size_t>(cfg.victim_count));

    const int workers = std::min(resolve_threads(threads), cfg.victim_count);
    if (workers <= 1) {
        for (int v = 0; v < cfg.victim_count; ++v) out.victims[v] = evaluate_victim(cfg, cfg.mode, v);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int v = w; v < cfg.victim_count; v += workers)
                        out.victims[v] = evaluate_victim(cfg, cfg.mode, v);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // Aggregate in victim order so the sums do not depend on scheduling.
    out.cumulative_profit.assign(static_cast<size_t>(cfg.rounds), 0.0);
    for (const auto& rec : out.victims) {
        out.total_profit += rec.profit;
        for (int r = 0; r < cfg.rounds; ++r) out.cumulative_profit[r] += rec.per_round_profit[r];
    }
    for (int r = 1; r < cfg.rounds; ++r) out.cumulative_profit[r] += out.cumulative_profit[r - 1];
    out.mean_profit = out.total_profit / cfg.victim_count;
    return out;
}

std::vector<ScenarioResult> compare_scenarios(const ScenarioConfig& base,
                                              const std::vector<ReputationMode>& modes,
                                              int threads) {
    if (modes.empty()) throw std::invalid_argument("compare_scenarios: no modes given");
    std::vector<ScenarioResult> out;
    for (const auto mode : modes) {
        ScenarioConfig cfg = base;
        cfg.mode = mode;
        out.push_back(run_scenario(cfg, threads));
    }
    return out;
}

std::vector<SweepRow> reputation_sweep(double data_value, int n, const DecayProfile& decay,
                                       double sale_ratio, double recovery_cost,
                                       const std::vector<double>& ransom_grid,
                                       double first_round_fraction,
                                       std::optional<double> epsilon_margin) {
    std::vector<SweepRow> rows;
    for (double total : ransom_grid) {
        const auto inst = make_instance(data_value, n, total, first_round_fraction, decay,
                                        sale_ratio, recovery_cost);
        const auto result = optimal_reputation(inst, epsilon_margin);
        SweepRow row;
        row.total_ransom = total;
        row.reputation = result.reputation;
        row.case_index = result.case_index;
        row.fallback = result.case_index == 0;
        row.profit = result.expected_profit;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ProfitSweepRow> expected_profit_sweep(double data_value, int n,
                                                  const DecayProfile& decay, double sale_ratio,
                                                  double recovery_cost,
                                                  const std::vector<double>& ransom_grid,
                                                  double gamma) {
    std::vector<ProfitSweepRow> rows;
    const double first = (1.0 - gamma) * data_value;
    for (double total : ransom_grid) {
        ProfitSweepRow row;
        row.total_ransom = total;
        if (n >= 2 && gamma > 0.0 && total > first) {
            const auto inst = make_overcharge_instance(data_value, n, total, gamma, decay,
                                                       sale_ratio, recovery_cost);
            const auto b = overcharge_bound(inst, gamma);
            row.profit = b.optimal_profit;
            row.bound = b.bound;
            row.bound_applies = b.precondition_ok;
        } else {
            const auto inst =
                make_instance(data_value, n, total, 0.5, decay, sale_ratio, recovery_cost);
            row.profit = optimal_reputation(inst).expected_profit;
            row.bound = first + inst.sale(1) - recovery_cost;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ransomgame
