#include "ransomgame/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <spdlog/spdlog.h>
#include "ransomgame/sampling.hpp"
#include "ransomgame/strategy.hpp"

namespace ransomgame {

namespace {

// L_{n+1} = A_{n+1} = 0: nothing is left to leak or sell after the last round.
double loss_ext(const GameInstance& inst, int round) {
    return round >= 1 && round <= inst.n ? inst.loss(round) : 0.0;
}
double sale_ext(const GameInstance& inst, int round) {
    return round >= 1 && round <= inst.n ? inst.sale(round) : 0.0;
}

std::string row_label(int j) { return "pay round " + std::to_string(j); }

}  // namespace

double default_epsilon_margin(const GameInstance& inst) {
    return 1e-6 * std::max(inst.data_value, inst.total_ransom());
}

double lp_objective_offset(const GameInstance& inst) { return inst.ransom(1) + inst.sale(1); }

lp::LinearProgram build_lp(const GameInstance& inst, int case_i, double epsilon_margin) {
    require_valid(inst);
    if (case_i < 1 || case_i > inst.n)
        throw std::invalid_argument("build_lp: case " + std::to_string(case_i) + " outside 1.." +
                                    std::to_string(inst.n));
    if (!(epsilon_margin >= 0.0)) throw std::invalid_argument("build_lp: negative margin");
    const int i = case_i;
    const size_t vars = static_cast<size_t>(i) + 1;
    const double l_next = loss_ext(inst, i + 1);
    const double a_next = sale_ext(inst, i + 1);

    lp::LinearProgram program;
    program.chain = true;
    program.objective.assign(vars, 0.0);
    program.objective[0] = -inst.recovery_cost;
    for (int l = 2; l <= i; ++l)
        program.objective[l - 1] = inst.ransom(l) - inst.sale(l - 1) + inst.sale(l);
    program.objective[i] += a_next - inst.sale(i);

    // Row j is x_j (b_j - L_j) < 0 written out in x; row 1 also carries the
    // first ransom as a constant.
    for (int j = i; j >= 1; --j) {
        lp::Constraint row;
        row.label = row_label(j);
        row.coeffs.assign(vars, 0.0);
        row.coeffs[j - 1] = j == 1 ? -inst.data_value : inst.ransom(j);
        for (int l = j + 1; l <= i; ++l)
            row.coeffs[l - 1] = inst.ransom(l) + inst.loss(l) - inst.loss(l - 1);
        row.coeffs[i] += l_next - inst.loss(i);
        const double constant = j == 1 ? inst.ransom(1) : 0.0;
        row.margin = epsilon_margin;
        row.bound = -constant - epsilon_margin;
        program.constraints.push_back(std::move(row));
    }
    return program;
}

Reputation recover_reputation(const std::vector<double>& x, int n) {
    if (x.empty()) throw std::invalid_argument("recover_reputation: empty point");
    if (x.size() > static_cast<size_t>(n) + 1)
        throw std::invalid_argument("recover_reputation: point longer than n + 1");
    constexpr double kTol = 1e-12;
    if (x[0] < -kTol || x[0] > 1.0 + kTol)
        throw std::invalid_argument("recover_reputation: x_1 outside [0,1]");
    for (size_t j = 1; j < x.size(); ++j) {
        if (x[j] < -kTol || x[j] > x[j - 1] + kTol)
            throw std::invalid_argument("recover_reputation: chain violated at x_" +
                                        std::to_string(j + 1));
    }
    Reputation rep;
    rep.beta_r = std::clamp(x[0], 0.0, 1.0);
    rep.betas.assign(static_cast<size_t>(n), 1.0);
    for (size_t j = 1; j < x.size(); ++j) {
        if (x[j - 1] <= 0.0) break;  // unreachable from here on
        rep.betas[j - 1] = std::clamp(1.0 - x[j] / x[j - 1], 0.0, 1.0);
    }
    return rep;
}

std::vector<double> reputation_to_x(const Reputation& rep) {
    std::vector<double> x(rep.betas.size() + 1);
    x[0] = rep.beta_r;
    for (size_t j = 0; j < rep.betas.size(); ++j) x[j + 1] = x[j] * (1.0 - rep.betas[j]);
    return x;
}

double profit_at(const GameInstance& inst, const Reputation& rep) {
    return attacker_expected_profit(inst, rep, victim_policy(inst, rep)).expected_profit;
}

OptimalReputationResult optimal_reputation(const GameInstance& inst,
                                           std::optional<double> epsilon_margin) {
    require_valid(inst);
    OptimalReputationResult out;
    out.epsilon_margin = epsilon_margin.value_or(default_epsilon_margin(inst));
    out.reputation = Reputation::worst(inst.n);
    out.expected_profit = inst.sale(1);
    out.case_index = 0;
    out.all_infeasible = true;

    for (int i = 1; i <= inst.n; ++i) {
        const auto program = build_lp(inst, i, out.epsilon_margin);
        const auto solution = lp::solve(program);
        CaseResult c;
        c.case_index = i;
        c.status = solution.status;
        c.iterations = solution.iterations;
        if (solution.status == lp::Status::kOptimal) {
            out.all_infeasible = false;
            c.lp_value = solution.value;
            c.max_violation = lp::max_violation(program, solution.x);
            c.reputation = recover_reputation(solution.x, inst.n);
            const auto policy = victim_policy(inst, *c.reputation);
            c.induced_abort_round = policy.abort_round;
            c.induces_case = i < inst.n ? policy.abort_round == i + 1 : policy.pays_all();
            c.tree_profit = attacker_expected_profit(inst, *c.reputation, policy).expected_profit;
            if (!c.induces_case) {
                spdlog::warn("case {}: recovered reputation induces abort round {} (margin {})", i,
                          policy.abort_round ? std::to_string(*policy.abort_round) : "PAY_ALL",
                          out.epsilon_margin);
            }
            if (c.tree_profit > out.expected_profit) {
                out.expected_profit = c.tree_profit;
                out.reputation = *c.reputation;
                out.case_index = i;
            }
        }
        out.cases.push_back(std::move(c));
    }
    return out;
}

namespace {

// Allocation-free victim response + attacker profit, using the same
// arithmetic as victim_policy and attacker_expected_profit.
class FastEvaluator {
  public:
    explicit FastEvaluator(const GameInstance& inst) : inst_(inst) {}

    double profit(double beta_r, const std::vector<double>& betas) const {
        const int n = inst_.n;
        int threshold = n + 1;
        double next = 0.0;
        for (int i = n; i >= 1; --i) {
            const double b = betas[i - 1];
            double pay;
            if (i == 1) {
                pay = inst_.ransom(1) + (1.0 - beta_r) * inst_.loss(1) +
                      beta_r * (-inst_.data_value + b * inst_.loss(1) + (1.0 - b) * next);
            } else {
                pay = inst_.ransom(i) + b * inst_.loss(i) + (1.0 - b) * next;
            }
            const double refuse = inst_.loss(i);
            if (pay >= refuse) threshold = i;
            next = std::min(pay, refuse);
        }
        if (threshold == 1) return inst_.sale(1);
        double ransom = inst_.ransom(1);
        double sale = (1.0 - beta_r) * inst_.sale(1);
        const double cost = beta_r * inst_.recovery_cost;
        double reach = beta_r;
        for (int i = 1; i < threshold; ++i) {
            sale += reach * betas[i - 1] * inst_.sale(i);
            reach *= 1.0 - betas[i - 1];
            if (i + 1 < threshold) ransom += reach * inst_.ransom(i + 1);
        }
        if (threshold <= n) sale += reach * inst_.sale(threshold);
        return ransom + sale - cost;
    }

  private:
    const GameInstance& inst_;
};

std::vector<double> grid_values(double resolution) {
    std::vector<double> values;
    const auto steps = static_cast<long long>(std::floor(1.0 / resolution + 1e-9));
    for (long long k = 0; k <= steps; ++k) values.push_back(std::min(1.0, k * resolution));
    if (values.back() < 1.0) values.push_back(1.0);
    return values;
}

}  // namespace

GridSearchResult grid_search_reputation(const GameInstance& inst, double resolution,
                                        unsigned seed, long long max_evaluations) {
    require_valid(inst);
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw std::invalid_argument("grid_search_reputation: resolution must lie in (0,1]");
    const auto values = grid_values(resolution);
    const auto k = static_cast<long long>(values.size());
    const int dims = inst.n + 1;
    const FastEvaluator eval(inst);

    GridSearchResult out;
    out.profit = -std::numeric_limits<double>::infinity();
    std::vector<double> betas(static_cast<size_t>(inst.n));

    if (inst.n <= kMaxFullGridRounds) {
        long long total = 1;
        for (int d = 0; d < dims; ++d) {
            total *= k;
            if (total > max_evaluations)
                throw std::invalid_argument("grid_search_reputation: grid exceeds the budget of " +
                                            std::to_string(max_evaluations) + " evaluations");
        }
        std::vector<long long> idx(static_cast<size_t>(dims), 0);
        for (long long e = 0; e < total; ++e) {
            for (int d = 1; d < dims; ++d) betas[d - 1] = values[idx[d]];
            const double p = eval.profit(values[idx[0]], betas);
            if (p > out.profit) {
                out.profit = p;
                out.reputation.beta_r = values[idx[0]];
                out.reputation.betas = betas;
            }
            for (int d = dims - 1; d >= 0; --d) {
                if (++idx[d] < k) break;
                idx[d] = 0;
            }
        }
        out.evaluations = total;
        return out;
    }

    // Coordinate descent over the same grid from the three corner
    // reputations and seeded random grid points.
    out.heuristic = true;
    constexpr int kRandomStarts = 16;
    constexpr int kMaxSweeps = 50;
    const long long worst_case = (3LL + kRandomStarts) * kMaxSweeps * dims * k;
    if (worst_case > max_evaluations)
        throw std::invalid_argument("grid_search_reputation: coordinate descent exceeds the budget");

    std::vector<std::vector<long long>> starts;
    starts.push_back(std::vector<long long>(static_cast<size_t>(dims), k - 1));  // (1,1,...)
    {
        std::vector<long long> perfect(static_cast<size_t>(dims), 0);
        perfect[0] = k - 1;
        starts.push_back(perfect);
        std::vector<long long> worst(static_cast<size_t>(dims), k - 1);
        worst[0] = 0;
        starts.push_back(worst);
    }
    Rng rng(seed);
    for (int s = 0; s < kRandomStarts; ++s) {
        std::vector<long long> start(static_cast<size_t>(dims));
        for (auto& v : start) v = static_cast<long long>(rng.below(static_cast<std::uint64_t>(k)));
        starts.push_back(start);
    }

    for (auto idx : starts) {
        auto evaluate = [&](const std::vector<long long>& at) {
            for (int d = 1; d < dims; ++d) betas[d - 1] = values[at[d]];
            ++out.evaluations;
            return eval.profit(values[at[0]], betas);
        };
        double current = evaluate(idx);
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            bool improved = false;
            for (int d = 0; d < dims; ++d) {
                const long long keep = idx[d];
                long long best_v = keep;
                for (long long v = 0; v < k; ++v) {
                    idx[d] = v;
                    const double p = evaluate(idx);
                    if (p > current) {
                        current = p;
                        best_v = v;
                        improved = true;
                    }
                }
                idx[d] = best_v;
            }
            if (!improved) break;
        }
        if (current > out.profit) {
            out.profit = current;
            out.reputation.beta_r = values[idx[0]];
            out.reputation.betas.resize(static_cast<size_t>(inst.n));
            for (int d = 1; d < dims; ++d) out.reputation.betas[d - 1] = values[idx[d]];
        }
    }
    return out;
}

GameInstance make_overcharge_instance(double data_value, int n, double total_ransom, double gamma,
                                      const DecayProfile& decay, double sale_ratio,
                                      double recovery_cost) {
    if (n < 2) throw std::invalid_argument("make_overcharge_instance: needs at least 2 rounds");
    const double first = (1.0 - gamma) * data_value;
    if (!(total_ransom > first))
        throw std::invalid_argument("make_overcharge_instance: total must exceed the first ransom");
    GameInstance inst;
    inst.n = n;
    inst.data_value = data_value;
    inst.recovery_cost = recovery_cost;
    inst.ransoms.assign(static_cast<size_t>(n), (total_ransom - first) / (n - 1));
    inst.ransoms[0] = first;
    auto profiles = build_profiles(data_value, n, decay, sale_ratio);
    inst.losses = std::move(profiles.losses);
    inst.sale_profits = std::move(profiles.sale_profits);
    return inst;
}

OverchargeBound overcharge_bound(const GameInstance& inst, double gamma) {
    require_valid(inst);
    OverchargeBound out;
    const double v = inst.data_value;
    out.bound = (1.0 - gamma) * v + inst.sale(1) - inst.recovery_cost;
    std::string problems;
    if (!(gamma > 0.0)) problems += "gamma must be positive; ";
    if (std::abs(inst.ransom(1) - (1.0 - gamma) * v) > 1e-9 * std::max(1.0, v))
        problems += "first ransom differs from (1 - gamma) V; ";
    if (!((1.0 - gamma) * v + sale_ext(inst, 2) > inst.sale(1)))
        problems += "(1 - gamma) V + A_2 must exceed A_1; ";
    out.precondition_ok = problems.empty();
    if (!out.precondition_ok) {
        problems.resize(problems.size() - 2);
        out.precondition_message = problems;
    }
    out.optimal_profit = optimal_reputation(inst).expected_profit;
    // Strictly greater, beyond floating-point noise in the evaluation.
    out.holds = out.optimal_profit - out.bound > 1e-9 * std::max(1.0, std::abs(out.bound));
    return out;
}

SingleRoundOptimum single_round_optimum(double ransom, double data_value, double loss1,
                                        double sale1, double recovery_cost) {
    GameInstance inst;
    inst.n = 1;
    inst.ransoms = {ransom};
    inst.data_value = data_value;
    inst.recovery_cost = recovery_cost;
    inst.losses = {loss1};
    inst.sale_profits = {sale1};
    const auto result = optimal_reputation(inst);
    SingleRoundOptimum out;
    out.beta_r = result.reputation.beta_r;
    out.beta_1 = result.reputation.betas[0];
    out.expected_profit = result.expected_profit;
    out.victim_pays = result.case_index == 1;
    return out;
}

namespace {

using RowCoeffs = std::map<int, double>;  // 0 = constant, j = x_j

std::vector<std::pair<std::string, RowCoeffs>> printed_system(const GameInstance& inst, int i) {
    const int n = inst.n;
    auto R = [&](int k) { return inst.ransom(k); };
    auto L = [&](int k) { return k == 0 ? 0.0 : loss_ext(inst, k); };  // L_0 is not defined
    std::vector<std::pair<std::string, RowCoeffs>> rows;

    if (i == 1) {
        rows.push_back({row_label(1), {{0, R(1)}, {1, -inst.data_value}, {2, L(2) - L(1)}}});
        return rows;
    }
    if (i == n) {
        rows.push_back({row_label(n), {{n, R(n)}, {n + 1, -L(n)}}});
        for (int k = 1; k < n - 1; ++k) {
            const int j = n - k;
            RowCoeffs c{{j, R(j)}, {n + 1, -L(n)}};
            for (int l = 1; l <= k; ++l) c[j + l] += R(j + l) + L(j + l) - L(j + l - 1);
            rows.push_back({row_label(j), c});
        }
        RowCoeffs first{{0, R(1)}, {1, -inst.data_value}, {n + 1, L(n)}};
        for (int l = 2; l <= n; ++l) first[l] += -(R(l) + L(l) - L(l - 1));
        rows.push_back({row_label(1), first});
        // Prose variant of the last-round row, coupling x_n with x_{n-1}.
        rows.push_back({row_label(n) + " (prose variant)", {{n, R(n)}, {n - 1, -L(n)}}});
        return rows;
    }
    rows.push_back({row_label(i), {{i, R(i)}, {i + 1, L(i + 1) - L(i)}}});
    if (i - 1 >= 2) {
        rows.push_back({row_label(i - 1),
                        {{i - 1, R(i - 1)},
                         {i, R(i) - L(i - 1) + L(i)},
                         {i + 1, L(i + 1) - L(i)}}});
    }
    for (int k = 2; k < i - 1; ++k) {
        const int j = i - k;
        RowCoeffs c{{j, R(j)}, {i + 1, -(L(i + 1) - L(i))}};
        for (int l = 1; l <= k; ++l) c[j + l] += R(j + l) + L(j + l) - L(j + l - 1);
        rows.push_back({row_label(j), c});
    }
    RowCoeffs first{{0, R(1)}, {1, -inst.data_value}, {i + 1, L(i + 1) - L(i)}};
    for (int l = 1; l <= i - 1; ++l) first[l] += -(R(i - l) + L(i - l) - L(i - l - 1));
    rows.push_back({row_label(1), first});
    return rows;
}

}  // namespace

std::vector<LpDivergenceRow> lp_divergence(const GameInstance& inst, int case_i) {
    const auto program = build_lp(inst, case_i, 0.0);
    std::map<std::string, RowCoeffs> generated;
    for (const auto& row : program.constraints) {
        RowCoeffs c;
        if (row.bound != 0.0) c[0] = -row.bound;
        for (size_t j = 0; j < row.coeffs.size(); ++j)
            if (row.coeffs[j] != 0.0) c[static_cast<int>(j) + 1] = row.coeffs[j];
        generated[row.label] = c;
    }
    std::vector<LpDivergenceRow> out;
    for (const auto& [label, printed] : printed_system(inst, case_i)) {
        const std::string base = label.substr(0, label.find(" ("));
        const RowCoeffs& gen = generated[base];
        std::map<int, std::pair<double, double>> merged;
        for (const auto& [var, v] : printed) merged[var].first = v;
        for (const auto& [var, v] : gen) merged[var].second = v;
        for (const auto& [var, pg] : merged) {
            const double scale = 1.0 + std::abs(pg.first) + std::abs(pg.second);
            if (std::abs(pg.first - pg.second) > 1e-9 * scale)
                out.push_back({case_i, label, var, pg.first, pg.second});
        }
    }
    return out;
}

}  // namespace ransomgame
