#include "ransomgame/report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ransomgame {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    // Avoid "-0.000000000" for tiny negative noise.
    std::string s = fmt::format("{:.9f}", value);
    if (s == "-0.000000000") s = "0.000000000";
    return s;
}

namespace {

std::string abort_label(const std::optional<int>& abort_round) {
    return abort_round ? std::to_string(*abort_round) : "PAY_ALL";
}

}  // namespace

void write_victims_csv(std::ostream& os, const std::vector<ScenarioResult>& results) {
    os << "victim_id,data_value,decay,mode,abort_round,profit,loss\n";
    for (const auto& r : results) {
        for (const auto& v : r.victims) {
            os << v.victim_id << ',' << format_number(v.data_value) << ',' << to_string(v.decay)
               << ',' << to_string(v.mode) << ',' << abort_label(v.abort_round) << ','
               << format_number(v.profit) << ',' << format_number(v.loss) << '\n';
        }
    }
}

void write_rounds_csv(std::ostream& os, const std::vector<ScenarioResult>& results) {
    os << "mode,round,cumulative_profit\n";
    for (const auto& r : results) {
        for (size_t i = 0; i < r.cumulative_profit.size(); ++i)
            os << to_string(r.mode) << ',' << i + 1 << ',' << format_number(r.cumulative_profit[i])
               << '\n';
    }
}

void write_reputation_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, int n) {
    os << "x,series,value\n";
    for (const auto& row : rows) {
        const std::string x = format_number(row.total_ransom);
        os << x << ",return_key," << format_number(row.reputation.beta_r) << '\n';
        for (int i = 1; i <= n; ++i)
            os << x << ",keep_confidential_" << i << ','
               << format_number(1.0 - row.reputation.beta(i)) << '\n';
        os << x << ",profit," << format_number(row.profit) << '\n';
        os << x << ",case," << row.case_index << '\n';
    }
}

void write_profit_sweep_csv(std::ostream& os, const std::vector<ProfitSweepRow>& rows) {
    os << "x,series,value\n";
    for (const auto& row : rows) {
        const std::string x = format_number(row.total_ransom);
        os << x << ",expected_profit," << format_number(row.profit) << '\n';
        os << x << ",bound," << format_number(row.bound) << '\n';
        os << x << ",bound_applies," << (row.bound_applies ? 1 : 0) << '\n';
    }
}

void write_cases_csv(std::ostream& os, const OptimalReputationResult& result, int n) {
    os << "case,status,lp_value,beta_r";
    for (int i = 1; i <= n; ++i) os << ",beta_" << i;
    os << ",tree_profit,induced_abort_round\n";
    for (const auto& c : result.cases) {
        os << c.case_index << ',' << lp::to_string(c.status) << ',';
        if (!c.reputation) {
            os << std::string(static_cast<size_t>(n) + 3, ',') << '\n';
            continue;
        }
        os << format_number(c.lp_value) << ',' << format_number(c.reputation->beta_r);
        for (int i = 1; i <= n; ++i) os << ',' << format_number(c.reputation->beta(i));
        os << ',' << format_number(c.tree_profit) << ',' << abort_label(c.induced_abort_round)
           << '\n';
    }
}

}  // namespace ransomgame
