#include "ransomgame/experiments.hpp"

#include <cmath>
#include <sstream>

#include "ransomgame/report.hpp"

namespace ransomgame {

namespace embedded {
extern const std::vector<std::pair<std::string, std::string>> kPresets;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, text] : embedded::kPresets) out.push_back(name);
        return out;
    }();
    return names;
}

const json& load_preset(std::string_view name) {
    static const std::vector<std::pair<std::string, json>> parsed = [] {
        std::vector<std::pair<std::string, json>> out;
        for (const auto& [n, text] : embedded::kPresets) out.emplace_back(n, json::parse(text));
        return out;
    }();
    for (const auto& [n, j] : parsed)
        if (n == name) return j;
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError(std::vector<Violation>{{"preset", "unknown preset '" + std::string(name) + "' (known: " + known + ")"}});
}

SimulateSpec simulate_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError(std::vector<Violation>{{"$", "must be an object"}});
    SimulateSpec spec;
    if (j.contains("scenario")) {
        spec.scenario = scenario_from_json(j["scenario"]);
        spec.modes = j.contains("modes") ? modes_from_json(j["modes"])
                                         : std::vector<ReputationMode>{spec.scenario.mode};
    } else {
        json body = j;
        json modes;
        if (body.contains("modes")) {
            modes = body["modes"];
            body.erase("modes");
        }
        for (const char* key : {"name", "command", "description", "assumptions"}) body.erase(key);
        spec.scenario = scenario_from_json(body);
        spec.modes = modes.is_null() ? std::vector<ReputationMode>{spec.scenario.mode} : modes_from_json(modes);
    }
    return spec;
}

SweepSpec sweep_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError(std::vector<Violation>{{"$", "must be an object"}});
    std::vector<Violation> v;
    SweepSpec s;
    auto num = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) v.push_back({key, "must be a number"});
        else out = j[key].get<double>();
    };
    if (j.contains("kind")) {
        const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
        if (kind == "reputation") s.kind = SweepKind::kReputation;
        else if (kind == "profit") s.kind = SweepKind::kProfit;
        else v.push_back({"kind", "must be reputation or profit"});
    }
    num("data_value", s.data_value);
    num("sale_ratio", s.sale_ratio);
    num("recovery_cost", s.recovery_cost);
    num("first_round_fraction", s.first_round_fraction);
    num("gamma", s.gamma);
    if (j.contains("epsilon_margin") && !j["epsilon_margin"].is_null()) {
        double e = 0.0;
        num("epsilon_margin", e);
        s.epsilon_margin = e;
        if (e < 0.0) v.push_back({"epsilon_margin", "must be non-negative"});
    }
    if (j.contains("rounds")) {
        if (!j["rounds"].is_number_integer()) v.push_back({"rounds", "must be an integer"});
        else s.rounds = j["rounds"].get<int>();
    }
    if (s.rounds < 1 || s.rounds > 24) v.push_back({"rounds", "must lie in 1..24"});
    if (j.contains("decay")) {
        const auto k = j["decay"].is_string() ? parse_decay_kind(j["decay"].get<std::string>()) : std::nullopt;
        if (!k) {
            v.push_back({"decay", "must be one of quadratic, linear, circular, custom"});
        } else {
            s.decay.kind = *k;
            if (*k == DecayKind::kCustom) {
                if (!j.contains("decay_table") || !j["decay_table"].is_array())
                    v.push_back({"decay_table", "is required for custom decay"});
                else
                    s.decay.table = j["decay_table"].get<std::vector<double>>();
            }
        }
    }
    if (j.contains("values")) {
        if (!j["values"].is_array()) v.push_back({"values", "must be an array of numbers"});
        else
            for (const auto& x : j["values"]) {
                if (!x.is_number()) {
                    v.push_back({"values", "must be an array of numbers"});
                    break;
                }
                s.grid.push_back(x.get<double>());
            }
    } else if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object() || !g.contains("start") || !g.contains("stop") || !g.contains("step") ||
            !g["start"].is_number() || !g["stop"].is_number() || !g["step"].is_number()) {
            v.push_back({"grid", "must have numeric start, stop and step"});
        } else {
            const double start = g["start"].get<double>();
            const double stop = g["stop"].get<double>();
            const double step = g["step"].get<double>();
            if (!(step > 0.0) || stop < start || (stop - start) / step > 100000) {
                v.push_back({"grid.step", "must be positive with stop >= start and at most 100000 points"});
            } else {
                const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
                for (long i = 0; i <= count; ++i) s.grid.push_back(start + static_cast<double>(i) * step);
            }
        }
    } else {
        v.push_back({"grid", "is required (or values)"});
    }
    if (!(s.data_value > 0.0) || !std::isfinite(s.data_value)) v.push_back({"data_value", "must be positive"});
    if (!(s.sale_ratio >= 0.0 && s.sale_ratio <= 1.0)) v.push_back({"sale_ratio", "must lie in [0,1]"});
    if (!(s.recovery_cost >= 0.0)) v.push_back({"recovery_cost", "must be non-negative"});
    if (!(s.first_round_fraction > 0.0 && s.first_round_fraction <= 1.0))
        v.push_back({"first_round_fraction", "must lie in (0,1]"});
    if (!(s.gamma > 0.0 && s.gamma < 1.0)) v.push_back({"gamma", "must lie in (0,1)"});
    for (size_t i = 0; i < s.grid.size(); ++i)
        if (!(s.grid[i] > 0.0) || !std::isfinite(s.grid[i]))
            v.push_back({"grid[" + std::to_string(i) + "]", "ransom must be positive"});
    if (!v.empty()) throw ValidationError(v);
    return s;
}

std::string run_sweep_csv(const SweepSpec& s) {
    std::ostringstream os;
    if (s.kind == SweepKind::kReputation) {
        write_reputation_sweep_csv(os,
                                   reputation_sweep(s.data_value, s.rounds, s.decay, s.sale_ratio,
                                                    s.recovery_cost, s.grid, s.first_round_fraction,
                                                    s.epsilon_margin),
                                   s.rounds);
    } else {
        write_profit_sweep_csv(os, expected_profit_sweep(s.data_value, s.rounds, s.decay, s.sale_ratio,
                                                         s.recovery_cost, s.grid, s.gamma));
    }
    return os.str();
}

json run_sweep_json(const SweepSpec& s) {
    json rows = json::array();
    if (s.kind == SweepKind::kReputation) {
        for (const auto& r : reputation_sweep(s.data_value, s.rounds, s.decay, s.sale_ratio, s.recovery_cost,
                                              s.grid, s.first_round_fraction, s.epsilon_margin)) {
            json row;
            row["total_ransom"] = r.total_ransom;
            row["reputation"] = to_json(r.reputation);
            row["case"] = r.case_index;
            row["fallback"] = r.fallback;
            row["profit"] = r.profit;
            rows.push_back(std::move(row));
        }
    } else {
        for (const auto& r : expected_profit_sweep(s.data_value, s.rounds, s.decay, s.sale_ratio,
                                                   s.recovery_cost, s.grid, s.gamma)) {
            json row;
            row["total_ransom"] = r.total_ransom;
            row["profit"] = r.profit;
            row["bound"] = r.bound;
            row["bound_applies"] = r.bound_applies;
            rows.push_back(std::move(row));
        }
    }
    json out;
    out["kind"] = s.kind == SweepKind::kReputation ? "reputation" : "profit";
    out["rows"] = std::move(rows);
    return out;
}

}  // namespace ransomgame
