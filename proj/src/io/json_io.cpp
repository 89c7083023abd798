#include "ransomgame/json_io.hpp"

#include <cmath>
#include <sstream>

namespace ransomgame {

namespace {

std::string describe(const std::vector<Violation>& v) {
    std::string out;
    for (const auto& e : v) {
        if (!out.empty()) out += "; ";
        out += e.field + ": " + e.message;
    }
    return out;
}

// Collects typed field reads and reports every failure at once.
class Reader {
  public:
    Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
        if (!j_.is_object()) fail("", "must be an object");
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key) && !j_[key].is_null(); }

    std::optional<double> number(const char* key, bool required) {
        if (!has(key)) {
            if (required) fail(key, "is required");
            return std::nullopt;
        }
        const json& v = j_[key];
        if (!v.is_number()) {
            fail(key, "must be a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }

    std::optional<long long> integer(const char* key, bool required) {
        if (!has(key)) {
            if (required) fail(key, "is required");
            return std::nullopt;
        }
        const json& v = j_[key];
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            fail(key, "must be an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    std::optional<std::string> string(const char* key, bool required) {
        if (!has(key)) {
            if (required) fail(key, "is required");
            return std::nullopt;
        }
        if (!j_[key].is_string()) {
            fail(key, "must be a string");
            return std::nullopt;
        }
        return j_[key].get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const char* key, bool required) {
        if (!has(key)) {
            if (required) fail(key, "is required");
            return std::nullopt;
        }
        const json& v = j_[key];
        if (!v.is_array()) {
            fail(key, "must be an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        bool ok = true;
        for (size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(std::string(key) + "[" + std::to_string(i) + "]", "must be a number");
                ok = false;
                continue;
            }
            out.push_back(v[i].get<double>());
        }
        if (!ok) return std::nullopt;
        return out;
    }

    void fail(const std::string& key, std::string message) {
        std::string path = prefix_;
        if (!key.empty()) path += (path.empty() ? "" : ".") + key;
        violations_.push_back({path.empty() ? "$" : path, std::move(message)});
    }

    void merge(const std::vector<Violation>& v) {
        for (const auto& e : v) violations_.push_back({prefix_.empty() ? e.field : prefix_ + "." + e.field, e.message});
    }

    bool ok() const { return violations_.empty(); }

    void check() const {
        if (!violations_.empty()) throw ValidationError(violations_);
    }

  private:
    const json& j_;
    std::string prefix_;
    std::vector<Violation> violations_;
};

json optional_round(const std::optional<int>& round) {
    return round ? json(*round) : json(nullptr);
}

json numbers_json(const std::vector<double>& v) {
    json out = json::array();
    for (double d : v) out.push_back(std::isfinite(d) ? json(d) : json(nullptr));
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::invalid_argument("validation failed: " + describe(violations)),
      violations_(std::move(violations)) {}

json parse_json(const std::string& text, std::string_view what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::vector<Violation>{{std::string(what), std::string("malformed JSON: ") + e.what()}});
    }
}

GameInstance instance_from_json(const json& j) {
    Reader r(j, "");
    r.check();
    GameInstance inst;
    const auto n = r.integer("n", true);
    const auto value = r.number("data_value", true);
    const auto cost = r.number("recovery_cost", false);
    const auto ransoms = r.numbers("ransoms", false);
    const auto total = r.number("total_ransom", false);
    const auto fraction = r.number("first_round_fraction", false);
    const auto losses = r.numbers("losses", false);
    const auto sales = r.numbers("sale_profits", false);
    const auto decay_name = r.string("decay", false);
    const auto table = r.numbers("decay_table", false);
    const auto sale_ratio = r.number("sale_ratio", false);
    r.check();

    if (*n < 1 || *n > 64) r.fail("n", "must lie in 1..64");
    if (!ransoms && !total) r.fail("ransoms", "is required (or total_ransom)");
    if (ransoms && total) r.fail("total_ransom", "conflicts with ransoms");
    std::optional<DecayKind> kind;
    if (decay_name) {
        kind = parse_decay_kind(*decay_name);
        if (!kind) r.fail("decay", "must be one of quadratic, linear, circular, custom");
    }
    if (kind == DecayKind::kCustom && !table) r.fail("decay_table", "is required for custom decay");
    if (!losses && !kind) r.fail("losses", "is required when decay is absent");
    if (sale_ratio && !(*sale_ratio >= 0.0 && *sale_ratio <= 1.0)) r.fail("sale_ratio", "must lie in [0,1]");
    if (fraction && !(*fraction > 0.0 && *fraction <= 1.0))
        r.fail("first_round_fraction", "must lie in (0,1]");
    r.check();

    inst.n = static_cast<int>(*n);
    inst.data_value = *value;
    inst.recovery_cost = cost.value_or(0.0);
    inst.ransoms = ransoms ? *ransoms : split_ransom(*total, inst.n, fraction.value_or(0.5));
    const double ratio = sale_ratio.value_or(0.7);
    if (losses) {
        inst.losses = *losses;
        if (sales) {
            inst.sale_profits = *sales;
        } else {
            for (double l : inst.losses) inst.sale_profits.push_back(ratio * l);
        }
    } else {
        DecayProfile decay{*kind, table.value_or(std::vector<double>{})};
        try {
            Profiles p = build_profiles(inst.data_value, inst.n, decay, ratio);
            inst.losses = std::move(p.losses);
            inst.sale_profits = sales ? *sales : std::move(p.sale_profits);
        } catch (const std::invalid_argument& e) {
            r.fail("decay_table", e.what());
            r.check();
        }
    }
    r.merge(validate_instance(inst));
    r.check();
    return inst;
}

json to_json(const GameInstance& inst) {
    json j;
    j["n"] = inst.n;
    j["ransoms"] = inst.ransoms;
    j["data_value"] = inst.data_value;
    j["recovery_cost"] = inst.recovery_cost;
    j["losses"] = inst.losses;
    j["sale_profits"] = inst.sale_profits;
    return j;
}

Reputation reputation_from_json(const json& j, int n) {
    Reputation rep;
    if (j.is_array()) {
        std::vector<Violation> v;
        std::vector<double> values;
        for (size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                v.push_back({"reputation[" + std::to_string(i) + "]", "must be a number"});
                continue;
            }
            values.push_back(j[i].get<double>());
        }
        if (!v.empty()) throw ValidationError(v);
        if (values.size() != static_cast<size_t>(n) + 1)
            throw ValidationError(std::vector<Violation>{{"reputation", "expected " + std::to_string(n + 1) + " values"}});
        rep.beta_r = values[0];
        rep.betas.assign(values.begin() + 1, values.end());
    } else {
        Reader r(j, "reputation");
        r.check();
        const auto beta_r = r.number("beta_r", true);
        const auto betas = r.numbers("betas", true);
        r.check();
        rep.beta_r = *beta_r;
        rep.betas = *betas;
    }
    auto v = validate_reputation(rep, n);
    for (auto& e : v) e.field = "reputation." + e.field;
    if (!v.empty()) throw ValidationError(v);
    return rep;
}

json to_json(const Reputation& rep) {
    json j;
    j["beta_r"] = rep.beta_r;
    j["betas"] = rep.betas;
    return j;
}

Reputation parse_reputation_list(std::string_view text, int n) {
    json arr = json::array();
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            const double d = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            arr.push_back(d);
        } catch (const std::logic_error&) {
            throw ValidationError(std::vector<Violation>{{"reputation", "'" + item + "' is not a number"}});
        }
    }
    return reputation_from_json(arr, n);
}

json to_json(const VictimPolicy& policy) {
    json j;
    j["abort_round"] = optional_round(policy.abort_round);
    j["pays_all"] = policy.pays_all();
    j["rounds_paid"] = policy.rounds_paid();
    j["expected_loss"] = policy.expected_loss;
    j["continuation_values"] = numbers_json(policy.continuation_values);
    return j;
}

json to_json(const ProfitBreakdown& b) {
    json j;
    j["expected_profit"] = b.expected_profit;
    j["ransom_component"] = b.ransom_component;
    j["sale_component"] = b.sale_component;
    j["recovery_cost_component"] = b.recovery_cost_component;
    j["end_with_sale"] = b.end_with_sale;
    j["end_without_sale"] = b.end_without_sale;
    j["per_round_profit"] = b.per_round_profit;
    return j;
}

json to_json(const CaseResult& c) {
    json j;
    j["case"] = c.case_index;
    j["status"] = std::string(lp::to_string(c.status));
    if (c.status == lp::Status::kOptimal) {
        j["lp_value"] = c.lp_value;
        j["reputation"] = c.reputation ? to_json(*c.reputation) : json(nullptr);
        j["tree_profit"] = c.tree_profit;
        j["induced_abort_round"] = optional_round(c.induced_abort_round);
        j["induces_case"] = c.induces_case;
        j["max_violation"] = c.max_violation;
    }
    j["iterations"] = c.iterations;
    return j;
}

json to_json(const OptimalReputationResult& r) {
    json j;
    j["reputation"] = to_json(r.reputation);
    j["case"] = r.case_index;
    j["fallback"] = r.case_index == 0;
    j["expected_profit"] = r.expected_profit;
    j["all_infeasible"] = r.all_infeasible;
    j["epsilon_margin"] = r.epsilon_margin;
    json cases = json::array();
    for (const auto& c : r.cases) cases.push_back(to_json(c));
    j["cases"] = std::move(cases);
    return j;
}

std::vector<ReputationMode> modes_from_json(const json& j) {
    std::vector<Violation> v;
    std::vector<ReputationMode> out;
    if (!j.is_array()) throw ValidationError(std::vector<Violation>{{"modes", "must be an array of mode names"}});
    for (size_t i = 0; i < j.size(); ++i) {
        const auto m = j[i].is_string() ? parse_reputation_mode(j[i].get<std::string>()) : std::nullopt;
        if (!m) {
            v.push_back({"modes[" + std::to_string(i) + "]",
                         "must be one of worst, perfect_single, perfect_multi, optimal_multi"});
            continue;
        }
        out.push_back(*m);
    }
    if (!v.empty()) throw ValidationError(v);
    if (out.empty()) throw ValidationError(std::vector<Violation>{{"modes", "must not be empty"}});
    return out;
}

ScenarioConfig scenario_from_json(const json& j, ScenarioConfig cfg) {
    Reader r(j, "");
    r.check();
    if (auto v = r.integer("rounds", false)) cfg.rounds = static_cast<int>(*v);
    if (auto v = r.number("total_ransom", false)) cfg.total_ransom = *v;
    if (auto v = r.number("first_round_fraction", false)) cfg.first_round_fraction = *v;
    if (auto v = r.integer("victim_count", false)) cfg.victim_count = static_cast<int>(*v);
    if (auto v = r.number("value_lo", false)) cfg.value_lo = *v;
    if (auto v = r.number("value_hi", false)) cfg.value_hi = *v;
    if (auto v = r.number("sale_ratio", false)) cfg.sale_ratio = *v;
    if (auto v = r.number("recovery_cost", false)) cfg.recovery_cost = *v;
    if (auto v = r.integer("seed", false)) {
        if (*v < 0) r.fail("seed", "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = r.integer("detection_lag", false)) cfg.detection_lag = static_cast<int>(*v);
    if (auto v = r.number("epsilon_margin", false)) cfg.epsilon_margin = *v;
    if (auto v = r.string("mode", false)) {
        if (auto m = parse_reputation_mode(*v)) cfg.mode = *m;
        else r.fail("mode", "must be one of worst, perfect_single, perfect_multi, optimal_multi");
    }
    if (r.has("decay_mix")) {
        const json& mix = j["decay_mix"];
        if (!mix.is_array()) {
            r.fail("decay_mix", "must be an array of decay names");
        } else {
            cfg.decay_mix.clear();
            for (size_t i = 0; i < mix.size(); ++i) {
                const auto k = mix[i].is_string() ? parse_decay_kind(mix[i].get<std::string>()) : std::nullopt;
                if (!k || *k == DecayKind::kCustom)
                    r.fail("decay_mix[" + std::to_string(i) + "]", "must be quadratic, linear or circular");
                else
                    cfg.decay_mix.push_back(*k);
            }
        }
    }
    r.check();
    r.merge(validate_config(cfg));
    r.check();
    return cfg;
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    j["rounds"] = cfg.rounds;
    j["total_ransom"] = cfg.total_ransom;
    j["first_round_fraction"] = cfg.first_round_fraction;
    j["victim_count"] = cfg.victim_count;
    j["value_lo"] = cfg.value_lo;
    j["value_hi"] = cfg.value_hi;
    json mix = json::array();
    for (auto k : cfg.decay_mix) mix.push_back(std::string(to_string(k)));
    j["decay_mix"] = std::move(mix);
    j["sale_ratio"] = cfg.sale_ratio;
    j["recovery_cost"] = cfg.recovery_cost;
    j["mode"] = std::string(to_string(cfg.mode));
    j["seed"] = cfg.seed;
    j["detection_lag"] = cfg.detection_lag;
    j["epsilon_margin"] = cfg.epsilon_margin ? json(*cfg.epsilon_margin) : json(nullptr);
    return j;
}

json summary_json(const ScenarioResult& result) {
    json j;
    j["mode"] = std::string(to_string(result.mode));
    j["rounds"] = result.rounds;
    j["victims"] = result.victims.size();
    j["total_profit"] = result.total_profit;
    j["mean_profit"] = result.mean_profit;
    j["cumulative_profit"] = result.cumulative_profit;
    int paying = 0;
    for (const auto& v : result.victims) paying += v.rounds_paid > 0 ? 1 : 0;
    j["paying_victims"] = paying;
    return j;
}

}  // namespace ransomgame
