#include "ransomgame/game_core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ransomgame {

double GameInstance::total_ransom() const {
    return std::accumulate(ransoms.begin(), ransoms.end(), 0.0);
}

Reputation Reputation::perfect(int n) {
    return {1.0, std::vector<double>(static_cast<size_t>(n), 0.0)};
}

Reputation Reputation::worst(int n) {
    return {0.0, std::vector<double>(static_cast<size_t>(n), 1.0)};
}

double DecayProfile::operator()(double x) const {
    switch (kind) {
        case DecayKind::kQuadratic:
            return (1.0 - x) * (1.0 - x);
        case DecayKind::kLinear:
            return 1.0 - x;
        case DecayKind::kCircular:
            // sqrt(1 - x^2) written as sqrt((1-x)(1+x)) so f(1) is exactly 0.
            return std::sqrt((1.0 - x) * (1.0 + x));
        case DecayKind::kCustom:
            break;
    }
    throw std::logic_error("custom decay profiles are tabulated, not evaluated");
}

std::string_view to_string(DecayKind kind) {
    switch (kind) {
        case DecayKind::kQuadratic: return "quadratic";
        case DecayKind::kLinear: return "linear";
        case DecayKind::kCircular: return "circular";
        case DecayKind::kCustom: return "custom";
    }
    return "unknown";
}

std::optional<DecayKind> parse_decay_kind(std::string_view name) {
    if (name == "quadratic") return DecayKind::kQuadratic;
    if (name == "linear") return DecayKind::kLinear;
    if (name == "circular") return DecayKind::kCircular;
    if (name == "custom") return DecayKind::kCustom;
    return std::nullopt;
}

Profiles build_profiles(double data_value, int n, const DecayProfile& decay, double sale_ratio) {
    if (n < 1) throw std::invalid_argument("build_profiles: n must be at least 1");
    if (!(data_value >= 0.0) || !std::isfinite(data_value))
        throw std::invalid_argument("build_profiles: data value must be finite and non-negative");
    if (!(sale_ratio >= 0.0 && sale_ratio <= 1.0))
        throw std::invalid_argument("build_profiles: sale_ratio must lie in [0,1]");

    std::vector<double> fractions(static_cast<size_t>(n));
    if (decay.kind == DecayKind::kCustom) {
        if (decay.table.size() != fractions.size())
            throw std::invalid_argument("build_profiles: custom table must have n entries");
        for (size_t i = 0; i < fractions.size(); ++i) {
            if (!(decay.table[i] >= 0.0 && decay.table[i] <= 1.0))
                throw std::invalid_argument("build_profiles: custom table values must lie in [0,1]");
            if (i > 0 && decay.table[i] > decay.table[i - 1])
                throw std::invalid_argument("build_profiles: custom table is increasing at index " +
                                            std::to_string(i));
        }
        fractions = decay.table;
    } else {
        for (int i = 1; i <= n; ++i) fractions[i - 1] = decay(static_cast<double>(i) / n);
    }

    Profiles out;
    out.losses.reserve(fractions.size());
    out.sale_profits.reserve(fractions.size());
    for (double f : fractions) {
        const double loss = f * data_value;
        out.losses.push_back(loss);
        out.sale_profits.push_back(sale_ratio * loss);
    }
    return out;
}

std::vector<double> split_ransom(double total, int n, double first_round_fraction) {
    if (n < 1) throw std::invalid_argument("split_ransom: n must be at least 1");
    if (!(first_round_fraction > 0.0 && first_round_fraction <= 1.0))
        throw std::invalid_argument("split_ransom: first_round_fraction must lie in (0,1]");
    if (n == 1) return {total};
    std::vector<double> out(static_cast<size_t>(n));
    out[0] = first_round_fraction * total;
    const double rest = (total - out[0]) / (n - 1);
    for (int i = 1; i < n; ++i) out[i] = rest;
    return out;
}

namespace {

void check_vector(std::vector<Violation>& out, const std::string& name,
                  const std::vector<double>& values, size_t n, bool strictly_positive) {
    if (values.size() != n) {
        out.push_back({name, "length " + std::to_string(values.size()) + " does not match n = " +
                                 std::to_string(n)});
    }
    for (size_t i = 0; i < values.size(); ++i) {
        const std::string path = name + "[" + std::to_string(i) + "]";
        if (!std::isfinite(values[i])) {
            out.push_back({path, "must be finite"});
        } else if (strictly_positive && !(values[i] > 0.0)) {
            out.push_back({path, "ransom must be positive"});
        } else if (!strictly_positive && values[i] < 0.0) {
            out.push_back({path, "must be non-negative"});
        }
    }
}

void check_scalar(std::vector<Violation>& out, const std::string& name, double value) {
    if (!std::isfinite(value))
        out.push_back({name, "must be finite"});
    else if (value < 0.0)
        out.push_back({name, "must be non-negative"});
}

std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].field << ": " << violations[i].message;
    }
    return os.str();
}

}  // namespace

std::vector<Violation> validate_instance(const GameInstance& inst) {
    std::vector<Violation> out;
    if (inst.n < 1) {
        out.push_back({"n", "must be at least 1"});
        return out;
    }
    const auto n = static_cast<size_t>(inst.n);
    check_vector(out, "ransoms", inst.ransoms, n, true);
    check_scalar(out, "data_value", inst.data_value);
    check_scalar(out, "recovery_cost", inst.recovery_cost);
    check_vector(out, "losses", inst.losses, n, false);
    check_vector(out, "sale_profits", inst.sale_profits, n, false);
    for (size_t i = 1; i < inst.losses.size(); ++i) {
        if (inst.losses[i] > inst.losses[i - 1]) {
            out.push_back({"losses[" + std::to_string(i) + "]",
                           "losses not non-increasing at index " + std::to_string(i)});
        }
    }
    return out;
}

std::vector<Violation> validate_reputation(const Reputation& rep, int n) {
    std::vector<Violation> out;
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(rep.beta_r)) out.push_back({"beta_r", "must lie in [0,1]"});
    if (rep.betas.size() != static_cast<size_t>(n)) {
        out.push_back({"betas", "length " + std::to_string(rep.betas.size()) +
                                    " does not match n = " + std::to_string(n)});
    }
    for (size_t i = 0; i < rep.betas.size(); ++i) {
        if (!in_unit(rep.betas[i]))
            out.push_back({"betas[" + std::to_string(i) + "]", "must lie in [0,1]"});
    }
    return out;
}

void require_valid(const GameInstance& inst) {
    auto v = validate_instance(inst);
    if (!v.empty()) throw std::invalid_argument("invalid instance: " + describe(v));
}

void require_valid(const GameInstance& inst, const Reputation& rep) {
    require_valid(inst);
    auto v = validate_reputation(rep, inst.n);
    if (!v.empty()) throw std::invalid_argument("invalid reputation: " + describe(v));
}

GameInstance make_instance(double data_value, int n, double total_ransom,
                           double first_round_fraction, const DecayProfile& decay,
                           double sale_ratio, double recovery_cost) {
    GameInstance inst;
    inst.n = n;
    inst.ransoms = split_ransom(total_ransom, n, first_round_fraction);
    inst.data_value = data_value;
    inst.recovery_cost = recovery_cost;
    auto profiles = build_profiles(data_value, n, decay, sale_ratio);
    inst.losses = std::move(profiles.losses);
    inst.sale_profits = std::move(profiles.sale_profits);
    return inst;
}

}  // namespace ransomgame
