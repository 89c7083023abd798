#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ransomgame/json_io.hpp"
#include "ransomgame/montecarlo.hpp"

namespace ransomgame {

// Names of the built-in experiment presets, in order.
const std::vector<std::string>& preset_names();

// Throws ValidationError for an unknown name.
const json& load_preset(std::string_view name);

struct SimulateSpec {
    ScenarioConfig scenario;
    std::vector<ReputationMode> modes;
};

// {"scenario": {...}, "modes": [...]}; a bare ScenarioConfig object is
// accepted too and runs its own mode.
SimulateSpec simulate_from_json(const json& j);

enum class SweepKind { kReputation, kProfit };

struct SweepSpec {
    SweepKind kind = SweepKind::kReputation;
    double data_value = 500.0;
    int rounds = 6;
    DecayProfile decay = DecayProfile::quadratic();
    double sale_ratio = 0.7;
    double recovery_cost = 0.0;
    double first_round_fraction = 0.5;
    double gamma = 0.1;
    std::optional<double> epsilon_margin;
    std::vector<double> grid;
};

// Grid as {"start", "stop", "step"} (inclusive) or "values": [...].
SweepSpec sweep_from_json(const json& j);

// CSV in the long x,series,value layout.
std::string run_sweep_csv(const SweepSpec& spec);
json run_sweep_json(const SweepSpec& spec);

}  // namespace ransomgame
