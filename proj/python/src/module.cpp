#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ransomgame/cli.hpp"
#include "ransomgame/json_io.hpp"
#include "ransomgame/montecarlo.hpp"
#include "ransomgame/protocol/end_to_end.hpp"
#include "ransomgame/reputation.hpp"
#include "ransomgame/strategy.hpp"

namespace py = pybind11;
using namespace ransomgame;

namespace {

py::dict run_protocol(int rounds, std::optional<int> cancel_at, const std::string& attacker, std::int64_t demand,
                      std::size_t data_size, std::uint64_t seed, int chunk_bits) {
    protocol::EndToEndScenario sc;
    sc.rounds = rounds;
    sc.cancel_at = cancel_at;
    if (attacker == "honest") sc.attacker = protocol::AttackerBehavior::kHonest;
    else if (attacker == "withhold") sc.attacker = protocol::AttackerBehavior::kWithholdKey;
    else if (attacker == "wrong-key") sc.attacker = protocol::AttackerBehavior::kWrongKey;
    else throw std::invalid_argument("attacker must be honest, withhold or wrong-key");
    sc.demand = demand;
    sc.victim_funds = demand * 5;
    sc.data_size = data_size;
    sc.seed = seed;
    const auto r = protocol::run_end_to_end(protocol::setup(chunk_bits, seed), sc);
    std::ostringstream transcript;
    protocol::write_transcript_jsonl(transcript, r.transcript);
    py::dict out;
    out["phase"] = std::string(protocol::to_string(r.final_state.phase));
    out["attacker_gain"] = r.attacker_gain;
    out["victim_spend"] = r.victim_spend;
    out["victim_refund"] = r.victim_refund;
    out["data_recovered"] = r.data_recovered;
    out["conservation_ok"] = r.conservation_ok;
    out["replay_ok"] = r.replay_ok;
    out["steps"] = r.steps;
    out["transcript"] = transcript.str();
    return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(ransomgame, m) {
    m.doc() = "Multi-round ransom payment game: solver, reputation optimizer, simulator and protocol demo";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::enum_<DecayKind>(m, "DecayKind")
        .value("QUADRATIC", DecayKind::kQuadratic)
        .value("LINEAR", DecayKind::kLinear)
        .value("CIRCULAR", DecayKind::kCircular)
        .value("CUSTOM", DecayKind::kCustom);

    py::class_<DecayProfile>(m, "DecayProfile")
        .def_static("quadratic", &DecayProfile::quadratic)
        .def_static("linear", &DecayProfile::linear)
        .def_static("circular", &DecayProfile::circular)
        .def_static("custom", &DecayProfile::custom, py::arg("table"))
        .def_readonly("kind", &DecayProfile::kind)
        .def_readonly("table", &DecayProfile::table);

    py::class_<GameInstance>(m, "GameInstance")
        .def(py::init<>())
        .def_readwrite("n", &GameInstance::n)
        .def_readwrite("ransoms", &GameInstance::ransoms)
        .def_readwrite("data_value", &GameInstance::data_value)
        .def_readwrite("recovery_cost", &GameInstance::recovery_cost)
        .def_readwrite("losses", &GameInstance::losses)
        .def_readwrite("sale_profits", &GameInstance::sale_profits)
        .def("total_ransom", &GameInstance::total_ransom)
        .def("to_json", [](const GameInstance& g) { return to_json(g).dump(); })
        .def_static("from_json", [](const std::string& text) { return instance_from_json(parse_json(text, "instance")); })
        .def("__repr__", [](const GameInstance& g) {
            return "GameInstance(n=" + std::to_string(g.n) + ", data_value=" + std::to_string(g.data_value) + ")";
        });

    py::class_<Reputation>(m, "Reputation")
        .def(py::init<>())
        .def(py::init([](double beta_r, std::vector<double> betas) { return Reputation{beta_r, std::move(betas)}; }),
             py::arg("beta_r"), py::arg("betas"))
        .def_readwrite("beta_r", &Reputation::beta_r)
        .def_readwrite("betas", &Reputation::betas)
        .def_static("perfect", &Reputation::perfect, py::arg("n"))
        .def_static("worst", &Reputation::worst, py::arg("n"));

    py::class_<VictimPolicy>(m, "VictimPolicy")
        .def_readonly("abort_round", &VictimPolicy::abort_round)
        .def_readonly("continuation_values", &VictimPolicy::continuation_values)
        .def_readonly("expected_loss", &VictimPolicy::expected_loss)
        .def("pays_all", &VictimPolicy::pays_all)
        .def("rounds_paid", &VictimPolicy::rounds_paid);

    py::class_<ProfitBreakdown>(m, "ProfitBreakdown")
        .def_readonly("expected_profit", &ProfitBreakdown::expected_profit)
        .def_readonly("ransom_component", &ProfitBreakdown::ransom_component)
        .def_readonly("sale_component", &ProfitBreakdown::sale_component)
        .def_readonly("recovery_cost_component", &ProfitBreakdown::recovery_cost_component)
        .def_readonly("end_with_sale", &ProfitBreakdown::end_with_sale)
        .def_readonly("end_without_sale", &ProfitBreakdown::end_without_sale)
        .def_readonly("per_round_profit", &ProfitBreakdown::per_round_profit);

    py::class_<OptimalReputationResult>(m, "OptimalReputationResult")
        .def_readonly("reputation", &OptimalReputationResult::reputation)
        .def_readonly("case_index", &OptimalReputationResult::case_index)
        .def_readonly("expected_profit", &OptimalReputationResult::expected_profit)
        .def_readonly("all_infeasible", &OptimalReputationResult::all_infeasible)
        .def_readonly("epsilon_margin", &OptimalReputationResult::epsilon_margin)
        .def("to_json", [](const OptimalReputationResult& r) { return to_json(r).dump(); });

    m.def("build_profiles",
          [](double v, int n, const DecayProfile& d, double ratio) {
              const Profiles p = build_profiles(v, n, d, ratio);
              return py::make_tuple(p.losses, p.sale_profits);
          },
          py::arg("data_value"), py::arg("n"), py::arg("decay"), py::arg("sale_ratio"),
          "Returns (losses, sale_profits).");
    m.def("make_instance", &make_instance, py::arg("data_value"), py::arg("n"), py::arg("total_ransom"),
          py::arg("first_round_fraction"), py::arg("decay"), py::arg("sale_ratio"), py::arg("recovery_cost") = 0.0);
    m.def("victim_policy", &victim_policy, py::arg("instance"), py::arg("reputation"));
    m.def("continuation_policy", &continuation_policy, py::arg("instance"), py::arg("reputation"),
          py::arg("from_round"));
    m.def("perfect_reputation_policy", &perfect_reputation_policy, py::arg("instance"));
    m.def("enumerate_best_response", &enumerate_best_response, py::arg("instance"), py::arg("reputation"));
    m.def("decide_single_round", &decide_single_round, py::arg("ransom"), py::arg("data_value"), py::arg("loss1"),
          py::arg("beta_r"), py::arg("beta_1"));
    m.def("attacker_expected_profit",
          py::overload_cast<const GameInstance&, const Reputation&, const VictimPolicy&>(&attacker_expected_profit),
          py::arg("instance"), py::arg("reputation"), py::arg("policy"));
    m.def("optimal_reputation", &optimal_reputation, py::arg("instance"), py::arg("epsilon_margin") = py::none());
    m.def("profit_at", &profit_at, py::arg("instance"), py::arg("reputation"));

    m.def("simulate",
          [](const std::string& scenario_json, std::vector<std::string> modes, int threads) {
              const ScenarioConfig cfg = scenario_from_json(parse_json(scenario_json, "scenario"));
              std::vector<ReputationMode> parsed;
              for (const auto& name : modes) {
                  const auto mode = parse_reputation_mode(name);
                  if (!mode) throw std::invalid_argument("unknown mode " + name);
                  parsed.push_back(*mode);
              }
              if (parsed.empty()) parsed.push_back(cfg.mode);
              py::list out;
              for (const auto& r : compare_scenarios(cfg, parsed, threads)) {
                  py::dict d;
                  d["mode"] = std::string(to_string(r.mode));
                  d["total_profit"] = r.total_profit;
                  d["mean_profit"] = r.mean_profit;
                  d["cumulative_profit"] = r.cumulative_profit;
                  std::vector<double> profits;
                  for (const auto& v : r.victims) profits.push_back(v.profit);
                  d["victim_profits"] = profits;
                  out.append(d);
              }
              return out;
          },
          py::arg("scenario_json") = "{}", py::arg("modes") = std::vector<std::string>{}, py::arg("threads") = 1,
          "Runs the scenario (JSON object, defaults for missing keys) for each mode.");

    m.def("run_protocol", &run_protocol, py::arg("rounds") = 1, py::arg("cancel_at") = py::none(),
          py::arg("attacker") = "honest", py::arg("demand") = 1000, py::arg("data_size") = 64, py::arg("seed") = 1,
          py::arg("chunk_bits") = 12);

    m.def("cli", &run_cli, py::arg("args"), "Runs a command line; returns (exit_code, stdout, stderr).");
}
