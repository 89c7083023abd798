#include "ransomgame/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ransomgame/api/server.hpp"
#include "ransomgame/experiments.hpp"
#include "ransomgame/json_io.hpp"
#include "ransomgame/protocol/end_to_end.hpp"
#include "ransomgame/report.hpp"
#include "ransomgame/strategy.hpp"

namespace ransomgame::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string instance;
    std::string scenario;
    std::string preset;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
    std::string format;
    bool force = false;
    std::optional<double> epsilon_margin;
    std::string reputation;
    std::string policy = "reputation";
    int from_round = 1;
    std::vector<std::string> modes;
    // protocol
    std::string mode = "single";
    int rounds = 6;
    std::optional<int> cancel_at;
    std::string attacker = "honest";
    std::int64_t demand = 1000;
    std::size_t data_size = 256;
    int chunk_bits = 12;
    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string persist;
    std::string cors_origin = "*";
    bool rounds_set = false;
};

json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ValidationError(std::vector<Violation>{{what, "cannot read " + path}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), what);
}

int default_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Writes every file or none: existing targets are refused unless forced.
void write_outputs(const std::string& dir, const std::vector<std::pair<std::string, std::string>>& files,
                   bool force, std::ostream& out) {
    std::vector<Violation> clashes;
    for (const auto& [name, content] : files) {
        const fs::path p = fs::path(dir) / name;
        if (fs::exists(p) && !force) clashes.push_back({"--out", p.string() + " exists (use --force to overwrite)"});
    }
    if (!clashes.empty()) throw ValidationError(clashes);
    fs::create_directories(dir);
    for (const auto& [name, content] : files) {
        const fs::path p = fs::path(dir) / name;
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << content;
        out << "wrote " << p.string() << '\n';
    }
}

void emit_json(const json& j, const Options& o, const std::string& file, std::ostream& out) {
    if (o.out.empty()) {
        out << j.dump(2) << '\n';
    } else {
        write_outputs(o.out, {{file, j.dump(2) + "\n"}}, o.force, out);
    }
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
    if (o.format.empty()) return;
    for (const char* a : allowed)
        if (o.format == a) return;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw ValidationError(std::vector<Violation>{{"--format", "must be one of " + list}});
}

int cmd_solve(const Options& o, std::ostream& out) {
    require_format(o, {"json"});
    const GameInstance inst = instance_from_json(read_json_file(o.instance, "--instance"));
    json result;
    result["instance"] = to_json(inst);
    if (o.policy == "worst") {
        const WorstCaseResult w = worst_case_equilibrium(inst);
        result["reputation"] = to_json(Reputation::worst(inst.n));
        result["policy"] = to_json(w.policy);
        result["attacker_sell_round"] = w.attacker_sell_round;
        result["attacker_payoff"] = w.attacker_payoff;
        result["victim_payoff"] = w.victim_payoff;
    } else {
        Reputation rep;
        if (o.policy == "perfect") {
            rep = Reputation::perfect(inst.n);
        } else {
            if (o.reputation.empty())
                throw ValidationError(std::vector<Violation>{{"--reputation", "is required unless --policy is perfect or worst"}});
            rep = parse_reputation_list(o.reputation, inst.n);
        }
        if (o.from_round < 1 || o.from_round > inst.n)
            throw ValidationError(std::vector<Violation>{{"--from-round", "must lie in 1..n"}});
        const VictimPolicy policy = continuation_policy(inst, rep, o.from_round);
        result["reputation"] = to_json(rep);
        result["policy"] = to_json(policy);
        result["policy"]["from_round"] = o.from_round;
        if (o.from_round == 1) result["attacker"] = to_json(attacker_expected_profit(inst, rep, policy));
    }
    emit_json(result, o, "solve.json", out);
    return kExitOk;
}

int cmd_optimize(const Options& o, std::ostream& out) {
    require_format(o, {"json", "csv"});
    const GameInstance inst = instance_from_json(read_json_file(o.instance, "--instance"));
    if (o.epsilon_margin && *o.epsilon_margin < 0.0)
        throw ValidationError(std::vector<Violation>{{"--epsilon-margin", "must be non-negative"}});
    const OptimalReputationResult r = optimal_reputation(inst, o.epsilon_margin);
    json j = to_json(r);
    j["policy"] = to_json(victim_policy(inst, r.reputation));
    if (o.out.empty()) {
        if (o.format == "csv") {
            write_cases_csv(out, r, inst.n);
        } else {
            out << j.dump(2) << '\n';
        }
        return kExitOk;
    }
    std::ostringstream cases;
    write_cases_csv(cases, r, inst.n);
    std::vector<std::pair<std::string, std::string>> files{{"cases.csv", cases.str()}};
    if (o.format != "csv") files.push_back({"optimal.json", j.dump(2) + "\n"});
    write_outputs(o.out, files, o.force, out);
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    require_format(o, {"csv", "json"});
    if (o.preset.empty() == o.scenario.empty())
        throw ValidationError(std::vector<Violation>{{"--preset", "exactly one of --preset or --scenario is required"}});
    json body;
    if (!o.preset.empty()) {
        body = load_preset(o.preset);
        if (body["command"] != "simulate")
            throw ValidationError(std::vector<Violation>{{"--preset", o.preset + " is a " + body["command"].get<std::string>() + " preset"}});
    } else {
        body = read_json_file(o.scenario, "--scenario");
    }
    SimulateSpec spec = simulate_from_json(body);
    if (o.seed) spec.scenario.seed = *o.seed;
    if (o.epsilon_margin) spec.scenario.epsilon_margin = *o.epsilon_margin;
    if (!o.modes.empty()) spec.modes = modes_from_json(json(o.modes));
    spec.scenario = scenario_from_json(json::object(), spec.scenario);
    const int threads = default_threads(o.threads);
    const auto results = compare_scenarios(spec.scenario, spec.modes, threads);

    const std::string dir = o.out.empty() ? "results" : o.out;
    if (o.format == "json") {
        json j;
        j["scenario"] = to_json(spec.scenario);
        json list = json::array();
        for (const auto& r : results) {
            json s = summary_json(r);
            json victims = json::array();
            for (const auto& v : r.victims) {
                victims.push_back({{"victim_id", v.victim_id},
                                   {"data_value", v.data_value},
                                   {"decay", std::string(to_string(v.decay))},
                                   {"reputation", to_json(v.reputation)},
                                   {"abort_round", v.abort_round ? json(*v.abort_round) : json(nullptr)},
                                   {"rounds_paid", v.rounds_paid},
                                   {"profit", v.profit},
                                   {"loss", v.loss}});
            }
            s["victim_records"] = std::move(victims);
            list.push_back(std::move(s));
        }
        j["results"] = std::move(list);
        write_outputs(dir, {{"results.json", j.dump(2) + "\n"}}, o.force, out);
    } else {
        std::ostringstream victims;
        std::ostringstream rounds;
        write_victims_csv(victims, results);
        write_rounds_csv(rounds, results);
        write_outputs(dir, {{"victims.csv", victims.str()}, {"rounds.csv", rounds.str()}}, o.force, out);
    }
    for (const auto& r : results)
        out << fmt::format("{:<15} total {:>14} mean {:>12}\n", to_string(r.mode), format_number(r.total_profit),
                           format_number(r.mean_profit));
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    require_format(o, {"csv", "json"});
    if (o.preset.empty() == o.scenario.empty())
        throw ValidationError(std::vector<Violation>{{"--preset", "exactly one of --preset or --scenario is required"}});
    json body;
    if (!o.preset.empty()) {
        body = load_preset(o.preset);
        if (body["command"] != "sweep")
            throw ValidationError(std::vector<Violation>{{"--preset", o.preset + " is a " + body["command"].get<std::string>() + " preset"}});
    } else {
        body = read_json_file(o.scenario, "--scenario");
    }
    SweepSpec spec = sweep_from_json(body);
    if (o.epsilon_margin) {
        if (*o.epsilon_margin < 0.0)
            throw ValidationError(std::vector<Violation>{{"--epsilon-margin", "must be non-negative"}});
        spec.epsilon_margin = *o.epsilon_margin;
    }
    if (o.rounds_set) spec.rounds = o.rounds;
    const std::string dir = o.out.empty() ? "results" : o.out;
    if (o.format == "json") {
        write_outputs(dir, {{"sweep.json", run_sweep_json(spec).dump(2) + "\n"}}, o.force, out);
    } else {
        write_outputs(dir, {{"sweep.csv", run_sweep_csv(spec)}}, o.force, out);
    }
    return kExitOk;
}

int cmd_protocol(const Options& o, std::ostream& out) {
    require_format(o, {"jsonl"});
    protocol::EndToEndScenario sc;
    if (o.mode == "single") {
        sc.rounds = 1;
        if (o.cancel_at) throw ValidationError(std::vector<Violation>{{"--cancel-at", "applies to --mode multi only"}});
    } else {
        sc.rounds = o.rounds;
        if (sc.rounds < 2) throw ValidationError(std::vector<Violation>{{"--rounds", "multi-round needs at least 2 rounds"}});
    }
    sc.cancel_at = o.cancel_at;
    sc.attacker = o.attacker == "withhold"    ? protocol::AttackerBehavior::kWithholdKey
                  : o.attacker == "wrong-key" ? protocol::AttackerBehavior::kWrongKey
                                              : protocol::AttackerBehavior::kHonest;
    sc.demand = o.demand;
    sc.victim_funds = std::max<std::int64_t>(o.demand * 5, o.demand);
    sc.data_size = o.data_size;
    sc.seed = o.seed.value_or(1);
    const protocol::GroupParams params = protocol::setup(o.chunk_bits, sc.seed);
    const protocol::EndToEndResult r = protocol::run_end_to_end(params, sc);

    std::ostringstream transcript;
    protocol::write_transcript_jsonl(transcript, r.transcript);
    const std::string dir = o.out.empty() ? "results" : o.out;
    write_outputs(dir, {{"transcript.jsonl", transcript.str()}}, o.force, out);
    for (const auto& step : r.steps) out << "  " << step << '\n';
    out << fmt::format("events {}  phase {}  attacker gain {}  victim spend {}  refund {}\n", r.transcript.size(),
                       protocol::to_string(r.final_state.phase), r.attacker_gain, r.victim_spend, r.victim_refund);
    out << "data recovered: " << (r.data_recovered ? "yes" : "no") << '\n';
    out << "conservation: " << (r.conservation_ok ? "ok" : "VIOLATED") << '\n';
    out << "replay: " << (r.replay_ok ? "identical final state" : "MISMATCH") << '\n';
    return r.conservation_ok && r.replay_ok ? kExitOk : kExitInternal;
}

int cmd_serve(const Options& o) {
    api::ServerOptions s;
    s.host = o.host;
    s.port = o.port;
    s.cors_origin = o.cors_origin;
    if (!o.persist.empty()) s.persist_path = o.persist;
    s.api.seed = o.seed.value_or(1);
    s.api.threads = default_threads(o.threads);
    return api::run_server(s);
}

}  // namespace

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("ransomgame");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("RANSOMGAME_LOG")) {
        const auto level = spdlog::level::from_str(env);
        if (level == spdlog::level::off && std::string(env) != "off")
            spdlog::warn("RANSOMGAME_LOG={} is not a log level; using warn", env);
        else
            spdlog::set_level(level);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-round ransom payment game: solver, optimizer, simulator and protocol demo"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    Options o;

    auto common_out = [&](CLI::App* sub, bool with_format) {
        sub->add_option("--out", o.out, "Output directory (created if absent)");
        sub->add_flag("--force", o.force, "Overwrite existing output files");
        if (with_format) sub->add_option("--format", o.format, "Output format");
    };

    auto* solve = app.add_subcommand("solve", "Victim best response to an attacker reputation");
    solve->add_option("--instance", o.instance, "Game instance JSON file")->required();
    solve->add_option("--reputation", o.reputation, "beta_r,beta_1,...,beta_n");
    solve->add_option("--policy", o.policy, "reputation, perfect or worst")
        ->check(CLI::IsMember({"reputation", "perfect", "worst"}));
    solve->add_option("--from-round", o.from_round, "Continuation from this round");
    common_out(solve, true);

    auto* optimize = app.add_subcommand("optimize", "Optimal attacker reputation with the per-case table");
    optimize->add_option("--instance", o.instance, "Game instance JSON file")->required();
    optimize->add_option("--epsilon-margin", o.epsilon_margin, "Margin for strict payment conditions");
    common_out(optimize, true);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of reputation modes");
    simulate->add_option("--preset", o.preset, "Built-in preset name");
    simulate->add_option("--scenario", o.scenario, "Scenario JSON file");
    simulate->add_option("--seed", o.seed, "Random seed");
    simulate->add_option("--threads", o.threads, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    simulate->add_option("--modes", o.modes, "Reputation modes to compare")->delimiter(',');
    simulate->add_option("--epsilon-margin", o.epsilon_margin, "Margin for strict payment conditions");
    common_out(simulate, true);

    auto* sweep = app.add_subcommand("sweep", "Reputation or expected-profit sweep over the total ransom");
    sweep->add_option("--preset", o.preset, "Built-in preset name");
    sweep->add_option("--scenario", o.scenario, "Sweep JSON file");
    sweep->add_option("--epsilon-margin", o.epsilon_margin, "Margin for strict payment conditions");
    auto* sweep_rounds = sweep->add_option("--rounds", o.rounds, "Override the number of rounds");
    common_out(sweep, true);

    auto* proto = app.add_subcommand("protocol", "End-to-end ransom protocol against a simulated ledger");
    proto->add_option("--mode", o.mode, "single or multi")->check(CLI::IsMember({"single", "multi"}));
    auto* proto_rounds = proto->add_option("--rounds", o.rounds, "Payment rounds for --mode multi");
    proto->add_option("--cancel-at", o.cancel_at, "Victim cancels after this many withdrawals");
    proto->add_option("--attacker", o.attacker, "honest, withhold or wrong-key")
        ->check(CLI::IsMember({"honest", "withhold", "wrong-key"}));
    proto->add_option("--demand", o.demand, "Total ransom in tokens")->check(CLI::PositiveNumber);
    proto->add_option("--data-size", o.data_size, "Bytes of victim data")->check(CLI::PositiveNumber);
    proto->add_option("--chunk-bits", o.chunk_bits, "Plaintext bits per chunk")->check(CLI::Range(4, 16));
    proto->add_option("--seed", o.seed, "Random seed");
    common_out(proto, true);

    auto* serve = app.add_subcommand("serve", "Start the HTTP API");
    serve->add_option("--host", o.host, "Bind address");
    serve->add_option("--port", o.port, "Port")->check(CLI::Range(1, 65535));
    serve->add_option("--persist", o.persist, "Session store file, loaded at start and saved on shutdown");
    serve->add_option("--cors-origin", o.cors_origin, "Allowed CORS origin");
    serve->add_option("--seed", o.seed, "Seed for session streams");
    serve->add_option("--threads", o.threads, "Worker threads for simulations")->check(CLI::NonNegativeNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }
    o.rounds_set = sweep_rounds->count() > 0 || proto_rounds->count() > 0;

    try {
        if (solve->parsed()) return cmd_solve(o, out);
        if (optimize->parsed()) return cmd_optimize(o, out);
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (proto->parsed()) return cmd_protocol(o, out);
        if (serve->parsed()) return cmd_serve(o);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitValidation;
}

}  // namespace ransomgame::cli
