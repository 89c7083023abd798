#include "ransomgame/api/api.hpp"

#include <fmt/format.h>

#include <sstream>

#include "ransomgame/experiments.hpp"
#include "ransomgame/report.hpp"
#include "ransomgame/strategy.hpp"

namespace ransomgame::api {

namespace {

ApiResponse reply(int status, const json& body) { return {status, "application/json", body.dump()}; }

ApiResponse error(int status, const std::string& kind, const std::string& message,
                  const std::vector<Violation>& violations = {}) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    json v = json::array();
    for (const auto& e : violations) v.push_back({{"field", e.field}, {"message", e.message}});
    j["violations"] = std::move(v);
    return reply(status, j);
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string clean = path.substr(0, path.find('?'));
    std::stringstream ss(clean);
    std::string item;
    while (std::getline(ss, item, '/'))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

const json& field(const json& req, const char* key) {
    if (!req.is_object() || !req.contains(key))
        throw ValidationError(std::vector<Violation>{{key, "is required"}});
    return req[key];
}

// "perfect", "worst", an object or a flat array.
Reputation reputation_field(const json& req, const char* key, int n) {
    const json& r = field(req, key);
    if (r.is_string()) {
        const std::string name = r.get<std::string>();
        if (name == "perfect") return Reputation::perfect(n);
        if (name == "worst") return Reputation::worst(n);
        throw ValidationError(std::vector<Violation>{{key, "must be perfect, worst, an object or an array"}});
    }
    return reputation_from_json(r, n);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

json recommendation_json(const Recommendation& r) {
    json j;
    j["round"] = r.round;
    j["pay_loss"] = r.pay_loss;
    j["abort_loss"] = r.abort_loss;
    j["action"] = r.pay ? "pay" : "abort";
    return j;
}

json policy_json(const VictimPolicy& policy, int from_round) {
    json j = to_json(policy);
    j["from_round"] = from_round;
    return j;
}

}  // namespace

Recommendation recommend(const GameInstance& inst, const Reputation& rep, int round) {
    require_valid(inst, rep);
    if (round < 1 || round > inst.n) throw std::invalid_argument("recommend: round out of range");
    const double next =
        round < inst.n ? continuation_policy(inst, rep, round + 1).continuation_values[round] : 0.0;
    Recommendation r;
    r.round = round;
    if (round == 1) {
        r.pay_loss = inst.ransom(1) + (1.0 - rep.beta_r) * inst.loss(1) +
                     rep.beta_r * (-inst.data_value + rep.beta(1) * inst.loss(1) + (1.0 - rep.beta(1)) * next);
    } else {
        r.pay_loss = inst.ransom(round) + rep.beta(round) * inst.loss(round) + (1.0 - rep.beta(round)) * next;
    }
    r.abort_loss = inst.loss(round);
    r.pay = r.pay_loss < r.abort_loss;
    return r;
}

json session_json(const Session& s) {
    json j;
    j["id"] = s.id;
    j["instance"] = to_json(s.instance);
    j["reputation"] = to_json(s.reputation);
    j["seed"] = s.seed;
    j["current_round"] = s.current_round;
    j["alive"] = s.alive;
    j["outcome"] = s.outcome;
    j["key_recovered"] = s.key_recovered;
    json h = json::array();
    for (const auto& e : s.history) h.push_back({{"round", e.round}, {"decision", e.decision}, {"event", e.event}});
    j["history"] = std::move(h);
    j["recommendation"] = s.alive ? recommendation_json(recommend(s.instance, s.reputation, s.current_round))
                                  : json(nullptr);
    return j;
}

Api::Api(ApiOptions options) : options_(options) {}

std::shared_ptr<Session> Api::find(const std::string& id) const {
    std::lock_guard lock(store_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const std::string& body) {
    const auto parts = split_path(path);
    try {
        auto parsed = [&] { return body.empty() ? json::object() : parse_json(body, "body"); };
        if (parts.size() < 2 || parts[0] != "v1") return error(404, "not_found", "unknown route " + path);
        const std::string& head = parts[1];
        if (method == "GET") {
            if (parts.size() == 2 && head == "spec") return reply(200, openapi());
            if (parts.size() == 2 && head == "health") return reply(200, {{"status", "ok"}});
            if (parts.size() == 2 && head == "presets") {
                json out = json::array();
                for (const auto& n : preset_names()) out.push_back(load_preset(n));
                return reply(200, out);
            }
            if (parts.size() == 3 && head == "sessions") return get_session(parts[2]);
            if (parts.size() == 4 && head == "artifacts") return artifact(parts[2], parts[3]);
        } else if (method == "POST") {
            if (parts.size() == 2 && head == "solve") return solve(parsed());
            if (parts.size() == 2 && head == "optimize") return optimize(parsed());
            if (parts.size() == 2 && head == "simulate") return simulate(parsed());
            if (parts.size() == 2 && head == "sweep") return sweep(parsed());
            if (parts.size() == 2 && head == "sessions") return create_session(parsed());
            if (parts.size() == 4 && head == "sessions" && parts[3] == "decision") return decide(parts[2], parsed());
            if (parts.size() == 4 && head == "sessions" && parts[3] == "whatif") return whatif(parts[2], parsed());
        } else {
            return error(405, "method_not_allowed", "method " + method + " is not supported");
        }
        return error(404, "not_found", "unknown route " + method + " " + path);
    } catch (const ValidationError& e) {
        return error(400, "validation", e.what(), e.violations());
    } catch (const std::invalid_argument& e) {
        return error(400, "validation", e.what());
    } catch (const json::exception& e) {
        return error(400, "validation", e.what());
    } catch (const std::exception& e) {
        return error(500, "internal", e.what());
    }
}

ApiResponse Api::solve(const json& req) {
    const GameInstance inst = instance_from_json(field(req, "instance"));
    const Reputation rep = reputation_field(req, "reputation", inst.n);
    int from_round = 1;
    if (req.contains("from_round")) {
        if (!req["from_round"].is_number_integer() || req["from_round"].get<int>() < 1 ||
            req["from_round"].get<int>() > inst.n)
            throw ValidationError(std::vector<Violation>{{"from_round", "must lie in 1..n"}});
        from_round = req["from_round"].get<int>();
    }
    const VictimPolicy policy = continuation_policy(inst, rep, from_round);
    json out;
    out["policy"] = policy_json(policy, from_round);
    out["recommendation"] = recommendation_json(recommend(inst, rep, from_round));
    if (from_round == 1) out["attacker"] = to_json(attacker_expected_profit(inst, rep, policy));
    return reply(200, out);
}

ApiResponse Api::optimize(const json& req) {
    const GameInstance inst = instance_from_json(field(req, "instance"));
    std::optional<double> eps;
    if (req.contains("epsilon_margin") && !req["epsilon_margin"].is_null()) {
        if (!req["epsilon_margin"].is_number() || req["epsilon_margin"].get<double>() < 0.0)
            throw ValidationError(std::vector<Violation>{{"epsilon_margin", "must be a non-negative number"}});
        eps = req["epsilon_margin"].get<double>();
    }
    json out = to_json(optimal_reputation(inst, eps));
    out["policy"] = to_json(victim_policy(inst, Reputation{out["reputation"]["beta_r"].get<double>(),
                                                           out["reputation"]["betas"].get<std::vector<double>>()}));
    return reply(200, out);
}

ApiResponse Api::simulate(const json& req) {
    SimulateSpec spec;
    if (req.contains("preset")) {
        if (!req["preset"].is_string())
            throw ValidationError(std::vector<Violation>{{"preset", "must be a string"}});
        const json& preset = load_preset(req["preset"].get<std::string>());
        if (preset["command"] != "simulate")
            throw ValidationError(std::vector<Violation>{{"preset", "is not a simulation preset"}});
        spec = simulate_from_json(preset);
        if (req.contains("scenario")) spec.scenario = scenario_from_json(req["scenario"], spec.scenario);
        if (req.contains("modes")) spec.modes = modes_from_json(req["modes"]);
    } else {
        spec = simulate_from_json(req);
    }
    const auto results = compare_scenarios(spec.scenario, spec.modes, options_.threads);
    std::ostringstream victims;
    std::ostringstream rounds;
    write_victims_csv(victims, results);
    write_rounds_csv(rounds, results);

    json cfg = to_json(spec.scenario);
    json modes = json::array();
    for (auto m : spec.modes) modes.push_back(std::string(to_string(m)));
    const std::string id = fmt::format("{:016x}", fnv1a(cfg.dump() + modes.dump()));
    {
        std::lock_guard lock(store_mutex_);
        bool known = false;
        for (const auto& a : artifacts_) known |= a.first == id;
        if (!known) {
            artifacts_.push_back({id, {{"victims.csv", victims.str()}, {"rounds.csv", rounds.str()}}});
            if (artifacts_.size() > options_.max_artifacts) artifacts_.erase(artifacts_.begin());
        }
    }
    json out;
    out["scenario"] = cfg;
    out["modes"] = modes;
    json summaries = json::array();
    for (const auto& r : results) summaries.push_back(summary_json(r));
    out["results"] = std::move(summaries);
    out["artifacts"] = {{"victims_csv", "/v1/artifacts/" + id + "/victims.csv"},
                        {"rounds_csv", "/v1/artifacts/" + id + "/rounds.csv"}};
    return reply(200, out);
}

ApiResponse Api::sweep(const json& req) {
    if (req.contains("preset")) {
        if (!req["preset"].is_string())
            throw ValidationError(std::vector<Violation>{{"preset", "must be a string"}});
        const json& preset = load_preset(req["preset"].get<std::string>());
        if (preset["command"] != "sweep")
            throw ValidationError(std::vector<Violation>{{"preset", "is not a sweep preset"}});
        return reply(200, run_sweep_json(sweep_from_json(preset)));
    }
    return reply(200, run_sweep_json(sweep_from_json(req)));
}

ApiResponse Api::artifact(const std::string& id, const std::string& file) {
    std::lock_guard lock(store_mutex_);
    for (const auto& [key, files] : artifacts_) {
        if (key != id) continue;
        auto it = files.find(file);
        if (it == files.end()) break;
        return {200, "text/csv", it->second};
    }
    return error(404, "not_found", "unknown artifact " + id + "/" + file);
}

ApiResponse Api::create_session(const json& req) {
    auto s = std::make_shared<Session>();
    s->instance = instance_from_json(field(req, "instance"));
    s->reputation = req.contains("reputation") ? reputation_field(req, "reputation", s->instance.n)
                                               : Reputation::worst(s->instance.n);
    std::lock_guard lock(store_mutex_);
    ++session_counter_;
    if (req.contains("seed")) {
        if (!req["seed"].is_number_unsigned() && !(req["seed"].is_number_integer() && req["seed"].get<long long>() >= 0))
            throw ValidationError(std::vector<Violation>{{"seed", "must be a non-negative integer"}});
        s->seed = req["seed"].get<std::uint64_t>();
    } else {
        s->seed = splitmix64(options_.seed + session_counter_);
    }
    s->id = fmt::format("s{}", session_counter_);
    s->rng = Rng::stream(s->seed, 0);
    sessions_[s->id] = s;
    return reply(201, session_json(*s));
}

ApiResponse Api::get_session(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard lock(s->mutex);
    return reply(200, session_json(*s));
}

ApiResponse Api::decide(const std::string& id, const json& req) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    const json& a = field(req, "action");
    const std::string action = a.is_string() ? a.get<std::string>() : "";
    if (action != "pay" && action != "abort")
        throw ValidationError(std::vector<Violation>{{"action", "must be pay or abort"}});
    std::lock_guard lock(s->mutex);
    if (!s->alive) return error(409, "conflict", "session " + id + " has ended (" + s->outcome + ")");
    const int t = s->current_round;
    const int n = s->instance.n;
    const Reputation& rep = s->reputation;
    auto draw = [&](double p) {
        ++s->draws;
        return s->rng.bernoulli(p);
    };
    std::string event;
    if (action == "abort") {
        event = "data_sold";
        s->alive = false;
        s->outcome = "aborted";
    } else if (t == 1) {
        if (!draw(rep.beta_r)) {
            event = "key_withheld";
            s->alive = false;
            s->outcome = "key_withheld";
        } else {
            s->key_recovered = true;
            if (draw(rep.beta(1))) {
                event = "key_returned_data_sold";
                s->alive = false;
                s->outcome = "data_sold";
            } else {
                event = "key_returned";
            }
        }
    } else {
        if (draw(rep.beta(t))) {
            event = "data_sold";
            s->alive = false;
            s->outcome = "data_sold";
        } else {
            event = "data_kept";
        }
    }
    s->history.push_back({t, action, event});
    if (s->alive) {
        if (t == n) {
            s->alive = false;
            s->outcome = "complete";
        } else {
            s->current_round = t + 1;
        }
    }
    json out = session_json(*s);
    out["realized_event"] = event;
    return reply(200, out);
}

ApiResponse Api::whatif(const std::string& id, const json& req) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard lock(s->mutex);
    const Reputation rep = reputation_field(req, "reputation", s->instance.n);
    if (!s->alive) return error(409, "conflict", "session " + id + " has ended (" + s->outcome + ")");
    json out;
    out["session"] = s->id;
    out["reputation"] = to_json(rep);
    out["policy"] = policy_json(continuation_policy(s->instance, rep, s->current_round), s->current_round);
    out["recommendation"] = recommendation_json(recommend(s->instance, rep, s->current_round));
    return reply(200, out);
}

json Api::save_sessions() const {
    std::lock_guard lock(store_mutex_);
    json out;
    out["session_counter"] = session_counter_;
    json list = json::array();
    for (const auto& [id, s] : sessions_) {
        std::lock_guard slock(s->mutex);
        json j = session_json(*s);
        j["draws"] = s->draws;
        list.push_back(std::move(j));
    }
    out["sessions"] = std::move(list);
    return out;
}

std::shared_ptr<Session> Api::restore(const json& j) const {
    auto s = std::make_shared<Session>();
    s->id = j.at("id").get<std::string>();
    s->instance = instance_from_json(j.at("instance"));
    s->reputation = reputation_from_json(j.at("reputation"), s->instance.n);
    s->seed = j.at("seed").get<std::uint64_t>();
    s->draws = j.at("draws").get<std::uint64_t>();
    s->current_round = j.at("current_round").get<int>();
    s->alive = j.at("alive").get<bool>();
    s->outcome = j.at("outcome").get<std::string>();
    s->key_recovered = j.at("key_recovered").get<bool>();
    for (const auto& h : j.at("history"))
        s->history.push_back({h.at("round").get<int>(), h.at("decision").get<std::string>(),
                              h.at("event").get<std::string>()});
    s->rng = Rng::stream(s->seed, 0);
    for (std::uint64_t i = 0; i < s->draws; ++i) s->rng.uniform();
    return s;
}

void Api::load_sessions(const json& j) {
    std::map<std::string, std::shared_ptr<Session>> loaded;
    for (const auto& item : j.at("sessions")) {
        auto s = restore(item);
        loaded[s->id] = s;
    }
    std::lock_guard lock(store_mutex_);
    sessions_ = std::move(loaded);
    session_counter_ = j.at("session_counter").get<std::uint64_t>();
}

}  // namespace ransomgame::api
