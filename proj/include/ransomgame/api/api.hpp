#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ransomgame/json_io.hpp"
#include "ransomgame/sampling.hpp"

namespace ransomgame::api {

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;

    json json_body() const { return json::parse(body); }
};

struct ApiOptions {
    std::uint64_t seed = 1;  // derives session seeds when none is supplied
    int threads = 1;         // worker threads for /v1/simulate
    std::size_t max_artifacts = 32;
};

struct HistoryEntry {
    int round = 0;
    std::string decision;  // "pay" or "abort"
    std::string event;
};

struct Session {
    std::string id;
    GameInstance instance;
    Reputation reputation;
    std::uint64_t seed = 0;
    std::uint64_t draws = 0;  // random numbers consumed so far
    int current_round = 1;
    bool alive = true;
    bool key_recovered = false;
    std::string outcome = "active";
    std::vector<HistoryEntry> history;
    Rng rng{0};
    std::mutex mutex;
};

// Transport-independent request handler. Every endpoint answers JSON;
// errors carry {"error", "message", "violations"}.
class Api {
  public:
    explicit Api(ApiOptions options = {});

    ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

    // Session store snapshot and restore (used for --persist).
    json save_sessions() const;
    void load_sessions(const json& j);

    static json openapi();

  private:
    ApiResponse solve(const json& req);
    ApiResponse optimize(const json& req);
    ApiResponse simulate(const json& req);
    ApiResponse sweep(const json& req);
    ApiResponse create_session(const json& req);
    ApiResponse get_session(const std::string& id);
    ApiResponse decide(const std::string& id, const json& req);
    ApiResponse whatif(const std::string& id, const json& req);
    ApiResponse artifact(const std::string& id, const std::string& file);

    std::shared_ptr<Session> find(const std::string& id) const;
    std::shared_ptr<Session> restore(const json& j) const;

    ApiOptions options_;
    mutable std::mutex store_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t session_counter_ = 0;
    std::vector<std::pair<std::string, std::map<std::string, std::string>>> artifacts_;
};

// Victim's view at `round`: expected loss of paying (continuation) versus
// aborting (L_round).
struct Recommendation {
    int round = 0;
    double pay_loss = 0.0;
    double abort_loss = 0.0;
    bool pay = false;  // ties resolve to abort
};

Recommendation recommend(const GameInstance& inst, const Reputation& rep, int round);

json session_json(const Session& s);

}  // namespace ransomgame::api
