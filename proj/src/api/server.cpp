#include "ransomgame/api/server.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <filesystem>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace ransomgame::api {

namespace {

std::atomic<httplib::Server*> g_server{nullptr};

void on_signal(int) {
    if (auto* s = g_server.load()) s->stop();
}

}  // namespace

void stop_server() { on_signal(0); }

int run_server(const ServerOptions& options) {
    Api api(options.api);
    if (options.persist_path && std::filesystem::exists(*options.persist_path)) {
        std::ifstream in(*options.persist_path);
        api.load_sessions(json::parse(in));
        spdlog::info("loaded sessions from {}", *options.persist_path);
    }

    httplib::Server server;
    auto dispatch = [&](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse r = api.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
        spdlog::debug("{} {} -> {}", req.method, req.path, r.status);
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Get(".*", dispatch);
    server.Post(".*", dispatch);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    if (!server.bind_to_port(options.host, options.port)) {
        spdlog::error("cannot bind {}:{}", options.host, options.port);
        return 1;
    }
    g_server.store(&server);
    auto previous_int = std::signal(SIGINT, on_signal);
    auto previous_term = std::signal(SIGTERM, on_signal);
    spdlog::info("listening on {}:{}", options.host, options.port);
    server.listen_after_bind();
    g_server.store(nullptr);
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);

    if (options.persist_path) {
        std::ofstream out(*options.persist_path);
        out << api.save_sessions().dump(2) << '\n';
        spdlog::info("saved sessions to {}", *options.persist_path);
    }
    return 0;
}

}  // namespace ransomgame::api
