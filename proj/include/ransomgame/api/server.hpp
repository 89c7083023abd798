#pragma once

#include <optional>
#include <string>

#include "ransomgame/api/api.hpp"

namespace ransomgame::api {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
    std::optional<std::string> persist_path;  // sessions loaded at start, saved on shutdown
    ApiOptions api;
};

// Blocks until SIGINT/SIGTERM or stop_server(). Returns 0 on a clean stop.
int run_server(const ServerOptions& options);
void stop_server();

}  // namespace ransomgame::api
