#include "ransomgame/api/api.hpp"

namespace ransomgame::api {

namespace {

json ref(const std::string& name) { return {{"$ref", "#/components/schemas/" + name}}; }

json json_body(const json& schema) {
    return {{"required", true}, {"content", {{"application/json", {{"schema", schema}}}}}};
}

json responses(const std::string& description, const json& schema, bool session = false) {
    json r;
    r["200"] = {{"description", description}, {"content", {{"application/json", {{"schema", schema}}}}}};
    r["400"] = {{"description", "Schema violation"}, {"content", {{"application/json", {{"schema", ref("Error")}}}}}};
    if (session) {
        r["404"] = {{"description", "Unknown session"}, {"content", {{"application/json", {{"schema", ref("Error")}}}}}};
        r["409"] = {{"description", "Session has ended"}, {"content", {{"application/json", {{"schema", ref("Error")}}}}}};
    }
    return r;
}

json op(const std::string& summary, const json& body, const json& resp) {
    json o;
    o["summary"] = summary;
    if (!body.is_null()) o["requestBody"] = body;
    o["responses"] = resp;
    return o;
}

json id_param() {
    return json::array({{{"name", "id"}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}}});
}

json number_array() { return {{"type", "array"}, {"items", {{"type", "number"}}}}; }

}  // namespace

json Api::openapi() {
    json schemas;
    schemas["GameInstance"] = {
        {"type", "object"},
        {"required", json::array({"n", "data_value"})},
        {"properties",
         {{"n", {{"type", "integer"}, {"minimum", 1}}},
          {"ransoms", number_array()},
          {"total_ransom", {{"type", "number"}}},
          {"first_round_fraction", {{"type", "number"}}},
          {"data_value", {{"type", "number"}}},
          {"recovery_cost", {{"type", "number"}}},
          {"losses", number_array()},
          {"sale_profits", number_array()},
          {"decay", {{"type", "string"}, {"enum", json::array({"quadratic", "linear", "circular", "custom"})}}},
          {"decay_table", number_array()},
          {"sale_ratio", {{"type", "number"}}}}}};
    schemas["Reputation"] = {
        {"oneOf",
         json::array({{{"type", "object"},
                       {"required", json::array({"beta_r", "betas"})},
                       {"properties", {{"beta_r", {{"type", "number"}}}, {"betas", number_array()}}}},
                      number_array(),
                      {{"type", "string"}, {"enum", json::array({"perfect", "worst"})}}})}};
    schemas["ScenarioConfig"] = {
        {"type", "object"},
        {"properties",
         {{"rounds", {{"type", "integer"}}},
          {"total_ransom", {{"type", "number"}}},
          {"first_round_fraction", {{"type", "number"}}},
          {"victim_count", {{"type", "integer"}}},
          {"value_lo", {{"type", "number"}}},
          {"value_hi", {{"type", "number"}}},
          {"decay_mix", {{"type", "array"}, {"items", {{"type", "string"}}}}},
          {"sale_ratio", {{"type", "number"}}},
          {"recovery_cost", {{"type", "number"}}},
          {"mode", {{"type", "string"}}},
          {"seed", {{"type", "integer"}}},
          {"detection_lag", {{"type", "integer"}}},
          {"epsilon_margin", {{"type", "number"}}}}}};
    schemas["Recommendation"] = {
        {"type", "object"},
        {"properties",
         {{"round", {{"type", "integer"}}},
          {"pay_loss", {{"type", "number"}}},
          {"abort_loss", {{"type", "number"}}},
          {"action", {{"type", "string"}, {"enum", json::array({"pay", "abort"})}}}}}};
    schemas["Session"] = {
        {"type", "object"},
        {"properties",
         {{"id", {{"type", "string"}}},
          {"instance", ref("GameInstance")},
          {"reputation", ref("Reputation")},
          {"seed", {{"type", "integer"}}},
          {"current_round", {{"type", "integer"}}},
          {"alive", {{"type", "boolean"}}},
          {"outcome", {{"type", "string"}}},
          {"key_recovered", {{"type", "boolean"}}},
          {"history", {{"type", "array"}, {"items", {{"type", "object"}}}}},
          {"recommendation", ref("Recommendation")}}}};
    schemas["Error"] = {
        {"type", "object"},
        {"properties",
         {{"error", {{"type", "string"}}},
          {"message", {{"type", "string"}}},
          {"violations",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"properties", {{"field", {{"type", "string"}}}, {"message", {{"type", "string"}}}}}}}}}}}};

    const json object = {{"type", "object"}};
    json paths;
    paths["/v1/solve"]["post"] =
        op("Victim best response to a reputation",
           json_body({{"type", "object"},
                      {"required", json::array({"instance", "reputation"})},
                      {"properties",
                       {{"instance", ref("GameInstance")},
                        {"reputation", ref("Reputation")},
                        {"from_round", {{"type", "integer"}}}}}}),
           responses("Policy, recommendation and attacker profit", object));
    paths["/v1/optimize"]["post"] =
        op("Optimal attacker reputation",
           json_body({{"type", "object"},
                      {"required", json::array({"instance"})},
                      {"properties", {{"instance", ref("GameInstance")}, {"epsilon_margin", {{"type", "number"}}}}}}),
           responses("Winning reputation and per-case table", object));
    paths["/v1/simulate"]["post"] =
        op("Monte Carlo comparison of reputation modes",
           json_body({{"type", "object"},
                      {"properties",
                       {{"preset", {{"type", "string"}}},
                        {"scenario", ref("ScenarioConfig")},
                        {"modes", {{"type", "array"}, {"items", {{"type", "string"}}}}}}}}),
           responses("Per-mode summaries and CSV artifact URLs", object));
    paths["/v1/sweep"]["post"] = op("Reputation or profit sweep over the total ransom", json_body(object),
                                    responses("Sweep rows", object));
    paths["/v1/sessions"]["post"] =
        op("Create a decision session",
           json_body({{"type", "object"},
                      {"required", json::array({"instance"})},
                      {"properties",
                       {{"instance", ref("GameInstance")},
                        {"reputation", ref("Reputation")},
                        {"seed", {{"type", "integer"}}}}}}),
           {{"201", {{"description", "Created session"}, {"content", {{"application/json", {{"schema", ref("Session")}}}}}}},
            {"400", {{"description", "Schema violation"}, {"content", {{"application/json", {{"schema", ref("Error")}}}}}}}});
    json get_session = op("Session state with recommendation", nullptr, responses("Session", ref("Session"), true));
    get_session["parameters"] = id_param();
    paths["/v1/sessions/{id}"]["get"] = get_session;
    json decision = op("Pay or abort the current round",
                       json_body({{"type", "object"},
                                  {"required", json::array({"action"})},
                                  {"properties", {{"action", {{"type", "string"}, {"enum", json::array({"pay", "abort"})}}}}}}),
                       responses("Updated session with the realized event", ref("Session"), true));
    decision["parameters"] = id_param();
    paths["/v1/sessions/{id}/decision"]["post"] = decision;
    json whatif = op("Policy under another reputation without changing the session",
                     json_body({{"type", "object"},
                                {"required", json::array({"reputation"})},
                                {"properties", {{"reputation", ref("Reputation")}}}}),
                     responses("Policy of the remaining rounds", object, true));
    whatif["parameters"] = id_param();
    paths["/v1/sessions/{id}/whatif"]["post"] = whatif;
    paths["/v1/artifacts/{id}/{file}"]["get"] = {
        {"summary", "CSV artifact from a simulation"},
        {"parameters", json::array({{{"name", "id"}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}},
                                    {{"name", "file"}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}}})},
        {"responses", {{"200", {{"description", "CSV"}, {"content", {{"text/csv", {{"schema", {{"type", "string"}}}}}}}}},
                       {"404", {{"description", "Unknown artifact"}}}}}};
    paths["/v1/presets"]["get"] = op("Built-in experiment presets", nullptr, responses("Preset list", object));
    paths["/v1/spec"]["get"] = op("This document", nullptr, responses("OpenAPI description", object));
    paths["/v1/health"]["get"] = op("Liveness probe", nullptr, responses("ok", object));

    json doc;
    doc["openapi"] = "3.0.3";
    doc["info"] = {{"title", "ransomgame API"}, {"version", "1.0.0"}};
    doc["paths"] = std::move(paths);
    doc["components"] = {{"schemas", std::move(schemas)}};
    return doc;
}

}  // namespace ransomgame::api
