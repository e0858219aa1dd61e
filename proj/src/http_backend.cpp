#include "pesc/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "pesc/error.hpp"

namespace pesc {

namespace {

using nlohmann::json;

json to_wire(const ChatRequest& request, const std::string& model) {
    json body;
    body["model"] = model;
    json msgs = json::array();
    for (const auto& m : request.messages) {
        msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    }
    body["messages"] = std::move(msgs);
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    if (request.seed) body["seed"] = *request.seed;
    return body;
}

ChatResponse parse_wire(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw MalformedResponse(std::string("invalid JSON in completion response: ") + e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw MalformedResponse("completion response has no choices");
    }
    const json& msg = j["choices"][0].value("message", json::object());
    if (!msg.contains("content") || !msg["content"].is_string()) {
        throw MalformedResponse("completion response has no message content");
    }
    ChatResponse out;
    out.content = msg["content"].get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
        out.tokens_in = j["usage"].value("prompt_tokens", 0);
        out.tokens_out = j["usage"].value("completion_tokens", 0);
    }
    return out;
}

} // namespace

ChatResponse HttpChatBackend::do_complete(const ChatRequest& request) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(std::min(config_.timeout_s, 15), 0);
    client.set_read_timeout(config_.timeout_s, 0);
    client.set_write_timeout(config_.timeout_s, 0);

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.auth_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const std::string body = to_wire(request, config_.model).dump();

    int backoff = config_.backoff_ms;
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        auto t0 = std::chrono::steady_clock::now();
        auto res = client.Post(config_.path, headers, body, "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        if (res && res->status == 200) {
            ChatResponse out = parse_wire(res->body);
            out.latency_ms = elapsed;
            return out;
        }
        if (res && res->status >= 400 && res->status < 500) {
            // Client errors are not transient; do not retry.
            throw BackendUnreachable("completion endpoint returned status " +
                                     std::to_string(res->status));
        }
        last_error = res ? "status " + std::to_string(res->status)
                         : "transport error " + httplib::to_string(res.error());
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
    }
    throw BackendUnreachable("completion request failed after " +
                             std::to_string(config_.max_attempts) + " attempts (" + last_error +
                             ")");
}

} // namespace pesc
