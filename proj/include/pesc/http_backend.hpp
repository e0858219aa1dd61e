#pragma once

#include <string>

#include "pesc/backend.hpp"

namespace pesc {

// OpenAI-style chat-completions endpoint. The bearer token is read from the
// environment variable named in auth_env; it is never logged or persisted.
struct HttpBackendConfig {
    std::string base_url = "http://127.0.0.1:8080";
    std::string path = "/v1/chat/completions";
    std::string model = "local";
    std::string auth_env = "PESC_API_KEY";
    int context_window = 8192;
    int max_attempts = 3;
    int backoff_ms = 1000;  // doubled after each failed attempt
    int timeout_s = 120;
};

class HttpChatBackend final : public ChatBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {}

    std::string name() const override { return "http:" + config_.model; }
    int context_window() const override { return config_.context_window; }

protected:
    ChatResponse do_complete(const ChatRequest& request) override;

private:
    HttpBackendConfig config_;
};

} // namespace pesc
