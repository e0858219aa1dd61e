#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pesc {

enum class Role { System, User, Assistant };

struct ChatMessage {
    Role role = Role::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.8;
    int max_output_tokens = 1024;
    std::optional<std::int64_t> seed;
};

struct ChatResponse {
    std::string content;
    int tokens_in = 0;
    int tokens_out = 0;
    std::int64_t latency_ms = 0;
};

const char* role_name(Role r);

// Flat rendering of a message list, used for local token accounting and for
// keying scripted fixtures.
std::string serialize_messages(const std::vector<ChatMessage>& messages);

// Uniform chat-completion interface over remote endpoints and local test
// doubles. complete() validates the request, enforces the context window and
// fills in token counts; subclasses implement do_complete().
class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    ChatResponse complete(const ChatRequest& request);

    virtual std::string name() const = 0;
    virtual int context_window() const { return 32768; }

    std::int64_t calls() const { return calls_.load(); }

protected:
    virtual ChatResponse do_complete(const ChatRequest& request) = 0;

private:
    std::atomic<std::int64_t> calls_{0};
};

} // namespace pesc
