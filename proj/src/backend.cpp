#include "pesc/backend.hpp"

#include <algorithm>

#include "pesc/error.hpp"
#include "pesc/tokens.hpp"

namespace pesc {

const char* role_name(Role r) {
    switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    }
    return "user";
}

std::string serialize_messages(const std::vector<ChatMessage>& messages) {
    std::string out;
    for (const auto& m : messages) {
        out += role_name(m.role);
        out += ": ";
        out += m.content;
        out += '\n';
    }
    return out;
}

ChatResponse ChatBackend::complete(const ChatRequest& request) {
    if (request.messages.empty()) {
        throw MalformedResponse("chat request must contain at least one message");
    }
    const int prompt_tokens = count_tokens(serialize_messages(request.messages));
    if (prompt_tokens > context_window()) {
        throw ContextOverflow("request of " + std::to_string(prompt_tokens) +
                              " tokens exceeds context window of " +
                              std::to_string(context_window()));
    }

    calls_.fetch_add(1);
    ChatResponse response = do_complete(request);

    if (response.tokens_in <= 0) {
        response.tokens_in = std::max(1, prompt_tokens);
    }
    if (response.tokens_out <= 0) {
        response.tokens_out = count_tokens(response.content);
    }
    return response;
}

} // namespace pesc
