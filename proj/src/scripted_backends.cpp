#include "pesc/scripted_backends.hpp"

#include "pesc/prompts.hpp"

namespace pesc {

namespace {

enum class PromptKind { NextCommand, Analyze, RagQuery, Other };

PromptKind classify(const ChatRequest& request) {
    for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
        if (it->role != Role::User) continue;
        const std::string& c = it->content;
        if (c.rfind(kNextCommandPromptPrefix, 0) == 0) return PromptKind::NextCommand;
        if (c.rfind(kRagPromptPrefix, 0) == 0) return PromptKind::RagQuery;
        if (c.rfind(kAnalyzePromptPrefix, 0) == 0) return PromptKind::Analyze;
        break;
    }
    return PromptKind::Other;
}

std::string last_user_content(const ChatRequest& request) {
    for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
        if (it->role == Role::User) return it->content;
    }
    return {};
}

// Deterministic filler text; repeats a hex digest of (tag, index) until the
// requested byte length is reached.
std::string filler(std::uint64_t tag, std::uint64_t index, std::size_t bytes) {
    std::uint64_t h = 1469598103934665603ull ^ tag;
    h = (h ^ index) * 1099511628211ull;
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes);
    while (out.size() < bytes) {
        h = (h ^ (out.size() + 1)) * 1099511628211ull;
        for (int i = 60; i >= 0 && out.size() < bytes; i -= 4) {
            out += digits[(h >> i) & 0xF];
        }
    }
    return out;
}

} // namespace

ChatResponse EchoBackend::do_complete(const ChatRequest& request) {
    return {last_user_content(request), 0, 0, 0};
}

ChatResponse RepeaterBackend::do_complete(const ChatRequest&) {
    return {answer_, 0, 0, 0};
}

ChatResponse RefuserBackend::do_complete(const ChatRequest&) {
    return {"I cannot help with that request. Attempting to gain unauthorized access to "
            "systems is not something I can assist with.",
            0, 0, 0};
}

ChatResponse OracleBackend::do_complete(const ChatRequest& request) {
    switch (classify(request)) {
    case PromptKind::Analyze:
        return {"The output matches the expected state. Continue with the planned next "
                "command.",
                0, 0, 0};
    case PromptKind::RagQuery:
        return {"Linux privilege escalation techniques relevant to the last command output.",
                0, 0, 0};
    case PromptKind::NextCommand:
    case PromptKind::Other:
        break;
    }
    std::string cap = next_ < script_.size() ? script_[next_++] : std::string("exec_command id");
    return {"<command>" + cap + "</command>", 0, 0, 0};
}

std::string KeyedScriptBackend::make_key(const std::vector<ChatMessage>& messages,
                                         std::optional<std::int64_t> seed) {
    std::string key = serialize_messages(messages);
    key += "|seed=";
    key += seed ? std::to_string(*seed) : "none";
    return key;
}

void KeyedScriptBackend::add(const std::vector<ChatMessage>& messages,
                             std::optional<std::int64_t> seed, std::string answer) {
    answers_[make_key(messages, seed)] = std::move(answer);
}

void KeyedScriptBackend::add_user_prompt(const std::string& prompt, std::string answer) {
    answers_[make_key({{Role::User, prompt}}, std::nullopt)] = std::move(answer);
}

ChatResponse KeyedScriptBackend::do_complete(const ChatRequest& request) {
    auto it = answers_.find(make_key(request.messages, request.seed));
    if (it != answers_.end()) return {it->second, 0, 0, 0};
    return {default_answer_, 0, 0, 0};
}

ChatResponse AdversarialBackend::do_complete(const ChatRequest& request) {
    const std::uint64_t n = static_cast<std::uint64_t>(seq_++);
    switch (classify(request)) {
    case PromptKind::Analyze:
        return {"Observed nothing conclusive. " + filler(0xA11CE, n, 2400), 0, 0, 0};
    case PromptKind::RagQuery:
        return {"Privilege escalation vectors for verbose command output.", 0, 0, 0};
    case PromptKind::NextCommand:
    case PromptKind::Other:
        break;
    }
    // A long reasoning ramble plus a command whose text alone is payload_tokens_
    // tokens long; history fills up with these lines.
    std::string prose = filler(0xBEEF, n, 2000);
    std::string payload = filler(0xC0DE, n, static_cast<std::size_t>(payload_tokens_) * 4 - 20);
    return {prose + "\n<command>exec_command echo " + payload + "</command>", 0, 0, 0};
}

} // namespace pesc
