#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pesc/backend.hpp"

namespace pesc {

// Deterministic local backends used by tests and desk-scale benchmarks.
// All of them are referentially transparent in (messages, seed) except the
// stateful OracleBackend, which is constructed fresh per run.

// Returns the last user message verbatim.
class EchoBackend final : public ChatBackend {
public:
    std::string name() const override { return "echo"; }

protected:
    ChatResponse do_complete(const ChatRequest& request) override;
};

// Always returns the same answer, by default a single tagged `id` command.
class RepeaterBackend final : public ChatBackend {
public:
    explicit RepeaterBackend(std::string answer = "<command>exec_command id</command>")
        : answer_(std::move(answer)) {}

    std::string name() const override { return "repeater"; }

protected:
    ChatResponse do_complete(const ChatRequest&) override;

private:
    std::string answer_;
};

// Emits refusal prose with no command tags; exercises the empty-extraction path.
class RefuserBackend final : public ChatBackend {
public:
    std::string name() const override { return "refuser"; }

protected:
    ChatResponse do_complete(const ChatRequest&) override;
};

// Replays a known exploit sequence, one capability line per next-command
// prompt. Analysis and retrieval-query prompts get short canned answers.
// Stateful: use one instance per run.
class OracleBackend final : public ChatBackend {
public:
    explicit OracleBackend(std::vector<std::string> capability_lines)
        : script_(std::move(capability_lines)) {}

    std::string name() const override { return "oracle"; }

protected:
    ChatResponse do_complete(const ChatRequest& request) override;

private:
    std::vector<std::string> script_;
    std::size_t next_ = 0;
};

// Keyed fixture backend: exact (messages, seed) in, scripted text out.
class KeyedScriptBackend final : public ChatBackend {
public:
    explicit KeyedScriptBackend(std::string default_answer = "")
        : default_answer_(std::move(default_answer)) {}

    static std::string make_key(const std::vector<ChatMessage>& messages,
                                std::optional<std::int64_t> seed);

    void add(const std::vector<ChatMessage>& messages,
             std::optional<std::int64_t> seed, std::string answer);
    void add_user_prompt(const std::string& prompt, std::string answer);

    std::string name() const override { return "scripted"; }

protected:
    ChatResponse do_complete(const ChatRequest& request) override;

private:
    std::unordered_map<std::string, std::string> answers_;
    std::string default_answer_;
};

// Emits very large answers carrying very long command lines, to stress the
// context budget enforcement. Deterministic given the call order. Stateful:
// use one instance per run.
class AdversarialBackend final : public ChatBackend {
public:
    explicit AdversarialBackend(int payload_tokens = 4000)
        : payload_tokens_(payload_tokens) {}

    std::string name() const override { return "adversarial"; }

protected:
    ChatResponse do_complete(const ChatRequest& request) override;

private:
    int payload_tokens_;
    std::int64_t seq_ = 0;
};

} // namespace pesc
