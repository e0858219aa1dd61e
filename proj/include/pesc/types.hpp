#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pesc/treatments.hpp"

namespace pesc {

// The two actions the agent is allowed to take against a target.
enum class CapabilityKind { ExecCommand, TestCredential };

struct Capability {
    CapabilityKind kind = CapabilityKind::ExecCommand;
    std::string command;   // ExecCommand only
    std::string username;  // TestCredential only
    std::string password;  // TestCredential only

    // Factories validate the non-empty field invariants.
    static Capability exec(std::string command);
    static Capability credential(std::string username, std::string password);

    // Render as the single-line form used in prompts and history,
    // e.g. "exec_command id" or "test_credential lowpriv trustno1".
    std::string line() const;

    bool operator==(const Capability&) const = default;
};

enum class RootSignalKind { RootShell, RootPassword };

struct RootSignal {
    RootSignalKind kind = RootSignalKind::RootShell;
    std::string password;  // RootPassword only

    bool operator==(const RootSignal&) const = default;
};

struct ExecutionResult {
    Capability capability;
    std::string output;
    bool truncated = false;  // output was cut to the per-command byte budget
    std::int64_t wall_time_ms = 0;
    std::optional<RootSignal> root_signal;

    bool operator==(const ExecutionResult&) const = default;
};

// Everything observed and produced during one loop iteration.
struct ActionRecord {
    int iteration = 0;  // 1-based, contiguous
    std::optional<std::string> cot_text;
    std::vector<Capability> capabilities;
    std::vector<ExecutionResult> results;
    std::optional<std::string> rag_query;
    std::optional<std::string> retrieved_text;
    std::vector<std::string> retrieved_sources;
    std::optional<std::string> analysis;
    // Keys: next_command_prompt, next_command_answer, analysis_prompt,
    // analysis_answer, rag_prompt, rag_answer. Counted with the local tokenizer.
    std::map<std::string, int> token_counts;
    std::int64_t ts_start_ms = 0;
    std::int64_t ts_end_ms = 0;
    int hallucinations = 0;       // command spans with an unknown verb
    int repeated_commands = 0;    // capabilities already executed earlier in the run

    bool operator==(const ActionRecord&) const = default;
};

enum class EndState { RootAchieved, IterationLimit, BackendFailure, TargetFailure };

struct RunOutcome {
    bool success = false;
    int iterations_used = 0;
    EndState end_state = EndState::IterationLimit;
    std::int64_t total_tokens_in = 0;   // backend-reported where available
    std::int64_t total_tokens_out = 0;

    bool operator==(const RunOutcome&) const = default;
};

struct RunConfig {
    std::string scenario_id;
    TreatmentSet treatments;
    int max_iterations = 40;
    double temperature = 0.8;
    int context_budget = 8192;  // tokens
    int repetition_index = 0;
    std::int64_t random_seed = 0;

    // Throws ConfigError when bounds are violated.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

const char* end_state_name(EndState s);
EndState end_state_from_name(const std::string& name);

} // namespace pesc
