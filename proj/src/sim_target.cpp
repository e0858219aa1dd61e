#include "pesc/sim_target.hpp"

#include <deque>
#include <set>

#include "pesc/error.hpp"
#include "pesc/prompts.hpp"

namespace pesc {

namespace {

bool state_satisfies(const std::map<std::string, std::string>& state,
                     const std::map<std::string, std::string>& needs) {
    for (const auto& [k, v] : needs) {
        auto it = state.find(k);
        if (it == state.end() || it->second != v) return false;
    }
    return true;
}

std::string first_word(const std::string& command) {
    std::size_t b = command.find_first_not_of(" \t");
    if (b == std::string::npos) return command;
    std::size_t e = command.find_first_of(" \t", b);
    return command.substr(b, e == std::string::npos ? std::string::npos : e - b);
}

void apply_ticks(const ScenarioSpec& spec, std::map<std::string, std::string>& state) {
    for (const auto& t : spec.on_tick) {
        auto it = state.find(t.var);
        if (it != state.end() && it->second == t.from) {
            it->second = t.to;
        }
    }
}

} // namespace

SimTarget::SimTarget(ScenarioSpec spec) : spec_(std::move(spec)), state_(spec_.initial_state) {
    compiled_.reserve(spec_.rules.size());
    for (const auto& rule : spec_.rules) {
        try {
            compiled_.emplace_back(rule.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw MalformedScenarioFile(spec_.id + ": bad rule pattern '" + rule.pattern +
                                        "': " + e.what());
        }
    }
}

void SimTarget::reset() {
    state_ = spec_.initial_state;
    clock_ = 0;
}

void SimTarget::end_iteration() {
    ++clock_;
    apply_ticks(spec_, state_);
}

bool SimTarget::almost_there() const {
    if (spec_.almost_there_when.empty()) return false;
    return state_satisfies(state_, spec_.almost_there_when);
}

ExecutionResult SimTarget::finish(const Capability& capability, std::string output,
                                  bool grants_root) const {
    ExecutionResult r;
    r.capability = capability;
    if (output.size() > kOutputByteBudget) {
        output.resize(kOutputByteBudget);
        r.truncated = true;
    }
    r.output = std::move(output);
    r.wall_time_ms = 0;
    if (grants_root) {
        r.root_signal = RootSignal{RootSignalKind::RootShell, {}};
    }
    return r;
}

ExecutionResult SimTarget::execute(const Capability& capability) {
    if (capability.kind == CapabilityKind::TestCredential) {
        return run_credential(capability);
    }
    return run_exec(capability);
}

ExecutionResult SimTarget::run_exec(const Capability& capability) {
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
        const CommandRule& rule = spec_.rules[i];
        if (rule.verb != "exec") continue;
        if (!state_satisfies(state_, rule.needs)) continue;
        if (!std::regex_search(capability.command, compiled_[i])) continue;

        for (const auto& [k, v] : rule.sets) state_[k] = v;
        return finish(capability, rule.response, rule.grants_root);
    }

    // Built-in recon fallbacks, overridable by scenario rules.
    const std::string word = first_word(capability.command);
    if (capability.command == "id" || word == "id") {
        return finish(capability,
                      "uid=1001(" + spec_.lowpriv_user + ") gid=1001(" + spec_.lowpriv_user +
                          ") groups=1001(" + spec_.lowpriv_user + ")",
                      false);
    }
    if (word == "whoami") {
        return finish(capability, spec_.lowpriv_user, false);
    }

    return finish(capability, "sh: " + word + ": command not found", false);
}

ExecutionResult SimTarget::run_credential(const Capability& capability) {
    const std::string probe = capability.username + " " + capability.password;
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
        const CommandRule& rule = spec_.rules[i];
        if (rule.verb != "credential") continue;
        if (!state_satisfies(state_, rule.needs)) continue;
        if (!std::regex_search(probe, compiled_[i])) continue;
        // Credential checks never mutate state.
        return finish(capability, rule.response, rule.grants_root);
    }

    const SuccessCondition& s = spec_.success;
    if (s.kind == SuccessCondition::Kind::CredentialMatch && capability.username == s.username &&
        capability.password == s.password) {
        ExecutionResult r = finish(
            capability, "Authentication successful: '" + capability.username + "' is valid.",
            false);
        r.root_signal = RootSignal{RootSignalKind::RootPassword, capability.password};
        return r;
    }
    if (capability.username == spec_.lowpriv_user &&
        capability.password == spec_.lowpriv_password) {
        return finish(capability,
                      "Authentication successful for '" + capability.username +
                          "', but this user is not root.",
                      false);
    }
    return finish(capability, "Authentication failed: invalid credentials.", false);
}

void validate_scenario_exploitability(const ScenarioSpec& spec) {
    // 1. The oracle chain must reach root, one capability per iteration.
    SimTarget target(spec);
    bool achieved = false;
    for (const auto& line : spec.oracle) {
        auto cap = parse_capability_line(line);
        if (!cap) {
            throw MalformedScenarioFile(spec.id + ": unparsable oracle line '" + line + "'");
        }
        ExecutionResult r = target.execute(*cap);
        if (r.root_signal) {
            achieved = true;
            break;
        }
        target.end_iteration();
    }
    if (!achieved) {
        throw MalformedScenarioFile(spec.id + ": oracle chain does not reach root");
    }

    // 2. Exhaustive search over the rule graph restricted to non-vuln rules:
    // no reachable state may enable a grants_root rule that is not itself a
    // vuln step. This proves root is unreachable without traversing the
    // planted vulnerability.
    std::set<std::map<std::string, std::string>> seen;
    std::deque<std::map<std::string, std::string>> queue;
    queue.push_back(spec.initial_state);
    seen.insert(spec.initial_state);

    while (!queue.empty()) {
        auto state = queue.front();
        queue.pop_front();

        for (const auto& rule : spec.rules) {
            if (!rule.grants_root || rule.vuln_step) continue;
            if (state_satisfies(state, rule.needs)) {
                throw MalformedScenarioFile(spec.id + ": rule '" + rule.pattern +
                                            "' grants root without the planted vulnerability");
            }
        }

        auto enqueue = [&](std::map<std::string, std::string> next) {
            if (seen.insert(next).second) queue.push_back(std::move(next));
        };

        for (const auto& rule : spec.rules) {
            if (rule.vuln_step || rule.sets.empty()) continue;
            if (!state_satisfies(state, rule.needs)) continue;
            auto next = state;
            for (const auto& [k, v] : rule.sets) next[k] = v;
            enqueue(std::move(next));
        }
        auto ticked = state;
        apply_ticks(spec, ticked);
        if (ticked != state) enqueue(std::move(ticked));
    }
}

} // namespace pesc
