#include "pesc/types.hpp"

#include "pesc/error.hpp"

namespace pesc {

Capability Capability::exec(std::string command) {
    if (command.empty()) {
        throw MalformedCapability("exec_command requires a non-empty command");
    }
    Capability c;
    c.kind = CapabilityKind::ExecCommand;
    c.command = std::move(command);
    return c;
}

Capability Capability::credential(std::string username, std::string password) {
    if (username.empty() || password.empty()) {
        throw MalformedCapability("test_credential requires a username and a password");
    }
    Capability c;
    c.kind = CapabilityKind::TestCredential;
    c.username = std::move(username);
    c.password = std::move(password);
    return c;
}

std::string Capability::line() const {
    if (kind == CapabilityKind::ExecCommand) {
        return "exec_command " + command;
    }
    return "test_credential " + username + " " + password;
}

void RunConfig::validate() const {
    if (scenario_id.empty()) throw ConfigError("scenario_id must be set");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (context_budget < 2048) throw ConfigError("context_budget must be >= 2048 tokens");
    if (temperature < 0.0 || temperature > 2.0) throw ConfigError("temperature must be in [0,2]");
}

const char* end_state_name(EndState s) {
    switch (s) {
    case EndState::RootAchieved: return "root_achieved";
    case EndState::IterationLimit: return "iteration_limit";
    case EndState::BackendFailure: return "backend_failure";
    case EndState::TargetFailure: return "target_failure";
    }
    return "iteration_limit";
}

EndState end_state_from_name(const std::string& name) {
    if (name == "root_achieved") return EndState::RootAchieved;
    if (name == "iteration_limit") return EndState::IterationLimit;
    if (name == "backend_failure") return EndState::BackendFailure;
    if (name == "target_failure") return EndState::TargetFailure;
    throw MalformedTraceFile("unknown end state '" + name + "'");
}

} // namespace pesc
