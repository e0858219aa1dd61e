#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pesc {

enum class VulnClass { SuidSudo, PrivGroupDocker, PasswordHygiene, InfoDisclosure, CronBased };

const char* vuln_class_name(VulnClass c);
VulnClass vuln_class_from_name(const std::string& name);

// One simulated-shell behavior: if the capability matches `pattern` (regex
// over the command text, or "<username> <password>" for credential rules)
// and every `needs` entry matches the current state, respond with
// `response`, apply `sets`, and optionally signal root. Rules are evaluated
// in order; first match wins.
struct CommandRule {
    std::string verb = "exec";  // "exec" or "credential"
    std::string pattern;
    std::map<std::string, std::string> needs;  // state preconditions
    std::string response;
    std::map<std::string, std::string> sets;
    bool grants_root = false;
    bool vuln_step = false;  // exercising the planted vulnerability
};

// Applied once per iteration tick: state[var] moves from -> to. Models
// cron-style delayed effects.
struct TickTransition {
    std::string var;
    std::string from;
    std::string to;
};

struct SuccessCondition {
    enum class Kind { ShellUidZero, CredentialMatch };
    Kind kind = Kind::ShellUidZero;
    std::string username;  // CredentialMatch only
    std::string password;  // CredentialMatch only
};

// A deterministic simulated vulnerable host.
struct ScenarioSpec {
    std::string id;  // test-1 .. test-12 in the shipped file
    VulnClass vuln_class = VulnClass::SuidSudo;
    std::string name;
    std::string description;
    std::string hint;
    std::string lowpriv_user = "lowpriv";
    std::string lowpriv_password;
    std::string system_name = "Linux";
    std::map<std::string, std::string> initial_state;
    std::vector<TickTransition> on_tick;
    std::vector<CommandRule> rules;
    SuccessCondition success;
    // Penultimate-state predicate: all pairs must match the final state.
    std::map<std::string, std::string> almost_there_when;
    // Known exploit chain (capability lines), replayed by the oracle backend
    // and by load-time validation.
    std::vector<std::string> oracle;
};

// Parses and validates a scenario file. Structural problems and scenarios
// whose oracle chain fails to reach root raise MalformedScenarioFile.
std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path);
std::vector<ScenarioSpec> parse_scenarios(const std::string& content);

const ScenarioSpec& find_scenario(const std::vector<ScenarioSpec>& specs, const std::string& id);

} // namespace pesc
