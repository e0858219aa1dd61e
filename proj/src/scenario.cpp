#include "pesc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "pesc/error.hpp"
#include "pesc/sim_target.hpp"

namespace pesc {

namespace {

using nlohmann::json;

std::map<std::string, std::string> to_string_map(const json& j) {
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[it.key()] = it.value().get<std::string>();
    }
    return out;
}

SuccessCondition parse_success(const json& j, const std::string& id) {
    if (!j.is_object() || !j.contains("kind")) {
        throw MalformedScenarioFile(id + ": missing success condition");
    }
    SuccessCondition s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "shell") {
        s.kind = SuccessCondition::Kind::ShellUidZero;
    } else if (kind == "credential") {
        s.kind = SuccessCondition::Kind::CredentialMatch;
        s.username = j.value("username", std::string());
        s.password = j.value("password", std::string());
        if (s.username.empty() || s.password.empty()) {
            throw MalformedScenarioFile(id + ": credential success needs username and password");
        }
    } else {
        throw MalformedScenarioFile(id + ": unknown success kind '" + kind + "'");
    }
    return s;
}

ScenarioSpec parse_one(const json& j) {
    ScenarioSpec s;
    s.id = j.value("id", std::string());
    if (s.id.empty()) throw MalformedScenarioFile("scenario without id");

    try {
        s.vuln_class = vuln_class_from_name(j.at("vuln_class").get<std::string>());
        s.name = j.at("name").get<std::string>();
        s.description = j.value("description", std::string());
        s.hint = j.at("hint").get<std::string>();
        s.lowpriv_user = j.value("lowpriv_user", std::string("lowpriv"));
        s.lowpriv_password = j.at("lowpriv_password").get<std::string>();
        s.system_name = j.value("system_name", std::string("Linux"));
        if (j.contains("initial_state")) s.initial_state = to_string_map(j.at("initial_state"));
        if (j.contains("on_tick")) {
            for (const auto& t : j.at("on_tick")) {
                s.on_tick.push_back({t.at("var").get<std::string>(),
                                     t.at("from").get<std::string>(),
                                     t.at("to").get<std::string>()});
            }
        }
        for (const auto& r : j.value("rules", json::array())) {
            CommandRule rule;
            rule.verb = r.value("verb", std::string("exec"));
            rule.pattern = r.at("pattern").get<std::string>();
            if (r.contains("requires")) rule.needs = to_string_map(r.at("requires"));
            rule.response = r.value("response", std::string());
            if (r.contains("sets")) rule.sets = to_string_map(r.at("sets"));
            rule.grants_root = r.value("grants_root", false);
            rule.vuln_step = r.value("vuln_step", false);
            if (rule.verb != "exec" && rule.verb != "credential") {
                throw MalformedScenarioFile(s.id + ": unknown rule verb '" + rule.verb + "'");
            }
            s.rules.push_back(std::move(rule));
        }
        s.success = parse_success(j.value("success", json()), s.id);
        if (j.contains("almost_there_when")) {
            s.almost_there_when = to_string_map(j.at("almost_there_when"));
        }
        for (const auto& line : j.value("oracle", json::array())) {
            s.oracle.push_back(line.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw MalformedScenarioFile(s.id + ": " + e.what());
    }

    if (s.hint.empty()) throw MalformedScenarioFile(s.id + ": hint must be non-empty");
    if (s.lowpriv_password.empty()) {
        throw MalformedScenarioFile(s.id + ": lowpriv_password must be non-empty");
    }
    if (s.oracle.empty()) {
        throw MalformedScenarioFile(s.id + ": oracle exploit chain must be non-empty");
    }
    return s;
}

} // namespace

const char* vuln_class_name(VulnClass c) {
    switch (c) {
    case VulnClass::SuidSudo: return "suid_sudo";
    case VulnClass::PrivGroupDocker: return "docker_group";
    case VulnClass::PasswordHygiene: return "password_hygiene";
    case VulnClass::InfoDisclosure: return "info_disclosure";
    case VulnClass::CronBased: return "cron";
    }
    return "suid_sudo";
}

VulnClass vuln_class_from_name(const std::string& name) {
    if (name == "suid_sudo") return VulnClass::SuidSudo;
    if (name == "docker_group") return VulnClass::PrivGroupDocker;
    if (name == "password_hygiene") return VulnClass::PasswordHygiene;
    if (name == "info_disclosure") return VulnClass::InfoDisclosure;
    if (name == "cron") return VulnClass::CronBased;
    throw MalformedScenarioFile("unknown vulnerability class '" + name + "'");
}

std::vector<ScenarioSpec> parse_scenarios(const std::string& content) {
    json root;
    try {
        root = json::parse(content);
    } catch (const json::exception& e) {
        throw MalformedScenarioFile(std::string("invalid JSON: ") + e.what());
    }
    if (!root.contains("scenarios") || !root.at("scenarios").is_array()) {
        throw MalformedScenarioFile("file has no 'scenarios' array");
    }

    std::vector<ScenarioSpec> specs;
    std::set<std::string> ids;
    for (const auto& j : root.at("scenarios")) {
        ScenarioSpec s = parse_one(j);
        if (!ids.insert(s.id).second) {
            throw MalformedScenarioFile("duplicate scenario id '" + s.id + "'");
        }
        validate_scenario_exploitability(s);
        specs.push_back(std::move(s));
    }
    return specs;
}

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedScenarioFile("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenarios(buf.str());
}

const ScenarioSpec& find_scenario(const std::vector<ScenarioSpec>& specs, const std::string& id) {
    for (const auto& s : specs) {
        if (s.id == id) return s;
    }
    throw ConfigError("unknown scenario id '" + id + "'");
}

} // namespace pesc
