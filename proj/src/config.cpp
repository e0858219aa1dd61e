#include "pesc/config.hpp"

#include <fstream>
#include <sstream>

#include "pesc/error.hpp"

namespace pesc {

namespace {

std::string strip(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

} // namespace

AppConfig parse_app_config(const std::string& content) {
    AppConfig cfg;
    std::istringstream in(content);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = strip(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = strip(t.substr(0, eq));
        std::string value = unquote(strip(t.substr(eq + 1)));

        if (section == "backend") {
            if (key == "url") cfg.backend.base_url = value;
            else if (key == "path") cfg.backend.path = value;
            else if (key == "model") cfg.backend.model = value;
            else if (key == "auth_env") cfg.backend.auth_env = value;
            else if (key == "context_window") cfg.backend.context_window = std::stoi(value);
            else if (key == "max_attempts") cfg.backend.max_attempts = std::stoi(value);
            else if (key == "backoff_ms") cfg.backend.backoff_ms = std::stoi(value);
            else if (key == "timeout_s") cfg.backend.timeout_s = std::stoi(value);
            else throw ConfigError("unknown [backend] key '" + key + "'");
        } else if (section == "paths") {
            if (key == "scenarios") cfg.scenarios_path = value;
            else if (key == "svp") cfg.svp_path = value;
            else if (key == "corpus") cfg.corpus_dir = value;
            else if (key == "store") cfg.store_path = value;
            else if (key == "results") cfg.results_dir = value;
            else throw ConfigError("unknown [paths] key '" + key + "'");
        } else if (section == "target") {
            if (key == "host") cfg.target.host = value;
            else if (key == "port") cfg.target.port = std::stoi(value);
            else if (key == "username") cfg.target.username = value;
            else if (key == "password_env") cfg.target.password_env = value;
            else if (key == "key_path") cfg.target.key_path = value;
            else if (key == "system_name") cfg.target.system_name = value;
            else if (key == "hint") cfg.target.hint = value;
            else if (key == "reset_command") cfg.target.reset_command = value;
            else if (key == "command_timeout_s") cfg.target.command_timeout_s = std::stoi(value);
            else throw ConfigError("unknown [target] key '" + key + "'");
        } else {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside a [backend]/[paths]/[target] section");
        }
    }
    return cfg;
}

AppConfig load_app_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_app_config(buf.str());
}

} // namespace pesc
