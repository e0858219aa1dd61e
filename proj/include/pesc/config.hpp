#pragma once

#include <filesystem>
#include <string>

#include "pesc/http_backend.hpp"
#include "pesc/ssh_target.hpp"

namespace pesc {

// Operator configuration: endpoints, paths, target connection. TOML-style
// key = value lines under [backend] / [paths] / [target] sections. Secrets
// are named by environment variable only.
struct AppConfig {
    HttpBackendConfig backend;
    SshTargetConfig target;

    std::string scenarios_path = "data/scenarios.json";
    std::string svp_path = "data/svp.txt";
    std::string corpus_dir = "data/corpus";
    std::string store_path = "knowledge.store";
    std::string results_dir = "results";
};

AppConfig parse_app_config(const std::string& content);
AppConfig load_app_config(const std::filesystem::path& path);

} // namespace pesc
