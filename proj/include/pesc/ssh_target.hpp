#pragma once

#include <string>
#include <vector>

#include "pesc/target.hpp"

namespace pesc {

// Real host reached through the OpenSSH client, one exec channel per
// command. Password auth requires sshpass; the password itself only ever
// travels through the environment variable named in password_env.
struct SshTargetConfig {
    std::string host;
    int port = 22;
    std::string username = "lowpriv";
    std::string password_env = "PESC_SSH_PASSWORD";
    std::string key_path;
    std::string system_name = "Linux";
    std::string hint;
    std::string reset_command;  // external snapshot-restore hook, run on reset()
    std::string target_user = "root";
    int command_timeout_s = 60;
};

class SshTarget final : public Target {
public:
    explicit SshTarget(SshTargetConfig config);

    ExecutionResult execute(const Capability& capability) override;
    void reset() override;

    std::string username() const override { return config_.username; }
    std::string password() const override;
    std::string system_name() const override { return config_.system_name; }
    std::string hint() const override { return config_.hint; }

    static constexpr std::size_t kOutputByteBudget = 16 * 1024;

private:
    SshTargetConfig config_;
};

// Exposed for tests: the argv used to run `remote_command` as `as_user`.
std::vector<std::string> build_ssh_argv(const SshTargetConfig& config,
                                        const std::string& remote_command,
                                        const std::string& as_user, bool with_password);

// Runs argv with stdout+stderr captured, killing the process after
// timeout_s. Returns exit status (or -1 on timeout).
struct SubprocessResult {
    int exit_status = -1;
    bool timed_out = false;
    std::string output;
};
SubprocessResult run_subprocess(const std::vector<std::string>& argv,
                                const std::vector<std::pair<std::string, std::string>>& extra_env,
                                int timeout_s, std::size_t output_byte_budget);

} // namespace pesc
