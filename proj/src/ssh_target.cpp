#include "pesc/ssh_target.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "pesc/error.hpp"

namespace pesc {

namespace {

bool command_exists(const char* name) {
    std::string probe = std::string("command -v ") + name + " >/dev/null 2>&1";
    return std::system(probe.c_str()) == 0;
}

} // namespace

SshTarget::SshTarget(SshTargetConfig config) : config_(std::move(config)) {
    if (config_.host.empty()) throw ConfigError("ssh target requires a host");
}

std::string SshTarget::password() const {
    if (const char* p = std::getenv(config_.password_env.c_str()); p && *p) return p;
    return {};
}

std::vector<std::string> build_ssh_argv(const SshTargetConfig& config,
                                        const std::string& remote_command,
                                        const std::string& as_user, bool with_password) {
    std::vector<std::string> argv;
    if (with_password) {
        // sshpass reads the password from the SSHPASS environment variable.
        argv.push_back("sshpass");
        argv.push_back("-e");
    }
    argv.push_back("ssh");
    argv.push_back("-p");
    argv.push_back(std::to_string(config.port));
    argv.push_back("-o");
    argv.push_back("StrictHostKeyChecking=no");
    argv.push_back("-o");
    argv.push_back("UserKnownHostsFile=/dev/null");
    argv.push_back("-o");
    argv.push_back("ConnectTimeout=10");
    argv.push_back("-o");
    argv.push_back("NumberOfPasswordPrompts=1");
    if (!with_password) {
        argv.push_back("-o");
        argv.push_back("BatchMode=yes");
    }
    if (!config.key_path.empty()) {
        argv.push_back("-i");
        argv.push_back(config.key_path);
    }
    argv.push_back(as_user + "@" + config.host);
    argv.push_back("--");
    argv.push_back(remote_command);
    return argv;
}

SubprocessResult run_subprocess(const std::vector<std::string>& argv,
                                const std::vector<std::pair<std::string, std::string>>& extra_env,
                                int timeout_s, std::size_t output_byte_budget) {
    int pipefd[2];
    if (pipe(pipefd) != 0) throw SessionLost("pipe() failed");

    pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        throw SessionLost("fork() failed");
    }
    if (pid == 0) {
        // Child: stdout+stderr into the pipe, stdin from /dev/null.
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, STDIN_FILENO);
        for (const auto& [k, v] : extra_env) setenv(k.c_str(), v.c_str(), 1);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    close(pipefd[1]);

    SubprocessResult result;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s);
    char buf[4096];
    bool open_pipe = true;
    while (open_pipe) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - std::chrono::steady_clock::now())
                             .count();
        if (remaining <= 0) {
            result.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        pollfd pfd{pipefd[0], POLLIN, 0};
        int rc = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 1000)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) continue;
        ssize_t n = read(pipefd[0], buf, sizeof(buf));
        if (n <= 0) {
            open_pipe = false;
        } else if (result.output.size() < output_byte_budget) {
            result.output.append(buf, buf + std::min<std::size_t>(
                                               n, output_byte_budget - result.output.size()));
        }
    }
    close(pipefd[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (!result.timed_out) {
        result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    return result;
}

ExecutionResult SshTarget::execute(const Capability& capability) {
    const bool credential = capability.kind == CapabilityKind::TestCredential;
    const std::string as_user = credential ? capability.username : config_.username;
    // A credential test just needs an authenticated channel; `id -u` also
    // tells us whether the account is root.
    const std::string remote = credential ? "id -u" : capability.command;

    std::string pass = credential ? capability.password : password();
    bool with_password = !pass.empty();
    if (with_password && !command_exists("sshpass")) {
        if (credential) {
            throw SessionLost("test_credential on a real target requires sshpass");
        }
        with_password = false;  // fall back to key/agent auth
    }

    std::vector<std::pair<std::string, std::string>> env;
    if (with_password) env.emplace_back("SSHPASS", pass);

    const auto argv = build_ssh_argv(config_, remote, as_user, with_password);
    const auto t0 = std::chrono::steady_clock::now();
    SubprocessResult sub = run_subprocess(argv, env, config_.command_timeout_s, kOutputByteBudget);
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

    if (sub.timed_out) {
        throw CommandTimeout("command exceeded " + std::to_string(config_.command_timeout_s) +
                             "s: " + capability.line());
    }

    ExecutionResult r;
    r.capability = capability;
    r.output = sub.output;
    r.truncated = sub.output.size() >= kOutputByteBudget;
    r.wall_time_ms = wall;

    if (credential) {
        const bool authenticated = sub.exit_status == 0;
        const bool is_root = authenticated && sub.output.find('0') == 0;
        if (authenticated && (capability.username == config_.target_user || is_root)) {
            r.output = "Authentication successful: '" + capability.username + "' is valid.";
            r.root_signal = RootSignal{RootSignalKind::RootPassword, capability.password};
        } else if (authenticated) {
            r.output = "Authentication successful for '" + capability.username +
                       "', but this user is not root.";
        } else if (sub.output.find("Permission denied") != std::string::npos) {
            r.output = "Authentication failed: invalid credentials.";
        } else if (sub.exit_status == 255) {
            throw SessionLost("ssh transport failure: " + sub.output.substr(0, 200));
        } else {
            r.output = "Authentication failed: invalid credentials.";
        }
        return r;
    }

    if (sub.exit_status == 255 && sub.output.find("Permission denied") == std::string::npos) {
        throw SessionLost("ssh transport failure: " + sub.output.substr(0, 200));
    }
    // Root-shell detection on a real host: the executed command line reports
    // uid 0 output (e.g. `id` after a successful escalation).
    if (r.output.find("uid=0(") != std::string::npos) {
        r.root_signal = RootSignal{RootSignalKind::RootShell, {}};
    }
    return r;
}

void SshTarget::reset() {
    if (config_.reset_command.empty()) return;
    if (std::system(config_.reset_command.c_str()) != 0) {
        throw ResetFailed("reset command failed: " + config_.reset_command);
    }
}

} // namespace pesc
