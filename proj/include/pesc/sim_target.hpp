#pragma once

#include <map>
#include <regex>
#include <string>
#include <vector>

#include "pesc/scenario.hpp"
#include "pesc/target.hpp"

namespace pesc {

// Deterministic rule-engine host: execute() is a pure transition function of
// (scenario state, capability). Unmatched commands fall back to built-in
// recon responses (id, whoami) and then to a shell-style error.
class SimTarget final : public Target {
public:
    explicit SimTarget(ScenarioSpec spec);

    ExecutionResult execute(const Capability& capability) override;
    void reset() override;
    void end_iteration() override;
    bool almost_there() const override;

    std::string username() const override { return spec_.lowpriv_user; }
    std::string password() const override { return spec_.lowpriv_password; }
    std::string system_name() const override { return spec_.system_name; }
    std::string hint() const override { return spec_.hint; }

    const ScenarioSpec& scenario() const { return spec_; }
    const std::map<std::string, std::string>& state() const { return state_; }
    int clock() const { return clock_; }

    static constexpr std::size_t kOutputByteBudget = 16 * 1024;

private:
    ExecutionResult run_exec(const Capability& capability);
    ExecutionResult run_credential(const Capability& capability);
    ExecutionResult finish(const Capability& capability, std::string output,
                           bool grants_root) const;

    ScenarioSpec spec_;
    std::vector<std::regex> compiled_;
    std::map<std::string, std::string> state_;
    int clock_ = 0;
};

// Load-time exploitability validation: the oracle chain must reach root on a
// fresh instance, and an exhaustive search over the rule graph must show that
// root is unreachable without traversing a vuln_step rule. Throws
// MalformedScenarioFile.
void validate_scenario_exploitability(const ScenarioSpec& spec);

} // namespace pesc
