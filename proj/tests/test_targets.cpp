#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "pesc/error.hpp"
#include "pesc/prompts.hpp"
#include "pesc/scenario.hpp"
#include "pesc/sim_target.hpp"
#include "pesc/ssh_target.hpp"

using namespace pesc;

namespace {

const std::vector<ScenarioSpec>& shipped() {
    static std::vector<ScenarioSpec> specs =
        load_scenarios(std::string(PESC_DATA_DIR) + "/scenarios.json");
    return specs;
}

// Replays the oracle chain, one capability per iteration, and returns the
// outputs. Used as a trace-equality oracle for determinism checks.
std::vector<std::string> replay(SimTarget& target, const std::vector<std::string>& lines) {
    std::vector<std::string> outputs;
    for (const auto& line : lines) {
        auto cap = parse_capability_line(line);
        REQUIRE(cap);
        ExecutionResult r = target.execute(*cap);
        outputs.push_back(r.output);
        if (r.root_signal) break;
        target.end_iteration();
    }
    return outputs;
}

} // namespace

TEST_CASE("shipped file defines 12 scenarios with the expected class split") {
    const auto& specs = shipped();
    REQUIRE(specs.size() == 12);

    std::map<VulnClass, int> counts;
    for (const auto& s : specs) ++counts[s.vuln_class];
    CHECK(counts[VulnClass::SuidSudo] == 3);
    CHECK(counts[VulnClass::PasswordHygiene] == 3);
    CHECK(counts[VulnClass::InfoDisclosure] == 3);
    CHECK(counts[VulnClass::PrivGroupDocker] == 1);
    CHECK(counts[VulnClass::CronBased] == 2);

    for (const auto& s : specs) {
        CHECK(!s.hint.empty());
        if (s.success.kind == SuccessCondition::Kind::CredentialMatch) {
            CHECK(s.success.username == "root");
        }
    }

    CHECK(find_scenario(specs, "test-7").name == "password in user text file");
    CHECK_THROWS_AS(find_scenario(specs, "test-99"), ConfigError);
}

TEST_CASE("every shipped scenario is solvable by its oracle chain") {
    for (const auto& s : shipped()) {
        SimTarget target(s);
        bool achieved = false;
        for (const auto& line : s.oracle) {
            auto cap = parse_capability_line(line);
            REQUIRE(cap);
            if (target.execute(*cap).root_signal) {
                achieved = true;
                break;
            }
            target.end_iteration();
        }
        CHECK_MESSAGE(achieved, s.id, " oracle chain must reach root");
    }
}

TEST_CASE("test-6: the weak root password is detected as a credential match") {
    SimTarget target(find_scenario(shipped(), "test-6"));
    ExecutionResult r = target.execute(Capability::credential("root", "root"));
    REQUIRE(r.root_signal);
    CHECK(r.root_signal->kind == RootSignalKind::RootPassword);
    CHECK(r.root_signal->password == "root");
}

TEST_CASE("recon on any scenario: id reports the low-privilege user") {
    SimTarget target(find_scenario(shipped(), "test-5"));
    ExecutionResult r = target.execute(Capability::exec("id"));
    CHECK(r.output.rfind("uid=1001(lowpriv)", 0) == 0);
    CHECK(!r.root_signal);
}

TEST_CASE("test-2: sudo -l discloses the rule, sudo /bin/bash grants root") {
    SimTarget target(find_scenario(shipped(), "test-2"));

    ExecutionResult listing = target.execute(Capability::exec("sudo -l"));
    CHECK(listing.output.find("(ALL : ALL) ALL") != std::string::npos);
    CHECK(!listing.root_signal);
    CHECK(target.almost_there());  // rule seen, root not yet obtained

    ExecutionResult shell = target.execute(Capability::exec("sudo /bin/bash"));
    REQUIRE(shell.root_signal);
    CHECK(shell.root_signal->kind == RootSignalKind::RootShell);
}

TEST_CASE("credential checks never mutate state") {
    SimTarget target(find_scenario(shipped(), "test-2"));
    auto before = target.state();
    target.execute(Capability::credential("root", "wrong"));
    target.execute(Capability::credential("lowpriv", "trustno1"));
    CHECK(target.state() == before);
}

TEST_CASE("credential outcomes: wrong, lowpriv, root") {
    SimTarget target(find_scenario(shipped(), "test-5"));

    ExecutionResult wrong = target.execute(Capability::credential("root", "nope"));
    CHECK(!wrong.root_signal);
    CHECK(wrong.output.find("failed") != std::string::npos);

    ExecutionResult self = target.execute(Capability::credential("lowpriv", "trustno1"));
    CHECK(!self.root_signal);
    CHECK(self.output.find("not root") != std::string::npos);

    // Password reuse: lowpriv's password works for root.
    ExecutionResult reuse = target.execute(Capability::credential("root", "trustno1"));
    REQUIRE(reuse.root_signal);
    CHECK(reuse.root_signal->password == "trustno1");
}

TEST_CASE("unmatched commands produce a shell-style error") {
    SimTarget target(find_scenario(shipped(), "test-1"));
    ExecutionResult r = target.execute(Capability::exec("frobnicate --all"));
    CHECK(r.output == "sh: frobnicate: command not found");
}

TEST_CASE("reset restores the initial state; replay is deterministic") {
    const ScenarioSpec& spec = find_scenario(shipped(), "test-11");
    SimTarget target(spec);

    auto first = replay(target, spec.oracle);
    CHECK(target.state() != spec.initial_state);

    target.reset();
    CHECK(target.state() == spec.initial_state);
    CHECK(target.clock() == 0);

    auto second = replay(target, spec.oracle);
    CHECK(first == second);

    // Reset on a never-used target is a no-op success.
    SimTarget fresh(spec);
    CHECK_NOTHROW(fresh.reset());
}

TEST_CASE("cron firing needs an iteration tick") {
    SimTarget target(find_scenario(shipped(), "test-11"));
    target.execute(Capability::exec(
        "echo 'cp /bin/bash /tmp/rootbash; chmod +s /tmp/rootbash' > /opt/scripts/backup.sh"));

    // Same iteration: the cron job has not run yet.
    ExecutionResult early = target.execute(Capability::exec("/tmp/rootbash -p"));
    CHECK(!early.root_signal);
    CHECK(target.almost_there());

    target.end_iteration();
    ExecutionResult late = target.execute(Capability::exec("/tmp/rootbash -p"));
    REQUIRE(late.root_signal);
    CHECK(late.root_signal->kind == RootSignalKind::RootShell);
}

TEST_CASE("oversized outputs are truncated to the byte budget") {
    ScenarioSpec spec;
    spec.id = "big";
    spec.hint = "h";
    spec.lowpriv_password = "pw";
    CommandRule rule;
    rule.pattern = "^dump$";
    rule.response = std::string(40000, 'x');
    spec.rules.push_back(rule);

    SimTarget target(spec);
    ExecutionResult r = target.execute(Capability::exec("dump"));
    CHECK(r.output.size() == SimTarget::kOutputByteBudget);
    CHECK(r.truncated);
}

TEST_CASE("malformed scenario files are rejected") {
    CHECK_THROWS_AS(parse_scenarios("not json"), MalformedScenarioFile);
    CHECK_THROWS_AS(parse_scenarios("{}"), MalformedScenarioFile);

    // Missing success condition.
    CHECK_THROWS_AS(parse_scenarios(R"({"scenarios":[{
        "id":"x","vuln_class":"cron","name":"n","hint":"h",
        "lowpriv_password":"p","oracle":["exec_command id"],
        "rules":[]}]})"),
                    MalformedScenarioFile);

    // Oracle chain that never reaches root.
    CHECK_THROWS_AS(parse_scenarios(R"({"scenarios":[{
        "id":"x","vuln_class":"cron","name":"n","hint":"h",
        "lowpriv_password":"p","success":{"kind":"shell"},
        "oracle":["exec_command id"],
        "rules":[{"pattern":"^win$","response":"ok","grants_root":true,"vuln_step":true}]}]})"),
                    MalformedScenarioFile);

    // grants_root reachable without traversing the planted vulnerability.
    CHECK_THROWS_AS(parse_scenarios(R"({"scenarios":[{
        "id":"x","vuln_class":"cron","name":"n","hint":"h",
        "lowpriv_password":"p","success":{"kind":"shell"},
        "oracle":["exec_command win"],
        "rules":[{"pattern":"^win$","response":"ok","grants_root":true}]}]})"),
                    MalformedScenarioFile);
}

TEST_CASE("vuln-gated root paths pass load-time validation") {
    // A state-gated exploit whose arming rule is the vuln step.
    auto specs = parse_scenarios(R"({"scenarios":[{
        "id":"x","vuln_class":"cron","name":"n","hint":"h",
        "lowpriv_password":"p","success":{"kind":"shell"},
        "oracle":["exec_command arm","exec_command fire"],
        "rules":[
          {"pattern":"^arm$","response":"","sets":{"armed":"yes"},"vuln_step":true},
          {"pattern":"^fire$","requires":{"armed":"yes"},"response":"uid=0",
           "grants_root":true,"vuln_step":true}
        ]}]})");
    CHECK(specs.size() == 1);
}

TEST_CASE("ssh argv construction") {
    SshTargetConfig cfg;
    cfg.host = "10.0.0.5";
    cfg.port = 2222;
    cfg.username = "lowpriv";
    cfg.key_path = "/keys/id_rsa";

    auto argv = build_ssh_argv(cfg, "id", "lowpriv", false);
    REQUIRE(!argv.empty());
    CHECK(argv[0] == "ssh");
    CHECK(std::find(argv.begin(), argv.end(), "-p") != argv.end());
    CHECK(std::find(argv.begin(), argv.end(), "2222") != argv.end());
    CHECK(std::find(argv.begin(), argv.end(), "BatchMode=yes") != argv.end());
    CHECK(std::find(argv.begin(), argv.end(), "-i") != argv.end());
    CHECK(std::find(argv.begin(), argv.end(), "lowpriv@10.0.0.5") != argv.end());
    CHECK(argv.back() == "id");

    auto with_pass = build_ssh_argv(cfg, "id", "root", true);
    CHECK(with_pass[0] == "sshpass");
    CHECK(with_pass[1] == "-e");
    CHECK(std::find(with_pass.begin(), with_pass.end(), "BatchMode=yes") == with_pass.end());
    CHECK(std::find(with_pass.begin(), with_pass.end(), "root@10.0.0.5") != with_pass.end());

    SshTargetConfig no_host;
    CHECK_THROWS_AS((SshTarget{no_host}), ConfigError);
}

TEST_CASE("subprocess runner: output capture, truncation, timeout") {
    auto echo = run_subprocess({"echo", "hello"}, {}, 5, 1 << 16);
    CHECK(echo.exit_status == 0);
    CHECK(echo.output == "hello\n");
    CHECK(!echo.timed_out);

    auto env = run_subprocess({"sh", "-c", "printf %s \"$PESC_PROBE\""},
                              {{"PESC_PROBE", "via-env"}}, 5, 1 << 16);
    CHECK(env.output == "via-env");

    auto big = run_subprocess({"sh", "-c", "head -c 100000 /dev/zero | tr '\\0' x"}, {}, 5, 500);
    CHECK(big.output.size() == 500);

    auto slow = run_subprocess({"sleep", "5"}, {}, 1, 1 << 16);
    CHECK(slow.timed_out);
}
