#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pesc/agent.hpp"
#include "pesc/scenario.hpp"
#include "pesc/trace.hpp"

namespace pesc {

// |scenario_ids| x |configurations| x repetitions runs, each from a freshly
// reset target.
struct ExperimentPlan {
    std::vector<std::string> scenario_ids;
    std::vector<TreatmentSet> configurations;
    int repetitions = 3;
    std::string backend_profile = "oracle";
    int parallelism = 1;
    RunConfig base;  // scenario_id/treatments/repetition_index filled per run

    // Throws PlanInvalid: empty scenarios/configurations, repetitions < 1,
    // non-normalized or duplicate configurations.
    void validate() const;
};

// Resolved resources shared by all runs of a sweep. Backends are created per
// run (scripted ones are stateful); targets likewise.
struct ExperimentEnv {
    std::vector<ScenarioSpec> scenarios;
    const VectorStore* knowledge = nullptr;
    Embedder* embedder = nullptr;
    const SvpDocument* svp = nullptr;
    std::function<std::unique_ptr<ChatBackend>(const ScenarioSpec&)> backend_factory;
    std::function<std::unique_ptr<Target>(const ScenarioSpec&)> target_factory;  // default: sim
    std::filesystem::path results_dir;  // empty = do not persist
    bool deterministic_clock = true;

    int keep_outputs = 1;
    std::int64_t wall_budget_ms = 30 * 60 * 1000;
};

// Executes the full sweep on a bounded worker pool. A run that throws is
// recorded as a failed trace; the sweep never aborts. Results are sorted by
// run_id, so parallelism does not change the returned set.
std::vector<RunTrace> run_experiment(const ExperimentPlan& plan, const ExperimentEnv& env);

// Creates one of the named scripted backends ("oracle", "repeater",
// "refuser", "echo", "adversarial") for a scenario. Throws ConfigError on an
// unknown name.
std::unique_ptr<ChatBackend> make_scripted_backend(const std::string& profile,
                                                   const ScenarioSpec& scenario);

} // namespace pesc
