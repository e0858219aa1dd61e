#include "pesc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "pesc/error.hpp"
#include "pesc/scripted_backends.hpp"
#include "pesc/sim_target.hpp"

namespace pesc {

void ExperimentPlan::validate() const {
    if (scenario_ids.empty()) throw PlanInvalid("plan has no scenarios");
    if (configurations.empty()) throw PlanInvalid("plan has no treatment configurations");
    if (repetitions < 1) throw PlanInvalid("repetitions must be >= 1");
    if (parallelism < 1) throw PlanInvalid("parallelism must be >= 1");
    for (std::size_t i = 0; i < configurations.size(); ++i) {
        if (normalize_treatments(configurations[i]) != configurations[i]) {
            throw PlanInvalid("configuration " + std::to_string(i) + " is not normalized");
        }
        for (std::size_t j = i + 1; j < configurations.size(); ++j) {
            if (configurations[i] == configurations[j]) {
                throw PlanInvalid("duplicate treatment configuration in plan");
            }
        }
    }
}

std::unique_ptr<ChatBackend> make_scripted_backend(const std::string& profile,
                                                   const ScenarioSpec& scenario) {
    if (profile == "oracle") return std::make_unique<OracleBackend>(scenario.oracle);
    if (profile == "repeater") return std::make_unique<RepeaterBackend>();
    if (profile == "refuser") return std::make_unique<RefuserBackend>();
    if (profile == "echo") return std::make_unique<EchoBackend>();
    if (profile == "adversarial") return std::make_unique<AdversarialBackend>();
    throw ConfigError("unknown backend profile '" + profile + "'");
}

std::vector<RunTrace> run_experiment(const ExperimentPlan& plan, const ExperimentEnv& env) {
    plan.validate();

    struct Job {
        const ScenarioSpec* scenario;
        TreatmentSet treatments;
        int repetition;
    };
    std::vector<Job> jobs;
    for (const auto& sid : plan.scenario_ids) {
        const ScenarioSpec& spec = find_scenario(env.scenarios, sid);
        for (const auto& treatments : plan.configurations) {
            for (int rep = 1; rep <= plan.repetitions; ++rep) {
                jobs.push_back({&spec, treatments, rep});
            }
        }
    }

    auto backend_factory = env.backend_factory;
    if (!backend_factory) {
        backend_factory = [&plan](const ScenarioSpec& s) {
            return make_scripted_backend(plan.backend_profile, s);
        };
    }
    auto target_factory = env.target_factory;
    if (!target_factory) {
        target_factory = [](const ScenarioSpec& s) { return std::make_unique<SimTarget>(s); };
    }

    std::vector<RunTrace> traces(jobs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];

            RunConfig config = plan.base;
            config.scenario_id = job.scenario->id;
            config.treatments = job.treatments;
            config.repetition_index = job.repetition;

            LogicalClock logical;
            SystemClock system;

            std::unique_ptr<ChatBackend> backend;
            std::unique_ptr<Target> target;
            try {
                backend = backend_factory(*job.scenario);
                target = target_factory(*job.scenario);
                target->reset();

                RunDependencies deps{*backend, *target};
                deps.knowledge = env.knowledge;
                deps.embedder = env.embedder;
                deps.svp = env.svp;
                deps.clock = env.deterministic_clock ? static_cast<Clock*>(&logical)
                                                     : static_cast<Clock*>(&system);
                deps.keep_outputs = env.keep_outputs;
                deps.wall_budget_ms = env.wall_budget_ms;

                traces[i] = run_episode(config, deps).trace;
            } catch (const Error& e) {
                // Record the failure; the sweep continues.
                RunTrace failed;
                failed.config = config;
                failed.config.treatments = normalize_treatments(config.treatments);
                failed.run_id = make_run_id(failed.config);
                failed.outcome.end_state = dynamic_cast<const BackendError*>(&e)
                                               ? EndState::BackendFailure
                                               : EndState::TargetFailure;
                traces[i] = std::move(failed);
            }

            if (!env.results_dir.empty()) {
                write_trace(traces[i], env.results_dir / (traces[i].run_id + ".jsonl"));
            }
        }
    };

    const int workers = std::min<int>(plan.parallelism, static_cast<int>(jobs.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(traces.begin(), traces.end(),
              [](const RunTrace& a, const RunTrace& b) { return a.run_id < b.run_id; });
    return traces;
}

} // namespace pesc
