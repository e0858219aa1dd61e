// pesc: autonomous privilege-escalation agent harness.
//
// Subcommands: ingest (corpus -> knowledge store), run (one episode),
// bench (scenario sweep), ablate (full treatment-combination sweep),
// report (re-derive tables from persisted traces).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"

#include "pesc/agent.hpp"
#include "pesc/config.hpp"
#include "pesc/error.hpp"
#include "pesc/experiment.hpp"
#include "pesc/http_backend.hpp"
#include "pesc/report.hpp"
#include "pesc/scenario.hpp"
#include "pesc/sim_target.hpp"
#include "pesc/ssh_target.hpp"
#include "pesc/svp.hpp"
#include "pesc/trace.hpp"
#include "pesc/vector_store.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitNoRoot = 1;
constexpr int kExitInfraFailure = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
    std::string config_path;
    std::string scenarios_path;
    std::string svp_path;
    std::string store_path;
    std::string results_dir;
    std::string backend = "oracle";
    std::string target = "sim";
    int max_iterations = 40;
    double temperature = 0.8;
    int context_budget = 8192;
    int keep_outputs = 1;
    std::int64_t seed = 0;
    int reps = 3;
    int parallelism = 1;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "TOML-style config file");
    cmd->add_option("--scenarios", o.scenarios_path, "scenario file");
    cmd->add_option("--svp", o.svp_path, "enumeration checklist file");
    cmd->add_option("--store", o.store_path, "knowledge store file");
    cmd->add_option("--results-dir", o.results_dir, "directory for trace files");
    cmd->add_option("--backend", o.backend,
                    "oracle|repeater|refuser|echo|adversarial|http");
    cmd->add_option("--target", o.target, "sim|ssh");
    cmd->add_option("--max-iterations", o.max_iterations, "iteration limit per run");
    cmd->add_option("--temperature", o.temperature, "sampling temperature");
    cmd->add_option("--context-budget", o.context_budget, "prompt token budget");
    cmd->add_option("--keep-outputs", o.keep_outputs,
                    "outputs kept by history compression");
    cmd->add_option("--seed", o.seed, "random seed forwarded to the backend");
}

pesc::AppConfig resolve_config(const CommonOpts& o) {
    pesc::AppConfig cfg;
    if (!o.config_path.empty()) cfg = pesc::load_app_config(o.config_path);
    if (!o.scenarios_path.empty()) cfg.scenarios_path = o.scenarios_path;
    if (!o.svp_path.empty()) cfg.svp_path = o.svp_path;
    if (!o.store_path.empty()) cfg.store_path = o.store_path;
    if (!o.results_dir.empty()) cfg.results_dir = o.results_dir;
    return cfg;
}

struct Resources {
    pesc::AppConfig cfg;
    std::vector<pesc::ScenarioSpec> scenarios;
    std::optional<pesc::SvpDocument> svp;
    std::optional<pesc::VectorStore> store;
    std::unique_ptr<pesc::HashEmbedder> embedder;
};

Resources load_resources(const CommonOpts& o, const pesc::TreatmentSet& treatments) {
    Resources r;
    r.cfg = resolve_config(o);
    r.scenarios = pesc::load_scenarios(r.cfg.scenarios_path);
    if (treatments.svp) {
        r.svp = pesc::load_svp_document(r.cfg.svp_path);
    }
    if (treatments.rag) {
        r.store = pesc::VectorStore::load(r.cfg.store_path);
        r.embedder = std::make_unique<pesc::HashEmbedder>(r.store->dimension());
    }
    return r;
}

std::unique_ptr<pesc::ChatBackend> make_backend(const CommonOpts& o, const pesc::AppConfig& cfg,
                                                const pesc::ScenarioSpec& scenario) {
    if (o.backend == "http") {
        return std::make_unique<pesc::HttpChatBackend>(cfg.backend);
    }
    return pesc::make_scripted_backend(o.backend, scenario);
}

std::unique_ptr<pesc::Target> make_target(const CommonOpts& o, const pesc::AppConfig& cfg,
                                          const pesc::ScenarioSpec& scenario) {
    if (o.target == "ssh") {
        return std::make_unique<pesc::SshTarget>(cfg.target);
    }
    if (o.target != "sim") {
        throw pesc::ConfigError("unknown target kind '" + o.target + "'");
    }
    return std::make_unique<pesc::SimTarget>(scenario);
}

int cmd_ingest(const std::string& corpus_dir, const std::string& store_path, int chunk_size,
               int dimension) {
    auto docs = pesc::read_corpus_dir(corpus_dir);
    docs.erase(std::remove_if(docs.begin(), docs.end(),
                              [](const pesc::CorpusDocument& d) { return d.text.empty(); }),
               docs.end());
    if (docs.empty()) {
        std::cerr << "error: no documents in " << corpus_dir << "\n";
        return kExitInfraFailure;
    }
    pesc::HashEmbedder embedder(dimension);
    pesc::VectorStore store = pesc::build_store(docs, embedder, chunk_size);
    store.save(store_path, embedder.name(), chunk_size);
    std::cout << "chunks=" << store.size() << " dimension=" << store.dimension() << " store="
              << store_path << "\n";
    return kExitSuccess;
}

int cmd_run(const CommonOpts& o, const std::string& scenario_id, const std::string& treatments_str,
            bool guidance) {
    pesc::TreatmentSet treatments = pesc::parse_treatment_code(treatments_str);
    treatments.guidance = guidance;
    treatments = pesc::normalize_treatments(treatments);

    Resources res = load_resources(o, treatments);
    const pesc::ScenarioSpec& scenario = pesc::find_scenario(res.scenarios, scenario_id);

    auto backend = make_backend(o, res.cfg, scenario);
    auto target = make_target(o, res.cfg, scenario);
    target->reset();

    pesc::RunConfig config;
    config.scenario_id = scenario_id;
    config.treatments = treatments;
    config.max_iterations = o.max_iterations;
    config.temperature = o.temperature;
    config.context_budget = o.context_budget;
    config.repetition_index = 1;
    config.random_seed = o.seed;

    pesc::LogicalClock logical;
    pesc::SystemClock system;

    pesc::RunDependencies deps{*backend, *target};
    if (res.store) deps.knowledge = &*res.store;
    deps.embedder = res.embedder.get();
    if (res.svp) deps.svp = &*res.svp;
    deps.clock = o.backend == "http" ? static_cast<pesc::Clock*>(&system)
                                     : static_cast<pesc::Clock*>(&logical);
    deps.keep_outputs = o.keep_outputs;

    pesc::RunResult result = pesc::run_episode(config, deps);

    if (!res.cfg.results_dir.empty()) {
        fs::create_directories(res.cfg.results_dir);
        fs::path trace_path = fs::path(res.cfg.results_dir) / (result.trace.run_id + ".jsonl");
        pesc::write_trace(result.trace, trace_path);
        std::cout << "trace=" << trace_path.string() << "\n";
    }
    std::cout << "scenario=" << scenario_id << " success="
              << (result.outcome.success ? "true" : "false")
              << " iterations=" << result.outcome.iterations_used << "\n";

    switch (result.outcome.end_state) {
    case pesc::EndState::RootAchieved: return kExitSuccess;
    case pesc::EndState::IterationLimit: return kExitNoRoot;
    default: return kExitInfraFailure;
    }
}

int run_sweep(const CommonOpts& o, const std::vector<pesc::TreatmentSet>& configurations,
              const std::vector<std::string>& scenario_filter) {
    // Any configuration may need svp/rag resources; load them if any does.
    pesc::TreatmentSet wanted;
    for (const auto& t : configurations) {
        wanted.svp = wanted.svp || t.svp;
        wanted.rag = wanted.rag || t.rag;
    }
    Resources res = load_resources(o, wanted);

    pesc::ExperimentPlan plan;
    if (scenario_filter.empty()) {
        for (const auto& s : res.scenarios) plan.scenario_ids.push_back(s.id);
    } else {
        for (const auto& sid : scenario_filter) {
            pesc::find_scenario(res.scenarios, sid);  // validates
            plan.scenario_ids.push_back(sid);
        }
    }
    plan.configurations = configurations;
    plan.repetitions = o.reps;
    plan.backend_profile = o.backend;
    plan.parallelism = o.parallelism;
    plan.base.scenario_id = "placeholder";
    plan.base.max_iterations = o.max_iterations;
    plan.base.temperature = o.temperature;
    plan.base.context_budget = o.context_budget;
    plan.base.random_seed = o.seed;

    pesc::ExperimentEnv env;
    env.scenarios = res.scenarios;
    if (res.store) env.knowledge = &*res.store;
    env.embedder = res.embedder.get();
    if (res.svp) env.svp = &*res.svp;
    env.deterministic_clock = o.backend != "http";
    env.keep_outputs = o.keep_outputs;
    if (o.backend == "http") {
        auto backend_cfg = res.cfg.backend;
        env.backend_factory = [backend_cfg](const pesc::ScenarioSpec&) {
            return std::make_unique<pesc::HttpChatBackend>(backend_cfg);
        };
    }
    if (!res.cfg.results_dir.empty()) {
        fs::create_directories(res.cfg.results_dir);
        env.results_dir = res.cfg.results_dir;
    }

    std::vector<pesc::RunTrace> traces = pesc::run_experiment(plan, env);

    pesc::ResultTable table = pesc::summarize(traces);
    std::cout << table.to_text();
    if (!res.cfg.results_dir.empty()) {
        std::ofstream txt(fs::path(res.cfg.results_dir) / "summary.txt");
        txt << table.to_text();
        std::ofstream csv(fs::path(res.cfg.results_dir) / "summary.csv");
        csv << table.to_csv();
    }
    std::cout << "traces=" << traces.size() << "\n";
    return kExitSuccess;
}

int cmd_report(const std::string& results_dir) {
    std::vector<pesc::RunTrace> traces = pesc::read_traces_dir(results_dir);
    pesc::ResultTable table = pesc::summarize(traces);
    std::cout << table.to_text();
    std::cout << pesc::token_report(traces).to_text();
    return kExitSuccess;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"autonomous Linux privilege-escalation agent harness"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "chunk + embed a corpus into a knowledge store");
    std::string corpus_dir = "data/corpus";
    std::string ingest_store = "knowledge.store";
    int chunk_size = 1000;
    int dimension = 256;
    ingest->add_option("--corpus", corpus_dir, "directory of .md/.txt documents");
    ingest->add_option("--store", ingest_store, "output store file");
    ingest->add_option("--chunk-size", chunk_size, "chunk size in tokens");
    ingest->add_option("--dimension", dimension, "embedding dimension");

    // run
    auto* run = app.add_subcommand("run", "run a single episode");
    CommonOpts run_opts;
    std::string scenario_id;
    std::string treatments_str;
    bool guidance = false;
    run->add_option("--scenario", scenario_id, "scenario id, e.g. test-6")->required();
    run->add_option("--treatments", treatments_str, "subset of ACHRS (empty = baseline)");
    run->add_flag("--guidance", guidance, "include the scenario hint");
    add_common_flags(run, run_opts);

    // bench
    auto* bench = app.add_subcommand("bench", "run scenarios x repetitions for one configuration");
    CommonOpts bench_opts;
    std::string bench_treatments;
    bool bench_guidance = false;
    std::vector<std::string> bench_scenarios;
    bench->add_option("--treatments", bench_treatments, "subset of ACHRS");
    bench->add_flag("--guidance", bench_guidance, "include scenario hints");
    bench->add_option("--scenario", bench_scenarios, "restrict to specific scenario ids");
    bench->add_option("--reps", bench_opts.reps, "repetitions per cell");
    bench->add_option("--parallelism", bench_opts.parallelism, "worker pool size");
    add_common_flags(bench, bench_opts);

    // ablate
    auto* ablate = app.add_subcommand("ablate", "sweep the 24 valid treatment combinations");
    CommonOpts ablate_opts;
    bool dry_run = false;
    ablate->add_flag("--dry-run", dry_run, "print the configurations and exit");
    ablate->add_option("--reps", ablate_opts.reps, "repetitions per cell");
    ablate->add_option("--parallelism", ablate_opts.parallelism, "worker pool size");
    add_common_flags(ablate, ablate_opts);

    // report
    auto* report = app.add_subcommand("report", "summarize persisted traces");
    std::string report_dir = "results";
    report->add_option("--results-dir", report_dir, "directory of trace files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*ingest) return cmd_ingest(corpus_dir, ingest_store, chunk_size, dimension);
        if (*run) return cmd_run(run_opts, scenario_id, treatments_str, guidance);
        if (*bench) {
            pesc::TreatmentSet t = pesc::parse_treatment_code(bench_treatments);
            t.guidance = bench_guidance;
            return run_sweep(bench_opts, {pesc::normalize_treatments(t)}, bench_scenarios);
        }
        if (*ablate) {
            std::vector<pesc::TreatmentSet> configs = pesc::enumerate_ablation_sets();
            for (auto& t : configs) t.guidance = true;
            if (dry_run) {
                for (const auto& t : configs) {
                    std::string code = pesc::treatment_code(t);
                    std::cout << (code.empty() ? "base" : code) << "+G\n";
                }
                return kExitSuccess;
            }
            return run_sweep(ablate_opts, configs, {});
        }
        if (*report) return cmd_report(report_dir);
    } catch (const pesc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pesc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfraFailure;
    }
    return kExitUsage;
}
