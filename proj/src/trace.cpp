#include "pesc/trace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pesc/error.hpp"

namespace pesc {

namespace {

using nlohmann::json;

json capability_to_json(const Capability& c) {
    if (c.kind == CapabilityKind::ExecCommand) {
        return {{"kind", "exec"}, {"command", c.command}};
    }
    return {{"kind", "credential"}, {"username", c.username}, {"password", c.password}};
}

Capability capability_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exec") return Capability::exec(j.at("command").get<std::string>());
    if (kind == "credential") {
        return Capability::credential(j.at("username").get<std::string>(),
                                      j.at("password").get<std::string>());
    }
    throw MalformedTraceFile("unknown capability kind '" + kind + "'");
}

json result_to_json(const ExecutionResult& r) {
    json j = {{"capability", capability_to_json(r.capability)},
              {"output", r.output},
              {"truncated", r.truncated},
              {"wall_time_ms", r.wall_time_ms}};
    if (r.root_signal) {
        if (r.root_signal->kind == RootSignalKind::RootShell) {
            j["root_signal"] = {{"kind", "shell"}};
        } else {
            j["root_signal"] = {{"kind", "password"}, {"password", r.root_signal->password}};
        }
    } else {
        j["root_signal"] = nullptr;
    }
    return j;
}

ExecutionResult result_from_json(const json& j) {
    ExecutionResult r;
    r.capability = capability_from_json(j.at("capability"));
    r.output = j.at("output").get<std::string>();
    r.truncated = j.at("truncated").get<bool>();
    r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
    if (j.contains("root_signal") && !j.at("root_signal").is_null()) {
        const json& s = j.at("root_signal");
        RootSignal sig;
        if (s.at("kind") == "shell") {
            sig.kind = RootSignalKind::RootShell;
        } else {
            sig.kind = RootSignalKind::RootPassword;
            sig.password = s.at("password").get<std::string>();
        }
        r.root_signal = sig;
    }
    return r;
}

json opt_to_json(const std::optional<std::string>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<std::string> opt_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

json record_to_json(const ActionRecord& r) {
    json caps = json::array();
    for (const auto& c : r.capabilities) caps.push_back(capability_to_json(c));
    json results = json::array();
    for (const auto& res : r.results) results.push_back(result_to_json(res));
    return {{"iteration", r.iteration},
            {"cot_text", opt_to_json(r.cot_text)},
            {"capabilities", std::move(caps)},
            {"results", std::move(results)},
            {"rag_query", opt_to_json(r.rag_query)},
            {"retrieved_text", opt_to_json(r.retrieved_text)},
            {"retrieved_sources", r.retrieved_sources},
            {"analysis", opt_to_json(r.analysis)},
            {"token_counts", r.token_counts},
            {"ts_start_ms", r.ts_start_ms},
            {"ts_end_ms", r.ts_end_ms},
            {"hallucinations", r.hallucinations},
            {"repeated_commands", r.repeated_commands}};
}

ActionRecord record_from_json(const json& j) {
    ActionRecord r;
    r.iteration = j.at("iteration").get<int>();
    r.cot_text = opt_from_json(j, "cot_text");
    for (const auto& c : j.at("capabilities")) r.capabilities.push_back(capability_from_json(c));
    for (const auto& res : j.at("results")) r.results.push_back(result_from_json(res));
    r.rag_query = opt_from_json(j, "rag_query");
    r.retrieved_text = opt_from_json(j, "retrieved_text");
    r.retrieved_sources = j.value("retrieved_sources", std::vector<std::string>{});
    r.analysis = opt_from_json(j, "analysis");
    r.token_counts = j.at("token_counts").get<std::map<std::string, int>>();
    r.ts_start_ms = j.at("ts_start_ms").get<std::int64_t>();
    r.ts_end_ms = j.at("ts_end_ms").get<std::int64_t>();
    r.hallucinations = j.value("hallucinations", 0);
    r.repeated_commands = j.value("repeated_commands", 0);
    return r;
}

json treatments_to_json(const TreatmentSet& t) {
    return {{"analyze", t.analyze},          {"cot", t.cot},
            {"history_compression", t.history_compression},
            {"rag", t.rag},                  {"svp", t.svp},
            {"guidance", t.guidance}};
}

TreatmentSet treatments_from_json(const json& j) {
    TreatmentSet t;
    t.analyze = j.at("analyze").get<bool>();
    t.cot = j.at("cot").get<bool>();
    t.history_compression = j.at("history_compression").get<bool>();
    t.rag = j.at("rag").get<bool>();
    t.svp = j.at("svp").get<bool>();
    t.guidance = j.at("guidance").get<bool>();
    return t;
}

json config_to_json(const RunConfig& c) {
    return {{"scenario_id", c.scenario_id},
            {"treatments", treatments_to_json(c.treatments)},
            {"max_iterations", c.max_iterations},
            {"temperature", c.temperature},
            {"context_budget", c.context_budget},
            {"repetition_index", c.repetition_index},
            {"random_seed", c.random_seed}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.scenario_id = j.at("scenario_id").get<std::string>();
    c.treatments = treatments_from_json(j.at("treatments"));
    c.max_iterations = j.at("max_iterations").get<int>();
    c.temperature = j.at("temperature").get<double>();
    c.context_budget = j.at("context_budget").get<int>();
    c.repetition_index = j.at("repetition_index").get<int>();
    c.random_seed = j.at("random_seed").get<std::int64_t>();
    return c;
}

json outcome_to_json(const RunOutcome& o) {
    return {{"success", o.success},
            {"iterations_used", o.iterations_used},
            {"end_state", end_state_name(o.end_state)},
            {"total_tokens_in", o.total_tokens_in},
            {"total_tokens_out", o.total_tokens_out}};
}

RunOutcome outcome_from_json(const json& j) {
    RunOutcome o;
    o.success = j.at("success").get<bool>();
    o.iterations_used = j.at("iterations_used").get<int>();
    o.end_state = end_state_from_name(j.at("end_state").get<std::string>());
    o.total_tokens_in = j.at("total_tokens_in").get<std::int64_t>();
    o.total_tokens_out = j.at("total_tokens_out").get<std::int64_t>();
    return o;
}

} // namespace

std::string make_run_id(const RunConfig& config) {
    std::string code = treatment_code(config.treatments);
    if (config.treatments.guidance) code += 'G';
    if (code.empty()) code = "base";
    return config.scenario_id + "_" + code + "_rep" + std::to_string(config.repetition_index);
}

std::string trace_to_string(const RunTrace& trace) {
    std::string out;
    json header = {{"run_id", trace.run_id},
                   {"config", config_to_json(trace.config)},
                   {"outcome", outcome_to_json(trace.outcome)},
                   {"almost_there", trace.almost_there}};
    out += header.dump();
    out += '\n';
    for (const auto& r : trace.records) {
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

RunTrace trace_from_string(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line.empty()) {
        throw MalformedTraceFile("trace has no header line");
    }
    RunTrace trace;
    try {
        json header = json::parse(line);
        trace.run_id = header.at("run_id").get<std::string>();
        trace.config = config_from_json(header.at("config"));
        trace.outcome = outcome_from_json(header.at("outcome"));
        trace.almost_there = header.at("almost_there").get<bool>();
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            trace.records.push_back(record_from_json(json::parse(line)));
        }
    } catch (const json::exception& e) {
        throw MalformedTraceFile(std::string("cannot parse trace: ") + e.what());
    }
    if (static_cast<int>(trace.records.size()) != trace.outcome.iterations_used) {
        throw MalformedTraceFile("trace records (" + std::to_string(trace.records.size()) +
                                 ") do not match iterations_used (" +
                                 std::to_string(trace.outcome.iterations_used) + ")");
    }
    return trace;
}

void write_trace(const RunTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw MalformedTraceFile("cannot write " + path.string());
    out << trace_to_string(trace);
}

RunTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedTraceFile("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return trace_from_string(buf.str());
}

std::vector<RunTrace> read_traces_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::vector<RunTrace> traces;
    if (!fs::is_directory(dir)) return traces;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) traces.push_back(read_trace(p));
    std::sort(traces.begin(), traces.end(),
              [](const RunTrace& a, const RunTrace& b) { return a.run_id < b.run_id; });
    return traces;
}

} // namespace pesc
