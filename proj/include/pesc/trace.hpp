#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pesc/types.hpp"

namespace pesc {

// The unit of persistence and analysis: everything one run produced.
struct RunTrace {
    std::string run_id;
    RunConfig config;
    std::vector<ActionRecord> records;
    RunOutcome outcome;
    bool almost_there = false;

    bool operator==(const RunTrace&) const = default;
};

// "<scenario>_<code|base>[G]_rep<k>", e.g. "test-6_ACHRSG_rep1".
std::string make_run_id(const RunConfig& config);

// Line-delimited layout: header line (run_id, config, outcome, almost_there)
// followed by one JSON line per iteration record. Keys are sorted, so equal
// traces serialize to equal bytes.
std::string trace_to_string(const RunTrace& trace);
RunTrace trace_from_string(const std::string& content);

void write_trace(const RunTrace& trace, const std::filesystem::path& path);
RunTrace read_trace(const std::filesystem::path& path);

// All *.jsonl traces under a results directory, sorted by run_id.
std::vector<RunTrace> read_traces_dir(const std::filesystem::path& dir);

} // namespace pesc
