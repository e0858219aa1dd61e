#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pesc/trace.hpp"

namespace pesc {

// One (configuration, scenario) cell: successes out of repetitions plus the
// best (minimum) iteration count among the successful runs.
struct CellSummary {
    int successes = 0;
    int repetitions = 0;
    std::optional<int> min_iterations;
    bool almost_there = false;

    // "3/3:4", "2/3:9", "1/3:18", "AT" (almost there, no success), or "-".
    std::string mark() const;
};

struct ResultRow {
    TreatmentSet config;
    std::map<std::string, CellSummary> cells;  // by scenario id
    int solved = 0;   // scenarios with >= 1 successful repetition
    int percent = 0;  // round(solved / scenario_count * 100)
};

struct ResultTable {
    std::vector<std::string> scenario_ids;  // natural order (test-2 < test-10)
    std::vector<ResultRow> rows;

    std::string to_text() const;
    std::string to_csv() const;
};

// Pure function of the traces: rerunning it over persisted traces reproduces
// the table byte for byte.
ResultTable summarize(const std::vector<RunTrace>& traces);

int percent_solved(int solved, int total);

// Distribution of one token-count component across all iterations.
struct ComponentStats {
    long count = 0;
    long total = 0;
    double mean = 0;
    double median = 0;
    double p25 = 0;
    double p75 = 0;
    double p90 = 0;
    int min = 0;
    int max = 0;
};

struct TokenReport {
    std::map<std::string, ComponentStats> components;
    long total_input_tokens = 0;   // sum over *_prompt components
    long total_output_tokens = 0;  // sum over *_answer components

    std::string to_text() const;
    std::string to_csv() const;
};

TokenReport token_report(const std::vector<RunTrace>& traces);

// Natural comparison so that "test-2" sorts before "test-10".
bool natural_id_less(const std::string& a, const std::string& b);

} // namespace pesc
