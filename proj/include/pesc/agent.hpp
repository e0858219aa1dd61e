#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pesc/backend.hpp"
#include "pesc/clock.hpp"
#include "pesc/embedder.hpp"
#include "pesc/svp.hpp"
#include "pesc/target.hpp"
#include "pesc/trace.hpp"
#include "pesc/vector_store.hpp"

namespace pesc {

// Everything one run needs besides its RunConfig. knowledge+embedder are
// required when rag is enabled, svp when svp is enabled. The clock defaults
// to wall time; deterministic runs inject a LogicalClock.
struct RunDependencies {
    ChatBackend& backend;
    Target& target;
    const VectorStore* knowledge = nullptr;
    Embedder* embedder = nullptr;
    const SvpDocument* svp = nullptr;
    std::optional<std::string> hint;  // overrides target.hint() when set
    Clock* clock = nullptr;

    int keep_outputs = 1;
    int retrieve_k = 4;
    int retrieve_budget_tokens = 1200;
    int max_capabilities_per_iteration = 8;
    int max_output_tokens = 1024;
    std::int64_t wall_budget_ms = 30 * 60 * 1000;
};

struct RunResult {
    RunOutcome outcome;
    RunTrace trace;
};

// The control loop. Per iteration: render the command prompt (with history
// and the previous analysis), query the model, extract and execute every
// tagged capability in order, then optionally issue the retrieval query and
// the analysis callout. Stops the moment a result carries a root signal.
// Treatments are normalized on entry.
RunResult run_episode(RunConfig config, const RunDependencies& deps);

// Shrinks an over-budget command prompt by eliding history, oldest output
// blocks first, then oldest command lines. Fixed template sections are never
// touched; throws BudgetUnreachable when they alone exceed the budget.
std::string enforce_context_budget(const std::string& prompt, int budget_tokens);

} // namespace pesc
