#include "pesc/agent.hpp"

#include <set>

#include "pesc/error.hpp"
#include "pesc/history.hpp"
#include "pesc/prompts.hpp"
#include "pesc/rag.hpp"
#include "pesc/tokens.hpp"

namespace pesc {

namespace {

constexpr std::string_view kHistoryOpenAnchor =
    "You already tried the following commands:\n~~~ bash\n";
constexpr std::string_view kHistoryCloseAnchor =
    "\n~~~\nDo not repeat already tried escalation attacks.";
constexpr std::string_view kElisionMarker = "[earlier history elided]";

// Display caps for the analyze/rag prompts; the full text stays in the trace.
constexpr int kCmdLineDisplayTokens = 1024;

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

// Shrinks the output fence of a prompt until the rendered whole fits the
// budget; returns the (possibly trimmed) output text.
template <typename RenderFn>
std::string fit_output_within_budget(RenderFn render, const std::string& output, int budget) {
    if (count_tokens(render(output)) <= budget) return output;

    int allowance = budget - count_tokens(render(std::string()));
    while (allowance > 0) {
        std::string trimmed = trim_to_tokens(output, allowance);
        if (count_tokens(render(trimmed)) <= budget) return trimmed;
        allowance = allowance * 3 / 4 - 8;
    }
    throw BudgetUnreachable("prompt exceeds the context budget even with an empty output");
}

} // namespace

std::string enforce_context_budget(const std::string& prompt, int budget_tokens) {
    if (count_tokens(prompt) <= budget_tokens) return prompt;

    const std::size_t open = prompt.find(kHistoryOpenAnchor);
    if (open == std::string::npos) {
        throw BudgetUnreachable("fixed prompt sections exceed the context budget");
    }
    const std::size_t hist_begin = open + kHistoryOpenAnchor.size();
    // With an empty history the closing fence overlaps the opening anchor's
    // final newline; there is nothing to elide in that case.
    const std::size_t close =
        prompt.find(kHistoryCloseAnchor, hist_begin > 0 ? hist_begin - 1 : 0);
    if (close == std::string::npos || close < hist_begin) {
        throw BudgetUnreachable("fixed prompt sections exceed the context budget");
    }
    const std::string head = prompt.substr(0, hist_begin);
    const std::string tail = prompt.substr(close);
    std::string history = prompt.substr(hist_begin, close - hist_begin);

    // Split history into lines; "$ "-prefixed lines are command lines,
    // everything else belongs to an output block.
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= history.size()) {
        std::size_t nl = history.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(history.substr(pos));
            break;
        }
        lines.push_back(history.substr(pos, nl - pos));
        pos = nl + 1;
    }

    std::vector<bool> keep(lines.size(), true);
    bool elided = false;
    auto assemble = [&] {
        std::vector<std::string> kept;
        if (elided) kept.emplace_back(kElisionMarker);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (keep[i]) kept.push_back(lines[i]);
        }
        return head + join_lines(kept) + tail;
    };
    auto fits = [&] { return count_tokens(assemble()) <= budget_tokens; };

    // Oldest output lines first, then oldest command lines.
    for (int pass = 0; pass < 2; ++pass) {
        const bool dropping_commands = pass == 1;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (!keep[i]) continue;
            const bool is_command = lines[i].rfind("$ ", 0) == 0;
            if (is_command != dropping_commands) continue;
            keep[i] = false;
            elided = true;
            if (fits()) return assemble();
        }
    }
    throw BudgetUnreachable("fixed prompt sections exceed the context budget");
}

RunResult run_episode(RunConfig config, const RunDependencies& deps) {
    config.validate();
    config.treatments = normalize_treatments(config.treatments);
    const TreatmentSet& treatments = config.treatments;

    if (treatments.rag && (!deps.knowledge || !deps.embedder)) {
        throw PlanInvalid("rag is enabled but no knowledge store/embedder was provided");
    }
    if (treatments.svp && !deps.svp) {
        throw PlanInvalid("svp is enabled but no checklist document was provided");
    }

    SystemClock fallback_clock;
    Clock& clock = deps.clock ? *deps.clock : fallback_clock;

    RunResult rr;
    rr.trace.config = config;
    rr.trace.run_id = make_run_id(config);

    HistoryStore history(deps.keep_outputs);
    std::optional<std::string> last_analysis;
    std::set<std::string> executed_lines;
    std::optional<std::string> hint;
    if (treatments.guidance) {
        hint = deps.hint ? *deps.hint : deps.target.hint();
    }

    RunOutcome outcome;
    outcome.end_state = EndState::IterationLimit;

    const std::int64_t start_ms = clock.now_ms();
    bool achieved = false;

    for (int iter = 1; iter <= config.max_iterations && !achieved; ++iter) {
        if (clock.now_ms() - start_ms > deps.wall_budget_ms) {
            outcome.end_state = EndState::BackendFailure;
            break;
        }

        ActionRecord record;
        record.iteration = iter;
        record.ts_start_ms = clock.now_ms();

        try {
            PromptContext ctx;
            ctx.username = deps.target.username();
            ctx.password = deps.target.password();
            ctx.system_name = deps.target.system_name();
            ctx.capabilities_doc = default_capabilities_doc();
            if (treatments.svp) ctx.svp_doc = deps.svp->raw;
            ctx.history_rendering = history.render(treatments);
            if (treatments.analyze) ctx.analysis = last_analysis;
            ctx.hint = hint;

            std::string prompt =
                enforce_context_budget(render_next_command_prompt(ctx, treatments),
                                       config.context_budget);
            record.token_counts["next_command_prompt"] = count_tokens(prompt);

            ChatRequest req;
            req.messages = {{Role::User, prompt}};
            req.temperature = config.temperature;
            req.max_output_tokens = deps.max_output_tokens;
            req.seed = config.random_seed;
            ChatResponse answer = deps.backend.complete(req);
            outcome.total_tokens_in += answer.tokens_in;
            outcome.total_tokens_out += answer.tokens_out;
            record.token_counts["next_command_answer"] = count_tokens(answer.content);

            Extraction ext = extract_capabilities(answer.content);
            if (!ext.cot_text.empty()) record.cot_text = ext.cot_text;
            record.hallucinations = ext.skipped_spans;

            if (static_cast<int>(ext.capabilities.size()) > deps.max_capabilities_per_iteration) {
                ext.capabilities.resize(deps.max_capabilities_per_iteration);
            }

            for (const auto& cap : ext.capabilities) {
                if (executed_lines.count(cap.line())) ++record.repeated_commands;
                ExecutionResult result = deps.target.execute(cap);
                executed_lines.insert(cap.line());
                record.capabilities.push_back(cap);
                record.results.push_back(std::move(result));
                if (record.results.back().root_signal) {
                    achieved = true;
                    break;
                }
            }

            if (!achieved && !record.capabilities.empty()) {
                std::string cmd_line;
                std::string combined_output;
                for (std::size_t i = 0; i < record.capabilities.size(); ++i) {
                    if (i) cmd_line += "; ";
                    cmd_line += record.capabilities[i].line();
                    if (i) combined_output += '\n';
                    combined_output += record.results[i].output;
                }
                const std::string cmd_display = trim_to_tokens(cmd_line, kCmdLineDisplayTokens);

                std::optional<std::string> retrieved;
                if (treatments.rag) {
                    auto render_query = [&](const std::string& out) {
                        return render_rag_query_prompt(cmd_display, out);
                    };
                    const std::string fitted = fit_output_within_budget(
                        render_query, combined_output, config.context_budget);
                    record.token_counts["rag_prompt"] = count_tokens(render_query(fitted));
                    ChatResponse rag_answer =
                        generate_rag_query(deps.backend, cmd_display, fitted,
                                           config.temperature, config.random_seed,
                                           deps.max_output_tokens);
                    outcome.total_tokens_in += rag_answer.tokens_in;
                    outcome.total_tokens_out += rag_answer.tokens_out;
                    record.token_counts["rag_answer"] = count_tokens(rag_answer.content);
                    record.rag_query = rag_answer.content;

                    RetrievalResult hits = deps.knowledge->retrieve(
                        *deps.embedder, *record.rag_query, deps.retrieve_k,
                        deps.retrieve_budget_tokens);
                    retrieved = hits.text;
                    record.retrieved_text = hits.text;
                    record.retrieved_sources = hits.chunk_ids;
                }

                if (treatments.analyze) {
                    auto render_analysis = [&](const std::string& out) {
                        return render_analyze_prompt(cmd_display, out, retrieved, hint, "root");
                    };
                    const std::string analyze_prompt = render_analysis(fit_output_within_budget(
                        render_analysis, combined_output, config.context_budget));
                    record.token_counts["analysis_prompt"] = count_tokens(analyze_prompt);
                    ChatRequest aq;
                    aq.messages = {{Role::User, analyze_prompt}};
                    aq.temperature = config.temperature;
                    aq.max_output_tokens = deps.max_output_tokens;
                    aq.seed = config.random_seed;
                    ChatResponse analysis = deps.backend.complete(aq);
                    outcome.total_tokens_in += analysis.tokens_in;
                    outcome.total_tokens_out += analysis.tokens_out;
                    record.token_counts["analysis_answer"] = count_tokens(analysis.content);
                    record.analysis = analysis.content;
                    last_analysis = analysis.content;
                }
            }
        } catch (const TargetError&) {
            outcome.end_state = EndState::TargetFailure;
            break;
        } catch (const BackendError&) {
            outcome.end_state = EndState::BackendFailure;
            break;
        }

        record.ts_end_ms = clock.now_ms();
        history.append(record);
        rr.trace.records.push_back(std::move(record));
        if (!achieved) deps.target.end_iteration();
    }

    outcome.iterations_used = static_cast<int>(rr.trace.records.size());
    if (achieved) {
        outcome.success = true;
        outcome.end_state = EndState::RootAchieved;
    }
    rr.trace.almost_there = deps.target.almost_there();
    rr.trace.outcome = outcome;
    rr.outcome = outcome;
    return rr;
}

} // namespace pesc
