#include "pesc/rag.hpp"

#include "pesc/prompts.hpp"

namespace pesc {

ChatResponse generate_rag_query(ChatBackend& backend, const std::string& cmd_line,
                                const std::string& combined_output, double temperature,
                                std::optional<std::int64_t> seed, int max_output_tokens) {
    ChatRequest req;
    req.messages = {{Role::User, render_rag_query_prompt(cmd_line, combined_output)}};
    req.temperature = temperature;
    req.seed = seed;
    req.max_output_tokens = max_output_tokens;
    return backend.complete(req);
}

} // namespace pesc
