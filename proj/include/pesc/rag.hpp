#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pesc/backend.hpp"

namespace pesc {

// One search-query callout per iteration: renders the vector-store query
// prompt over the combined output of the iteration's commands and returns
// the backend's answer verbatim.
ChatResponse generate_rag_query(ChatBackend& backend, const std::string& cmd_line,
                                const std::string& combined_output, double temperature,
                                std::optional<std::int64_t> seed, int max_output_tokens = 1024);

} // namespace pesc
