#include "pesc/chunker.hpp"

#include "pesc/error.hpp"
#include "pesc/tokens.hpp"

namespace pesc {

namespace {

// Longest prefix of `text` that stays within the token budget, utf8-safe.
std::size_t prefix_limit(const std::string& text, int chunk_size) {
    return trim_to_tokens(text, chunk_size).size();
}

} // namespace

std::vector<std::string> chunk_document(const std::string& text, int chunk_size) {
    if (chunk_size < 50) throw ConfigError("chunk_size must be >= 50 tokens");

    std::vector<std::string> chunks;
    std::string remaining = text;
    while (!remaining.empty()) {
        if (count_tokens(remaining) <= chunk_size) {
            chunks.push_back(remaining);
            break;
        }
        const std::size_t limit = prefix_limit(remaining, chunk_size);
        std::size_t split = 0;

        // Prefer the last paragraph break within the limit, then the last
        // line break, then a hard cut at the limit itself.
        if (limit >= 2) {
            std::size_t idx = remaining.rfind("\n\n", limit - 2);
            if (idx != std::string::npos && idx + 2 <= limit) split = idx + 2;
        }
        if (split == 0 && limit >= 1) {
            std::size_t idx = remaining.rfind('\n', limit - 1);
            if (idx != std::string::npos && idx + 1 <= limit) split = idx + 1;
        }
        if (split == 0) {
            split = limit > 0 ? limit : 1;
        }

        chunks.push_back(remaining.substr(0, split));
        remaining.erase(0, split);
    }
    return chunks;
}

std::vector<RawChunk> chunk_corpus(const std::vector<CorpusDocument>& documents, int chunk_size) {
    std::vector<RawChunk> out;
    for (const auto& doc : documents) {
        for (auto& body : chunk_document(doc.text, chunk_size)) {
            out.push_back({doc.name, std::move(body)});
        }
    }
    return out;
}

} // namespace pesc
