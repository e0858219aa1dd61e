#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace pesc {

// Token counting interface. All budgets in this codebase (context budget,
// retrieval budget, chunk sizes) are measured through the configured
// tokenizer so an exact BPE implementation can be swapped in without
// touching call sites.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual int count(std::string_view text) const = 0;
    virtual std::string name() const = 0;
};

// Default heuristic: ceil(bytes / 4). Subadditive under concatenation and
// model-agnostic, which is all the budgeting logic relies on.
class ByteRatioTokenizer final : public Tokenizer {
public:
    int count(std::string_view text) const override {
        return static_cast<int>((text.size() + 3) / 4);
    }
    std::string name() const override { return "bytes/4"; }
};

// Process-wide tokenizer used by count_tokens(). Defaults to ByteRatioTokenizer.
const Tokenizer& default_tokenizer();
void set_default_tokenizer(std::shared_ptr<const Tokenizer> tokenizer);

int count_tokens(std::string_view text);

// Longest prefix of `text` whose token count is <= budget, never splitting a
// UTF-8 sequence. Assumes the tokenizer is monotone in prefix length.
std::string trim_to_tokens(std::string_view text, int budget);
std::string trim_to_tokens(std::string_view text, int budget, const Tokenizer& tokenizer);

} // namespace pesc
