#include "pesc/tokens.hpp"

#include <atomic>
#include <mutex>

namespace pesc {

namespace {

std::shared_ptr<const Tokenizer>& tokenizer_slot() {
    static std::shared_ptr<const Tokenizer> slot = std::make_shared<ByteRatioTokenizer>();
    return slot;
}

std::mutex& tokenizer_mutex() {
    static std::mutex m;
    return m;
}

// Byte offsets into UTF-8 text must not land inside a continuation sequence.
std::size_t utf8_backoff(std::string_view text, std::size_t pos) {
    while (pos > 0 && pos < text.size() && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) {
        --pos;
    }
    return pos;
}

} // namespace

namespace {

std::shared_ptr<const Tokenizer> current_tokenizer() {
    std::lock_guard<std::mutex> lock(tokenizer_mutex());
    return tokenizer_slot();
}

} // namespace

const Tokenizer& default_tokenizer() {
    std::lock_guard<std::mutex> lock(tokenizer_mutex());
    return *tokenizer_slot();
}

void set_default_tokenizer(std::shared_ptr<const Tokenizer> tokenizer) {
    if (!tokenizer) return;
    std::lock_guard<std::mutex> lock(tokenizer_mutex());
    tokenizer_slot() = std::move(tokenizer);
}

int count_tokens(std::string_view text) {
    return current_tokenizer()->count(text);
}

std::string trim_to_tokens(std::string_view text, int budget, const Tokenizer& tokenizer) {
    if (budget <= 0) return {};
    if (tokenizer.count(text) <= budget) return std::string(text);

    // Binary search the longest prefix within budget.
    std::size_t lo = 0;                // always within budget
    std::size_t hi = text.size();      // known over budget
    while (lo + 1 < hi) {
        std::size_t mid = utf8_backoff(text, lo + (hi - lo) / 2);
        if (mid <= lo) {
            mid = lo + (hi - lo) / 2;  // degenerate backoff; accept a split
        }
        if (tokenizer.count(text.substr(0, mid)) <= budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::string(text.substr(0, utf8_backoff(text, lo)));
}

std::string trim_to_tokens(std::string_view text, int budget) {
    return trim_to_tokens(text, budget, default_tokenizer());
}

} // namespace pesc
