#include "pesc/history.hpp"

#include "pesc/error.hpp"
#include "pesc/tokens.hpp"

namespace pesc {

HistoryStore::HistoryStore(int keep_outputs)
    : keep_outputs_(keep_outputs < 1 ? 1 : keep_outputs) {}

void HistoryStore::append(ActionRecord record) {
    const int expected = static_cast<int>(records_.size()) + 1;
    if (record.iteration != expected) {
        throw IterationGap("expected iteration " + std::to_string(expected) + ", got " +
                           std::to_string(record.iteration));
    }
    records_.push_back(std::move(record));
}

std::string HistoryStore::render(const TreatmentSet& treatments) const {
    const std::size_t n = records_.size();
    const std::size_t first_with_output =
        treatments.history_compression
            ? (n > static_cast<std::size_t>(keep_outputs_) ? n - keep_outputs_ : 0)
            : 0;

    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        const ActionRecord& rec = records_[i];
        const bool show_output = i >= first_with_output;
        for (std::size_t j = 0; j < rec.capabilities.size(); ++j) {
            if (!out.empty()) out += '\n';
            out += "$ ";
            out += rec.capabilities[j].line();
            if (show_output && j < rec.results.size() && !rec.results[j].output.empty()) {
                std::string body = trim_to_tokens(rec.results[j].output, kOutputRenderTokenCap);
                const bool cut = body.size() < rec.results[j].output.size();
                out += '\n';
                out += body;
                if (cut || rec.results[j].truncated) out += "\n[truncated]";
            }
        }
    }
    return out;
}

} // namespace pesc
