#pragma once

#include <string>
#include <vector>

#include "pesc/treatments.hpp"
#include "pesc/types.hpp"

namespace pesc {

// Per-run action history. Stores full records (compression never discards
// data; it is purely a rendering concern) and renders the ~~~ bash history
// block for the command prompt.
class HistoryStore {
public:
    explicit HistoryStore(int keep_outputs = 1);

    // record.iteration must be exactly len+1; throws IterationGap otherwise.
    void append(ActionRecord record);

    const std::vector<ActionRecord>& records() const { return records_; }
    int keep_outputs() const { return keep_outputs_; }
    std::size_t size() const { return records_.size(); }

    // With history_compression on, every executed command line is rendered
    // but outputs appear only for the most recent keep_outputs iterations;
    // with it off, every command is followed by its full output. Retained
    // outputs are capped at kOutputRenderTokenCap tokens each.
    std::string render(const TreatmentSet& treatments) const;

    static constexpr int kOutputRenderTokenCap = 3000;

private:
    std::vector<ActionRecord> records_;
    int keep_outputs_;
};

} // namespace pesc
