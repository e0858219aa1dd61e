#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pesc {

// The five toggleable pipeline treatments plus the per-scenario guidance
// hint. Guidance is carried here for convenience but is not part of the
// 2^5 ablation space.
struct TreatmentSet {
    bool analyze = false;
    bool cot = false;
    bool history_compression = false;
    bool rag = false;
    bool svp = false;
    bool guidance = false;

    bool operator==(const TreatmentSet&) const = default;
};

// Retrieval output only ever reaches the model through the analysis prompt,
// so rag without analyze behaves exactly like neither. Normalization forces
// rag off in that case; idempotent.
TreatmentSet normalize_treatments(TreatmentSet t);

// All 2^5 combinations of the five flags, normalized and deduplicated, in a
// deterministic canonical order (all-off first, then ascending with svp as
// the least significant flag and analyze the most significant). Guidance is
// left off in every returned set. Always 24 entries.
std::vector<TreatmentSet> enumerate_ablation_sets();

// Compact flag string over {A,C,H,R,S}; empty string means all off.
// Guidance is not part of the code.
std::string treatment_code(const TreatmentSet& t);

// Accepts the letters in any order and case; throws ConfigError on anything
// outside {A,C,H,R,S}.
TreatmentSet parse_treatment_code(std::string_view code);

} // namespace pesc
