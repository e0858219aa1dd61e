#include "pesc/treatments.hpp"

#include <algorithm>
#include <cctype>

#include "pesc/error.hpp"

namespace pesc {

TreatmentSet normalize_treatments(TreatmentSet t) {
    if (!t.analyze) {
        t.rag = false;
    }
    return t;
}

std::vector<TreatmentSet> enumerate_ablation_sets() {
    std::vector<TreatmentSet> sets;
    sets.reserve(24);
    for (int bits = 0; bits < 32; ++bits) {
        TreatmentSet t;
        t.analyze = (bits >> 4) & 1;
        t.cot = (bits >> 3) & 1;
        t.history_compression = (bits >> 2) & 1;
        t.rag = (bits >> 1) & 1;
        t.svp = bits & 1;
        t = normalize_treatments(t);
        if (std::find(sets.begin(), sets.end(), t) == sets.end()) {
            sets.push_back(t);
        }
    }
    return sets;
}

std::string treatment_code(const TreatmentSet& t) {
    std::string code;
    if (t.analyze) code += 'A';
    if (t.cot) code += 'C';
    if (t.history_compression) code += 'H';
    if (t.rag) code += 'R';
    if (t.svp) code += 'S';
    return code;
}

TreatmentSet parse_treatment_code(std::string_view code) {
    TreatmentSet t;
    for (char raw : code) {
        switch (std::toupper(static_cast<unsigned char>(raw))) {
        case 'A': t.analyze = true; break;
        case 'C': t.cot = true; break;
        case 'H': t.history_compression = true; break;
        case 'R': t.rag = true; break;
        case 'S': t.svp = true; break;
        default:
            throw ConfigError("unknown treatment flag '" + std::string(1, raw) +
                              "' (expected letters from ACHRS)");
        }
    }
    return t;
}

} // namespace pesc
