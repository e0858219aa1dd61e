#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pesc/error.hpp"
#include "pesc/treatments.hpp"
#include "pesc/types.hpp"

using namespace pesc;

namespace {

TreatmentSet from_bits(int bits) {
    TreatmentSet t;
    t.analyze = (bits >> 4) & 1;
    t.cot = (bits >> 3) & 1;
    t.history_compression = (bits >> 2) & 1;
    t.rag = (bits >> 1) & 1;
    t.svp = bits & 1;
    return t;
}

} // namespace

TEST_CASE("normalize forces rag off without analyze") {
    TreatmentSet t;
    t.rag = true;
    CHECK(normalize_treatments(t) == TreatmentSet{});

    CHECK(normalize_treatments(TreatmentSet{}) == TreatmentSet{});

    TreatmentSet full;
    full.rag = full.analyze = full.cot = true;
    CHECK(normalize_treatments(full) == full);
}

TEST_CASE("normalize is an idempotent projection over all combinations") {
    for (int bits = 0; bits < 64; ++bits) {
        TreatmentSet t = from_bits(bits & 31);
        t.guidance = bits & 32;
        TreatmentSet once = normalize_treatments(t);
        CHECK(normalize_treatments(once) == once);
        CHECK(once.guidance == t.guidance);  // guidance untouched
    }
}

TEST_CASE("ablation enumeration: 24 distinct normalized sets") {
    auto sets = enumerate_ablation_sets();
    REQUIRE(sets.size() == 24);

    // All distinct and all normalized.
    for (std::size_t i = 0; i < sets.size(); ++i) {
        CHECK(normalize_treatments(sets[i]) == sets[i]);
        CHECK(!sets[i].guidance);
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            CHECK(!(sets[i] == sets[j]));
        }
    }

    // The all-off baseline comes first.
    CHECK(sets.front() == TreatmentSet{});

    // Projecting all 32 raw combinations lands exactly on these 24.
    std::vector<TreatmentSet> projected;
    for (int bits = 0; bits < 32; ++bits) {
        TreatmentSet n = normalize_treatments(from_bits(bits));
        if (std::find(projected.begin(), projected.end(), n) == projected.end()) {
            projected.push_back(n);
        }
    }
    CHECK(projected.size() == 24);
}

TEST_CASE("ablation enumeration: flag counts and key members") {
    auto sets = enumerate_ablation_sets();

    int with_rag = 0, with_cot = 0, with_hc = 0;
    bool has_acr = false;
    for (const auto& t : sets) {
        if (t.rag) ++with_rag;
        if (t.cot) ++with_cot;
        if (t.history_compression) ++with_hc;
        CHECK(!(t.rag && !t.analyze));
        TreatmentSet acr;
        acr.analyze = acr.cot = acr.rag = true;
        if (t == acr) has_acr = true;
    }
    CHECK(with_rag == 8);
    CHECK(with_cot == 12);
    CHECK(with_hc == 12);
    CHECK(has_acr);
}

TEST_CASE("treatment code round-trips") {
    for (const auto& t : enumerate_ablation_sets()) {
        CHECK(parse_treatment_code(treatment_code(t)) == t);
    }
    CHECK(treatment_code(TreatmentSet{}) == "");
    CHECK(parse_treatment_code("achrs") == parse_treatment_code("SRHCA"));
    CHECK_THROWS_AS(parse_treatment_code("AX"), ConfigError);
}

TEST_CASE("capability factories enforce non-empty fields") {
    CHECK(Capability::exec("id").line() == "exec_command id");
    CHECK(Capability::credential("lowpriv", "trustno1").line() ==
          "test_credential lowpriv trustno1");
    CHECK_THROWS_AS(Capability::exec(""), MalformedCapability);
    CHECK_THROWS_AS(Capability::credential("", "x"), MalformedCapability);
    CHECK_THROWS_AS(Capability::credential("x", ""), MalformedCapability);
}

TEST_CASE("run config bounds") {
    RunConfig c;
    c.scenario_id = "test-1";
    CHECK_NOTHROW(c.validate());

    RunConfig bad = c;
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = c;
    bad.context_budget = 1024;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = c;
    bad.scenario_id.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("outcome success is tied to the end state") {
    RunOutcome o;
    o.end_state = EndState::RootAchieved;
    o.success = true;
    CHECK(o.success == (o.end_state == EndState::RootAchieved));

    CHECK(end_state_from_name(end_state_name(EndState::BackendFailure)) ==
          EndState::BackendFailure);
    CHECK_THROWS_AS(end_state_from_name("bogus"), MalformedTraceFile);
}
