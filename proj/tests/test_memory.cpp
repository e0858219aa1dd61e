#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pesc/error.hpp"
#include "pesc/history.hpp"
#include "pesc/tokens.hpp"

using namespace pesc;

namespace {

ActionRecord make_record(int iteration, const std::string& cmd, const std::string& output) {
    ActionRecord r;
    r.iteration = iteration;
    r.capabilities.push_back(Capability::exec(cmd));
    ExecutionResult res;
    res.capability = r.capabilities.back();
    res.output = output;
    r.results.push_back(res);
    return r;
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

} // namespace

TEST_CASE("append enforces contiguous iterations") {
    HistoryStore store;
    store.append(make_record(1, "id", "uid=1001"));
    CHECK(store.size() == 1);

    CHECK_THROWS_AS(store.append(make_record(5, "id", "x")), IterationGap);
    CHECK_THROWS_AS(store.append(make_record(1, "id", "x")), IterationGap);

    store.append(make_record(2, "whoami", "lowpriv"));
    CHECK(store.size() == 2);
}

TEST_CASE("appended records keep their full outputs") {
    HistoryStore store;
    ActionRecord r = make_record(1, "cat /etc/passwd", "root:x:0:0\nlowpriv:x:1001:1001");
    store.append(r);
    CHECK(store.records().back() == r);
}

TEST_CASE("compression keeps all command lines and only the last output") {
    HistoryStore store;
    for (int i = 1; i <= 5; ++i) {
        store.append(make_record(i, "cmd-" + std::to_string(i), "OUT" + std::to_string(i)));
    }

    TreatmentSet compressed;
    compressed.history_compression = true;
    std::string text = store.render(compressed);

    for (int i = 1; i <= 5; ++i) {
        CHECK(text.find("$ exec_command cmd-" + std::to_string(i)) != std::string::npos);
    }
    for (int i = 1; i <= 4; ++i) {
        CHECK(text.find("OUT" + std::to_string(i)) == std::string::npos);
    }
    CHECK(text.find("OUT5") != std::string::npos);

    TreatmentSet full;
    std::string text_full = store.render(full);
    for (int i = 1; i <= 5; ++i) {
        CHECK(text_full.find("OUT" + std::to_string(i)) != std::string::npos);
    }
}

TEST_CASE("keep_outputs retains a window of outputs") {
    HistoryStore store(3);
    for (int i = 1; i <= 5; ++i) {
        store.append(make_record(i, "cmd-" + std::to_string(i), "OUT" + std::to_string(i)));
    }
    TreatmentSet compressed;
    compressed.history_compression = true;
    std::string text = store.render(compressed);
    CHECK(text.find("OUT1") == std::string::npos);
    CHECK(text.find("OUT2") == std::string::npos);
    CHECK(text.find("OUT3") != std::string::npos);
    CHECK(text.find("OUT4") != std::string::npos);
    CHECK(text.find("OUT5") != std::string::npos);
}

TEST_CASE("empty store renders an empty block") {
    HistoryStore store;
    CHECK(store.render(TreatmentSet{}).empty());
}

TEST_CASE("property: compressed rendering is never longer in tokens") {
    std::mt19937 rng(11);
    for (int c = 0; c < 100; ++c) {
        const int k = 1 + static_cast<int>(rng() % 40);
        HistoryStore store;
        int total_caps = 0;
        for (int i = 1; i <= k; ++i) {
            ActionRecord r;
            r.iteration = i;
            const int caps = 1 + rng() % 3;
            for (int j = 0; j < caps; ++j) {
                std::string cmd = "cmd-" + std::to_string(i) + "-" + std::to_string(j);
                r.capabilities.push_back(Capability::exec(cmd));
                ExecutionResult res;
                res.capability = r.capabilities.back();
                res.output = std::string(rng() % 200, 'o');
                r.results.push_back(res);
                ++total_caps;
            }
            store.append(r);
        }

        TreatmentSet on, off;
        on.history_compression = true;
        std::string with = store.render(on);
        std::string without = store.render(off);
        CHECK(count_tokens(with) <= count_tokens(without));

        // Same command lines regardless of compression; rendering is pure.
        CHECK(count_occurrences(with, "$ ") == total_caps);
        CHECK(count_occurrences(without, "$ ") == total_caps);
        CHECK(store.render(on) == with);
    }
}

TEST_CASE("retained outputs are capped with a marker") {
    HistoryStore store;
    store.append(make_record(1, "dump", std::string(20000, 'x')));
    std::string text = store.render(TreatmentSet{});
    CHECK(count_tokens(text) <
          HistoryStore::kOutputRenderTokenCap + 64);  // command line + marker slack
    CHECK(text.find("[truncated]") != std::string::npos);
}
