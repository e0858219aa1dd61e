#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "pesc/chunker.hpp"
#include "pesc/embedder.hpp"
#include "pesc/error.hpp"
#include "pesc/rag.hpp"
#include "pesc/scripted_backends.hpp"
#include "pesc/tokens.hpp"
#include "pesc/vector_store.hpp"

using namespace pesc;

namespace {

// Independent re-statement of the chunking contract, used as a counting
// oracle: longest prefix within the budget, split at the last paragraph
// break, else the last line break, else the hard limit.
std::vector<std::string> oracle_chunks(const std::string& text, int chunk_size) {
    std::vector<std::string> out;
    std::string rest = text;
    while (!rest.empty()) {
        if (count_tokens(rest) <= chunk_size) {
            out.push_back(rest);
            break;
        }
        std::size_t limit = rest.size();
        while (limit > 0 && count_tokens(rest.substr(0, limit)) > chunk_size) --limit;
        std::size_t split = 0;
        std::size_t para = rest.rfind("\n\n", limit >= 2 ? limit - 2 : 0);
        if (limit >= 2 && para != std::string::npos && para + 2 <= limit) split = para + 2;
        if (split == 0 && limit >= 1) {
            std::size_t nl = rest.rfind('\n', limit - 1);
            if (nl != std::string::npos && nl + 1 <= limit) split = nl + 1;
        }
        if (split == 0) split = limit > 0 ? limit : 1;
        out.push_back(rest.substr(0, split));
        rest.erase(0, split);
    }
    return out;
}

// Cosine similarity computed directly from token multisets; the hash
// embedder must agree when no buckets collide.
double overlap_cosine(const std::string& a, const std::string& b) {
    auto bag = [](const std::string& s) {
        std::map<std::string, int> m;
        std::string tok;
        for (char c : s + " ") {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                tok += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            } else if (!tok.empty()) {
                ++m[tok];
                tok.clear();
            }
        }
        return m;
    };
    auto ma = bag(a), mb = bag(b);
    double dot = 0, na = 0, nb = 0;
    for (const auto& [t, n] : ma) {
        na += double(n) * n;
        auto it = mb.find(t);
        if (it != mb.end()) dot += double(n) * it->second;
    }
    for (const auto& [t, n] : mb) nb += double(n) * n;
    if (na == 0 || nb == 0) return 0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string random_text(std::mt19937& rng, int approx_tokens) {
    static const std::vector<std::string> words = {
        "sudo", "tar", "cron", "docker", "suid", "password", "find", "shell", "root",
        "binary", "exploit", "group", "history", "config", "key", "wildcard"};
    std::string out;
    const int bytes = approx_tokens * 4;
    while (static_cast<int>(out.size()) < bytes) {
        out += words[rng() % words.size()];
        switch (rng() % 8) {
        case 0: out += "\n\n"; break;
        case 1: out += '\n'; break;
        default: out += ' '; break;
        }
    }
    return out;
}

} // namespace

TEST_CASE("chunker: trivial documents") {
    CHECK(chunk_document("", 1000).empty());

    std::string tiny = "ten tokens of text, more or less.";
    auto one = chunk_document(tiny, 1000);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == tiny);

    CHECK_THROWS_AS(chunk_document("abc", 10), ConfigError);
}

TEST_CASE("chunker: a 2500-token document splits into three chunks") {
    std::mt19937 rng(3);
    std::string doc = random_text(rng, 2500);
    auto chunks = chunk_document(doc, 1000);
    CHECK(chunks.size() == 3);
    std::string joined;
    for (const auto& c : chunks) {
        CHECK(count_tokens(c) <= 1000);
        joined += c;
    }
    CHECK(joined == doc);
}

TEST_CASE("chunker: round-trip over random documents matches the oracle") {
    std::mt19937 rng(17);
    for (int i = 0; i < 200; ++i) {
        const int chunk_size = 50 + static_cast<int>(rng() % 200);
        std::string doc = random_text(rng, static_cast<int>(rng() % 600));
        auto chunks = chunk_document(doc, chunk_size);

        std::string joined;
        for (const auto& c : chunks) {
            CHECK(count_tokens(c) <= chunk_size);
            CHECK(!c.empty());
            joined += c;
        }
        CHECK(joined == doc);
        CHECK(chunks.size() == oracle_chunks(doc, chunk_size).size());
    }
}

TEST_CASE("chunker: prefers paragraph boundaries") {
    std::string para1(350, 'a');
    std::string para2(100, 'b');
    std::string doc = para1 + "\n\n" + para2;  // 452 bytes = 113 tokens
    auto chunks = chunk_document(doc, 100);    // para1 alone is 88 tokens
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0] == para1 + "\n\n");
    CHECK(chunks[1] == para2);
}

TEST_CASE("embedder: deterministic, normalized, self-similar") {
    HashEmbedder emb(256);
    auto v1 = emb.embed("sudo tar");
    auto v2 = emb.embed("sudo tar");
    CHECK(v1 == v2);
    CHECK(v1.size() == 256);

    double norm = 0;
    for (float x : v1) norm += double(x) * x;
    CHECK(std::abs(norm - 1.0) < 1e-6);

    CHECK(cosine_similarity(v1, v2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(emb.embed(""), EmptyText);
    CHECK(emb.calls() == 2);  // the failed call does not count
}

TEST_CASE("embedder: similarity ordering follows token overlap") {
    HashEmbedder emb(256);
    auto q = emb.embed("suid binary find");
    float near = cosine_similarity(q, emb.embed("suid binaries search"));
    float far = cosine_similarity(q, emb.embed("docker group"));
    CHECK(near > far);

    // Exact agreement with the token-overlap oracle (no bucket collisions
    // among these words at dimension 256).
    CHECK(near == doctest::Approx(overlap_cosine("suid binary find", "suid binaries search"))
                      .epsilon(1e-5));
    CHECK(far == doctest::Approx(overlap_cosine("suid binary find", "docker group"))
                     .epsilon(1e-5));
}

TEST_CASE("retrieve: budget trimming over three 1000-token chunks") {
    HashEmbedder emb(64);
    VectorStore store(64);
    std::mt19937 rng(5);
    for (int i = 0; i < 3; ++i) {
        KnowledgeChunk c;
        c.id = "doc#" + std::to_string(i);
        c.source = "doc";
        c.body = random_text(rng, 995);
        while (count_tokens(c.body) < 995) c.body += " sudo";
        c.token_count = count_tokens(c.body);
        REQUIRE(c.token_count <= 1000);
        c.embedding = emb.embed(c.body);
        store.add(c);
    }
    RetrievalResult r = store.retrieve(emb, "sudo tar cron docker", 4, 1200);
    CHECK(count_tokens(r.text) <= 1200);
    CHECK(count_tokens(r.text) > 1000);  // first chunk plus a prefix of the second
    CHECK(r.chunk_ids.size() == 2);
}

TEST_CASE("retrieve: single-chunk store and empty store") {
    HashEmbedder emb(64);
    VectorStore store(64);
    CHECK_THROWS_AS(store.retrieve(emb, "q", 1, 100), Error);

    KnowledgeChunk c;
    c.id = "x#0";
    c.source = "x";
    c.body = "sudo tar checkpoint";
    c.token_count = count_tokens(c.body);
    c.embedding = emb.embed(c.body);
    store.add(c);
    RetrievalResult r = store.retrieve(emb, "sudo", 1, 1200);
    CHECK(r.text == c.body);
    CHECK(r.chunk_ids == std::vector<std::string>{"x#0"});
}

TEST_CASE("retrieve: ranking equals a brute-force cosine oracle") {
    std::mt19937 rng(23);
    HashEmbedder emb(128);
    for (int trial = 0; trial < 20; ++trial) {
        VectorStore store(128);
        const int n = 2 + static_cast<int>(rng() % 99);
        std::vector<KnowledgeChunk> chunks;
        for (int i = 0; i < n; ++i) {
            KnowledgeChunk c;
            c.id = "c#" + std::to_string(i);
            c.source = "c";
            c.body = random_text(rng, 5 + rng() % 40);
            c.token_count = count_tokens(c.body);
            c.embedding = emb.embed(c.body);
            chunks.push_back(c);
            store.add(c);
        }
        std::string query = random_text(rng, 8);
        auto qv = emb.embed(query);

        // Brute force: exhaustive cosine, score desc, id asc.
        std::vector<std::pair<float, std::string>> scored;
        for (const auto& c : chunks) {
            scored.push_back({cosine_similarity(qv, c.embedding), c.id});
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        const int k = 1 + static_cast<int>(rng() % 6);
        RetrievalResult r = store.retrieve(emb, query, k, 1 << 20);
        REQUIRE(r.chunk_ids.size() == std::min<std::size_t>(k, scored.size()));
        for (std::size_t i = 0; i < r.chunk_ids.size(); ++i) {
            CHECK(r.chunk_ids[i] == scored[i].second);
        }
    }
}

TEST_CASE("retrieve: ranking is invariant under positive scaling") {
    HashEmbedder emb(64);
    VectorStore plain(64), scaled(64);
    std::mt19937 rng(31);
    for (int i = 0; i < 10; ++i) {
        KnowledgeChunk c;
        c.id = "s#" + std::to_string(i);
        c.source = "s";
        c.body = random_text(rng, 10);
        c.token_count = count_tokens(c.body);
        c.embedding = emb.embed(c.body);
        plain.add(c);
        for (auto& x : c.embedding) x *= 7.5f;
        scaled.add(c);
    }
    auto a = plain.retrieve(emb, "sudo cron docker", 5, 1 << 20);
    auto b = scaled.retrieve(emb, "sudo cron docker", 5, 1 << 20);
    CHECK(a.chunk_ids == b.chunk_ids);
}

TEST_CASE("store: save/load round-trip is lossless") {
    namespace fs = std::filesystem;
    HashEmbedder emb(96);
    std::vector<CorpusDocument> docs = {{"a.md", "sudo tar checkpoint exec\n\nmore text"},
                                        {"b.md", "docker group membership"}};
    VectorStore store = build_store(docs, emb, 1000);
    REQUIRE(store.size() == 2);
    CHECK(store.chunks()[0].id == "a.md#0");

    fs::path path = fs::temp_directory_path() / "pesc_store_test.jsonl";
    store.save(path, emb.name(), 1000);
    VectorStore loaded = VectorStore::load(path);

    CHECK(loaded.dimension() == store.dimension());
    CHECK(loaded.chunk_size() == 1000);
    CHECK(loaded.embedder_name() == emb.name());
    REQUIRE(loaded.size() == store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        CHECK(loaded.chunks()[i] == store.chunks()[i]);
    }
    fs::remove(path);

    CHECK_THROWS_AS(VectorStore::load("/nonexistent/store.jsonl"), MalformedStoreFile);
}

TEST_CASE("generate_rag_query returns the backend answer verbatim") {
    KeyedScriptBackend backend("a generic search query");
    ChatResponse r = generate_rag_query(backend, "sudo -l; cat /etc/crontab",
                                        "combined output of all commands", 0.8, 7);
    CHECK(r.content == "a generic search query");
    CHECK(backend.calls() == 1);

    // Valid on an empty combined output, too.
    CHECK_NOTHROW(generate_rag_query(backend, "id", "", 0.8, std::nullopt));
    CHECK(backend.calls() == 2);
}

TEST_CASE("shipped corpus ingests; chunk count matches the oracle") {
    auto docs = read_corpus_dir(std::string(PESC_DATA_DIR) + "/corpus");
    REQUIRE(docs.size() >= 6);

    std::size_t expected = 0;
    for (const auto& d : docs) expected += oracle_chunks(d.text, 1000).size();

    HashEmbedder emb(256);
    VectorStore store = build_store(docs, emb, 1000);
    CHECK(store.size() == expected);
    CHECK(store.size() > docs.size());  // at least one document spans chunks

    for (const auto& c : store.chunks()) {
        CHECK(c.token_count <= 1000);
        CHECK(c.token_count > 0);
        double norm = 0;
        for (float x : c.embedding) norm += double(x) * x;
        CHECK(norm > 0);
    }

    // Retrieval over the real corpus honors the budget.
    RetrievalResult r = store.retrieve(emb, "how to abuse sudo tar to get a root shell", 4, 1200);
    CHECK(count_tokens(r.text) <= 1200);
    CHECK(!r.chunk_ids.empty());
}
