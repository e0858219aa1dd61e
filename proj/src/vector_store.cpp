#include "pesc/vector_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pesc/error.hpp"
#include "pesc/tokens.hpp"

namespace pesc {

namespace {

using nlohmann::json;

constexpr int kStoreVersion = 1;

} // namespace

void VectorStore::add(KnowledgeChunk chunk) {
    if (chunks_.empty() && dimension_ == 0) {
        dimension_ = static_cast<int>(chunk.embedding.size());
    }
    if (static_cast<int>(chunk.embedding.size()) != dimension_) {
        throw MalformedStoreFile("chunk embedding dimension " +
                                 std::to_string(chunk.embedding.size()) +
                                 " does not match store dimension " + std::to_string(dimension_));
    }
    chunks_.push_back(std::move(chunk));
}

RetrievalResult VectorStore::retrieve(Embedder& embedder, const std::string& query_text, int k,
                                      int budget_tokens) const {
    if (chunks_.empty()) {
        throw MalformedStoreFile("retrieve() on an empty store");
    }
    const std::vector<float> query = embedder.embed(query_text);

    struct Scored {
        float score;
        const KnowledgeChunk* chunk;
    };
    std::vector<Scored> scored;
    scored.reserve(chunks_.size());
    for (const auto& c : chunks_) {
        scored.push_back({cosine_similarity(query, c.embedding), &c});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk->id < b.chunk->id;
    });

    RetrievalResult out;
    int used = 0;
    for (int i = 0; i < k && i < static_cast<int>(scored.size()); ++i) {
        const KnowledgeChunk& c = *scored[i].chunk;
        std::string piece = out.text.empty() ? c.body : "\n" + c.body;
        const int piece_tokens = count_tokens(piece);
        if (used + piece_tokens <= budget_tokens) {
            out.text += piece;
            used += piece_tokens;
            out.chunk_ids.push_back(c.id);
            continue;
        }
        // Partial fit: take the prefix that still fits and stop.
        std::string prefix = trim_to_tokens(piece, budget_tokens - used);
        if (!prefix.empty()) {
            out.text += prefix;
            out.chunk_ids.push_back(c.id);
        }
        break;
    }
    return out;
}

void VectorStore::save(const std::filesystem::path& path, const std::string& embedder_name,
                       int chunk_size) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw MalformedStoreFile("cannot write " + path.string());

    json header = {{"version", kStoreVersion},
                   {"dimension", dimension_},
                   {"tokenizer", default_tokenizer().name()},
                   {"chunk_size", chunk_size},
                   {"embedder", embedder_name}};
    out << header.dump() << '\n';
    for (const auto& c : chunks_) {
        json line = {{"id", c.id},
                     {"source", c.source},
                     {"body", c.body},
                     {"token_count", c.token_count},
                     {"embedding", c.embedding}};
        out << line.dump() << '\n';
    }
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedStoreFile("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw MalformedStoreFile("empty store file " + path.string());

    VectorStore store;
    try {
        json header = json::parse(line);
        if (header.value("version", 0) != kStoreVersion) {
            throw MalformedStoreFile("unsupported store version in " + path.string());
        }
        store.dimension_ = header.at("dimension").get<int>();
        store.chunk_size_ = header.value("chunk_size", 1000);
        store.embedder_name_ = header.value("embedder", std::string());

        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            KnowledgeChunk c;
            c.id = j.at("id").get<std::string>();
            c.source = j.at("source").get<std::string>();
            c.body = j.at("body").get<std::string>();
            c.token_count = j.at("token_count").get<int>();
            c.embedding = j.at("embedding").get<std::vector<float>>();
            store.add(std::move(c));
        }
    } catch (const json::exception& e) {
        throw MalformedStoreFile("cannot parse " + path.string() + ": " + e.what());
    }
    return store;
}

VectorStore build_store(const std::vector<CorpusDocument>& documents, Embedder& embedder,
                        int chunk_size) {
    VectorStore store(embedder.dimension());
    std::vector<RawChunk> raw = chunk_corpus(documents, chunk_size);

    // Per-source chunk indices for stable ids.
    std::string current_source;
    int index = 0;
    for (auto& rc : raw) {
        if (rc.source != current_source) {
            current_source = rc.source;
            index = 0;
        }
        KnowledgeChunk c;
        c.id = rc.source + "#" + std::to_string(index++);
        c.source = rc.source;
        c.token_count = count_tokens(rc.body);
        c.embedding = embedder.embed(rc.body);
        c.body = std::move(rc.body);
        store.add(std::move(c));
    }
    return store;
}

std::vector<CorpusDocument> read_corpus_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw ConfigError("corpus directory not found: " + dir.string());
    }
    std::vector<fs::path> paths;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".md" || ext == ".txt") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());

    std::vector<CorpusDocument> docs;
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        docs.push_back({fs::relative(p, dir).generic_string(), buf.str()});
    }
    return docs;
}

} // namespace pesc
