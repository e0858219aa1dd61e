#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pesc/chunker.hpp"
#include "pesc/embedder.hpp"

namespace pesc {

struct KnowledgeChunk {
    std::string id;       // "<source>#<index>"
    std::string source;
    std::string body;
    int token_count = 0;
    std::vector<float> embedding;

    bool operator==(const KnowledgeChunk&) const = default;
};

struct RetrievalResult {
    std::string text;                      // concatenated, trimmed to budget
    std::vector<std::string> chunk_ids;    // provenance, rank order
};

// Immutable after ingestion; concurrent retrieval is safe.
class VectorStore {
public:
    VectorStore() = default;
    explicit VectorStore(int dimension) : dimension_(dimension) {}

    int dimension() const { return dimension_; }
    std::size_t size() const { return chunks_.size(); }
    bool empty() const { return chunks_.empty(); }
    const std::vector<KnowledgeChunk>& chunks() const { return chunks_; }

    void add(KnowledgeChunk chunk);

    // Ranks chunks by cosine similarity to the embedded query (ties broken by
    // ascending chunk id), concatenates the top k in rank order and trims the
    // result to the token budget.
    RetrievalResult retrieve(Embedder& embedder, const std::string& query_text, int k = 4,
                             int budget_tokens = 1200) const;

    // One-file persisted layout: header line (version, dimension, tokenizer,
    // chunk_size, embedder) followed by one JSON line per chunk.
    void save(const std::filesystem::path& path, const std::string& embedder_name,
              int chunk_size) const;
    static VectorStore load(const std::filesystem::path& path);

    const std::string& embedder_name() const { return embedder_name_; }
    int chunk_size() const { return chunk_size_; }

private:
    int dimension_ = 0;
    int chunk_size_ = 1000;
    std::string embedder_name_;
    std::vector<KnowledgeChunk> chunks_;
};

// Chunk + embed a corpus into a fresh store.
VectorStore build_store(const std::vector<CorpusDocument>& documents, Embedder& embedder,
                        int chunk_size = 1000);

// Reads every regular *.md / *.txt file under `dir` (sorted by path).
std::vector<CorpusDocument> read_corpus_dir(const std::filesystem::path& dir);

} // namespace pesc
