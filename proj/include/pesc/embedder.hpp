#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pesc {

// Text-to-vector interface. The hosted embedding model is pluggable; the
// hash embedder below keeps the whole pipeline deterministic offline.
class Embedder {
public:
    virtual ~Embedder() = default;

    std::vector<float> embed(std::string_view text);

    virtual int dimension() const = 0;
    virtual std::string name() const = 0;

    std::int64_t calls() const { return calls_.load(); }

protected:
    virtual std::vector<float> do_embed(std::string_view text) = 0;

private:
    std::atomic<std::int64_t> calls_{0};
};

// Bag-of-token-hashes embedding, L2-normalized. Tokens are lowercased runs
// of alphanumerics; each token increments one hash bucket.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(int dimension = 256) : dimension_(dimension) {}

    int dimension() const override { return dimension_; }
    std::string name() const override { return "hash-" + std::to_string(dimension_); }

protected:
    std::vector<float> do_embed(std::string_view text) override;

private:
    int dimension_;
};

float cosine_similarity(const std::vector<float>& a, const std::vector<float>& b);

} // namespace pesc
