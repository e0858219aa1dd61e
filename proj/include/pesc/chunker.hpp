#pragma once

#include <string>
#include <vector>

namespace pesc {

struct CorpusDocument {
    std::string name;
    std::string text;
};

struct RawChunk {
    std::string source;  // document name
    std::string body;    // contiguous substring of the document
};

// Splits each document into chunks of at most chunk_size tokens, preferring
// paragraph boundaries, then line boundaries, then hard byte boundaries.
// Chunks are contiguous, non-overlapping substrings: concatenating a
// document's chunks reproduces it exactly. chunk_size must be >= 50.
std::vector<RawChunk> chunk_corpus(const std::vector<CorpusDocument>& documents,
                                   int chunk_size = 1000);

std::vector<std::string> chunk_document(const std::string& text, int chunk_size = 1000);

} // namespace pesc
