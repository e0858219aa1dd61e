#include "pesc/embedder.hpp"

#include <cctype>
#include <cmath>

#include "pesc/error.hpp"

namespace pesc {

std::vector<float> Embedder::embed(std::string_view text) {
    if (text.empty()) throw EmptyText("cannot embed empty text");
    calls_.fetch_add(1);
    return do_embed(text);
}

std::vector<float> HashEmbedder::do_embed(std::string_view text) {
    std::vector<float> v(static_cast<std::size_t>(dimension_), 0.0f);

    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    bool in_token = false;
    auto flush = [&] {
        if (in_token) {
            v[h % static_cast<std::uint64_t>(dimension_)] += 1.0f;
            h = 1469598103934665603ull;
            in_token = false;
        }
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            h = (h ^ static_cast<std::uint64_t>(std::tolower(c))) * 1099511628211ull;
            in_token = true;
        } else {
            flush();
        }
    }
    flush();

    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm == 0.0) {
        // Text with no alphanumeric tokens still needs a valid direction.
        v[0] = 1.0f;
        return v;
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm));
    for (float& x : v) x *= inv;
    return v;
}

float cosine_similarity(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.size() != b.size() || a.empty()) return 0.0f;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0f;
    return static_cast<float>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

} // namespace pesc
