#include "tar/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace tar {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            if (cur.size() >= 2) tokens.push_back(cur);
            cur.clear();
        }
    }
    if (cur.size() >= 2) tokens.push_back(cur);
    return tokens;
}

Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& docs) {
    if (docs.empty()) throw std::runtime_error("fit_vocabulary: empty document list");
    Vocabulary vocab;
    vocab.num_docs_fitted = static_cast<int>(docs.size());
    std::vector<int> last_doc;  // last document that counted each term
    for (int d = 0; d < static_cast<int>(docs.size()); ++d) {
        for (const auto& term : docs[d]) {
            auto [it, inserted] = vocab.index.try_emplace(term, vocab.size());
            if (inserted) {
                vocab.doc_frequency.push_back(1);
                last_doc.push_back(d);
            } else if (last_doc[it->second] != d) {
                ++vocab.doc_frequency[it->second];
                last_doc[it->second] = d;
            }
        }
    }
    return vocab;
}

FeatureVector vectorize(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
    std::vector<std::pair<int, double>> counts;
    counts.reserve(tokens.size());
    for (const auto& term : tokens) {
        auto it = vocab.index.find(term);
        if (it != vocab.index.end()) counts.emplace_back(it->second, 1.0);
    }
    std::sort(counts.begin(), counts.end());

    FeatureVector out;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < counts.size();) {
        std::size_t j = i;
        double tf = 0.0;
        while (j < counts.size() && counts[j].first == counts[i].first) {
            tf += 1.0;
            ++j;
        }
        const int idx = counts[i].first;
        const double idf =
            std::log((1.0 + vocab.num_docs_fitted) / (1.0 + vocab.doc_frequency[idx])) + 1.0;
        const double w = tf * idf;
        out.entries.emplace_back(idx, w);
        norm_sq += w * w;
        i = j;
    }
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [idx, w] : out.entries) w *= inv;
    }
    return out;
}

}  // namespace tar
