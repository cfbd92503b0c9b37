#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tar {

/// Sparse L2-normalized feature vector; entries sorted by strictly
/// increasing index.
struct FeatureVector {
    std::vector<std::pair<int, double>> entries;

    bool empty() const { return entries.empty(); }
};

struct Vocabulary {
    std::unordered_map<std::string, int> index;  // term -> feature index
    std::vector<int> doc_frequency;              // by feature index
    int num_docs_fitted = 0;

    int size() const { return static_cast<int>(doc_frequency.size()); }
};

/// Lowercase, split on any non-alphanumeric byte, drop tokens shorter
/// than two characters.
std::vector<std::string> tokenize(const std::string& text);

/// Indexes every term seen in the documents (first-appearance order) and
/// counts document frequencies. Throws on an empty document list.
Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& docs);

/// TF-IDF with smoothed idf = ln((1+num_docs)/(1+df)) + 1, raw term
/// counts, L2 normalization. Out-of-vocabulary tokens are ignored.
FeatureVector vectorize(const Vocabulary& vocab, const std::vector<std::string>& tokens);

}  // namespace tar
