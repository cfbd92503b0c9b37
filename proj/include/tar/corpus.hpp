#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tar {

struct Document {
    std::string doc_id;
    std::string text;
    bool gold_relevant = false;
};

/// A ranked document list with held-out gold judgements.
/// docs[i] is the document at ranking position i+1 (positions are 1-based).
struct Topic {
    std::string topic_id;
    std::vector<Document> docs;

    int size() const { return static_cast<int>(docs.size()); }
    int relevant_total() const;
};

struct Dataset {
    std::string name;
    std::vector<Topic> topics;
};

struct SynthParams {
    std::uint64_t seed = 0;
    int num_docs = 0;
    double prevalence = 0.0;     // expected fraction of relevant documents
    double decay = 0.0;          // power-law exponent over positions, typically <= 0
    double vocab_quality = 0.0;  // 0 = identical term distributions, 1 = disjoint
};

/// Loads one topic from a ranking TSV, a TREC qrels file, and a texts TSV.
/// Documents missing from the qrels are non-relevant; documents missing
/// from the texts file get empty text. Throws std::runtime_error with a
/// line number on malformed input.
Topic load_topic(const std::string& ranking_path, const std::string& qrels_path,
                 const std::string& texts_path, const std::string& topic_id);

/// Loads every topic found in the ranking file, ordered by topic_id.
Dataset load_dataset(const std::string& ranking_path, const std::string& qrels_path,
                     const std::string& texts_path, const std::string& name);

/// Deterministic synthetic topic: relevance probability proportional to
/// position^decay scaled so the expected relevant count is prevalence*N,
/// text drawn from relevant/non-relevant term pools whose overlap is
/// 1 - vocab_quality.
Topic synth_topic(std::uint64_t seed, int num_docs, double prevalence, double decay,
                  double vocab_quality, const std::string& topic_id = "synth");

Topic synth_topic(const SynthParams& params, const std::string& topic_id = "synth");

/// Number of gold-relevant documents among ranking positions 1..n.
int relevant_in_prefix(const Topic& topic, int n);

/// Writes ranking.tsv, qrels.txt and texts.tsv for a dataset into dir.
void write_dataset(const Dataset& dataset, const std::string& dir);

std::string escape_text(const std::string& text);
std::string unescape_text(const std::string& text);

/// splitmix64; used to derive independent per-topic seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace tar
