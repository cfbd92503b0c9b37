#include "tar/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace tar {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

// Uniform double in [0,1) from the engine's raw 64-bit output; avoids the
// implementation-defined std distributions so seeds reproduce everywhere.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

int Topic::relevant_total() const {
    int r = 0;
    for (const auto& d : docs) r += d.gold_relevant ? 1 : 0;
    return r;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string escape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\\' || i + 1 == text.size()) {
            out += text[i];
            continue;
        }
        switch (text[++i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            default:
                out += '\\';
                out += text[i];
        }
    }
    return out;
}

Topic load_topic(const std::string& ranking_path, const std::string& qrels_path,
                 const std::string& texts_path, const std::string& topic_id) {
    // ranking: topic_id <TAB> doc_id <TAB> rank
    std::vector<std::pair<int, std::string>> ranked;
    {
        auto in = open_or_throw(ranking_path);
        std::string line;
        int line_no = 0;
        std::unordered_set<int> seen_ranks;
        std::unordered_set<std::string> seen_docs;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto cols = split_tabs(line);
            if (cols.size() != 3) parse_fail(ranking_path, line_no, "expected 3 tab-separated columns");
            if (cols[0] != topic_id) continue;
            if (cols[1].empty()) parse_fail(ranking_path, line_no, "empty doc_id");
            int rank = 0;
            try {
                std::size_t pos = 0;
                rank = std::stoi(cols[2], &pos);
                if (pos != cols[2].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                parse_fail(ranking_path, line_no, "bad rank '" + cols[2] + "'");
            }
            if (rank < 1) parse_fail(ranking_path, line_no, "rank must be >= 1");
            if (!seen_ranks.insert(rank).second)
                parse_fail(ranking_path, line_no, "duplicate rank " + std::to_string(rank));
            if (!seen_docs.insert(cols[1]).second)
                parse_fail(ranking_path, line_no, "duplicate doc_id " + cols[1]);
            ranked.emplace_back(rank, cols[1]);
        }
    }
    if (ranked.empty()) throw std::runtime_error("empty ranking for topic " + topic_id);
    std::sort(ranked.begin(), ranked.end());

    // qrels: topic_id 0 doc_id relevance (whitespace separated)
    std::unordered_map<std::string, int> relevance;
    {
        auto in = open_or_throw(qrels_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::istringstream ss(line);
            std::string t, iter, doc;
            int rel;
            if (!(ss >> t >> iter >> doc >> rel))
                parse_fail(qrels_path, line_no, "expected 'topic 0 doc relevance'");
            if (t != topic_id) continue;
            relevance[doc] = rel;
        }
    }

    // texts: doc_id <TAB> escaped text
    std::unordered_map<std::string, std::string> texts;
    {
        auto in = open_or_throw(texts_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos) parse_fail(texts_path, line_no, "expected doc_id<TAB>text");
            texts[line.substr(0, tab)] = unescape_text(line.substr(tab + 1));
        }
    }

    Topic topic;
    topic.topic_id = topic_id;
    topic.docs.reserve(ranked.size());
    for (const auto& [rank, doc_id] : ranked) {
        Document d;
        d.doc_id = doc_id;
        auto rel = relevance.find(doc_id);
        d.gold_relevant = rel != relevance.end() && rel->second > 0;
        auto txt = texts.find(doc_id);
        if (txt != texts.end()) d.text = txt->second;
        topic.docs.push_back(std::move(d));
    }
    return topic;
}

Dataset load_dataset(const std::string& ranking_path, const std::string& qrels_path,
                     const std::string& texts_path, const std::string& name) {
    std::vector<std::string> ids;
    {
        auto in = open_or_throw(ranking_path);
        std::string line;
        std::unordered_set<std::string> seen;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            auto id = line.substr(0, tab);
            if (seen.insert(id).second) ids.push_back(id);
        }
    }
    std::sort(ids.begin(), ids.end());
    Dataset ds;
    ds.name = name;
    for (const auto& id : ids)
        ds.topics.push_back(load_topic(ranking_path, qrels_path, texts_path, id));
    return ds;
}

Topic synth_topic(const SynthParams& p, const std::string& topic_id) {
    return synth_topic(p.seed, p.num_docs, p.prevalence, p.decay, p.vocab_quality, topic_id);
}

Topic synth_topic(std::uint64_t seed, int num_docs, double prevalence, double decay,
                  double vocab_quality, const std::string& topic_id) {
    if (num_docs < 10) throw std::runtime_error("synth_topic: N must be >= 10");
    if (prevalence <= 0.0 || prevalence > 1.0)
        throw std::runtime_error("synth_topic: prevalence must be in (0,1]");
    if (decay > 0.0) throw std::runtime_error("synth_topic: decay must be <= 0");
    if (vocab_quality < 0.0 || vocab_quality > 1.0)
        throw std::runtime_error("synth_topic: vocab_quality must be in [0,1]");
    if (prevalence * num_docs < 1.0) throw std::runtime_error("no relevant documents expected");

    // Fixed generator layout: 2000 terms split into a relevant-only pool, a
    // non-relevant-only pool and a shared pool; 30 terms per document.
    constexpr int kVocabSize = 2000;
    constexpr int kDocLen = 30;
    constexpr int kPoolSize = kVocabSize / 3;            // 666
    constexpr int kSharedStart = 2 * kPoolSize;          // 1332
    constexpr int kSharedSize = kVocabSize - kSharedStart;

    std::mt19937_64 rng(seed);

    double weight_sum = 0.0;
    std::vector<double> weight(num_docs);
    for (int i = 0; i < num_docs; ++i) {
        weight[i] = std::pow(static_cast<double>(i + 1), decay);
        weight_sum += weight[i];
    }
    const double scale = prevalence * num_docs / weight_sum;

    Topic topic;
    topic.topic_id = topic_id;
    topic.docs.reserve(num_docs);
    char idbuf[32];
    for (int i = 0; i < num_docs; ++i) {
        Document d;
        std::snprintf(idbuf, sizeof idbuf, "-d%06d", i + 1);
        d.doc_id = topic_id + idbuf;  // doc ids stay unique across a dataset's shared files
        const double p_rel = std::min(1.0, scale * weight[i]);
        d.gold_relevant = next_uniform(rng) < p_rel;

        const int own_start = d.gold_relevant ? 0 : kPoolSize;
        std::string text;
        text.reserve(kDocLen * 6);
        char term[16];
        for (int t = 0; t < kDocLen; ++t) {
            int idx;
            if (next_uniform(rng) < vocab_quality) {
                idx = own_start + static_cast<int>(next_uniform(rng) * kPoolSize);
            } else {
                idx = kSharedStart + static_cast<int>(next_uniform(rng) * kSharedSize);
            }
            std::snprintf(term, sizeof term, "w%04d", idx);
            if (t) text += ' ';
            text += term;
        }
        d.text = std::move(text);
        topic.docs.push_back(std::move(d));
    }
    return topic;
}

int relevant_in_prefix(const Topic& topic, int n) {
    if (n < 0 || n > topic.size())
        throw std::runtime_error("relevant_in_prefix: n out of range");
    int r = 0;
    for (int i = 0; i < n; ++i) r += topic.docs[i].gold_relevant ? 1 : 0;
    return r;
}

void write_dataset(const Dataset& dataset, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream ranking(dir + "/ranking.tsv");
    std::ofstream qrels(dir + "/qrels.txt");
    std::ofstream texts(dir + "/texts.tsv");
    if (!ranking || !qrels || !texts) throw std::runtime_error("cannot write into " + dir);
    for (const auto& topic : dataset.topics) {
        for (int i = 0; i < topic.size(); ++i) {
            const auto& d = topic.docs[i];
            ranking << topic.topic_id << '\t' << d.doc_id << '\t' << (i + 1) << '\n';
            qrels << topic.topic_id << " 0 " << d.doc_id << ' ' << (d.gold_relevant ? 1 : 0)
                  << '\n';
            texts << d.doc_id << '\t' << escape_text(d.text) << '\n';
        }
    }
}

}  // namespace tar
