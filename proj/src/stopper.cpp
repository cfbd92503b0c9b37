#include "tar/stopper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "tar/textproc.hpp"

namespace tar {

namespace {

int ceil_fraction(double fraction, int n) {
    return static_cast<int>(std::ceil(fraction * n));
}

bool any_positive(const std::vector<SamplePoint>& points) {
    for (const auto& pt : points) {
        if (pt.p > 0.0) return true;
    }
    return false;
}

// Trains on the revealed prefix and scores positions n+1..N. Returns false
// (leaving scores empty) when the prefix is single-class and no classifier
// can be trained; the caller falls back to prefix-only fitting.
bool classifier_scores(const Topic& topic, int n,
                       const std::vector<std::vector<std::string>>& tokens,
                       const RunConfig& config, std::vector<double>& scores) {
    if (config.predictor_override) {
        scores = config.predictor_override(topic, n);
        if (static_cast<int>(scores.size()) != topic.size() - n)
            throw std::runtime_error("predictor_override: wrong score count");
        return true;
    }
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) (topic.docs[i].gold_relevant ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) return false;

    // Vocabulary and features come from the examined prefix only.
    std::vector<std::vector<std::string>> prefix_tokens(tokens.begin(), tokens.begin() + n);
    const Vocabulary vocab = fit_vocabulary(prefix_tokens);

    std::vector<FeatureVector> features;
    std::vector<bool> labels;
    features.reserve(n);
    labels.reserve(n);
    for (int i = 0; i < n; ++i) {
        features.push_back(vectorize(vocab, tokens[i]));
        labels.push_back(topic.docs[i].gold_relevant);
    }
    const ClassWeights cw = config.cost_sensitive ? class_weights(labels) : ClassWeights{};
    const ClassifierModel model = train(features, labels, cw, config.classifier_config,
                                        vocab.size());

    scores.clear();
    scores.reserve(topic.size() - n);
    for (int i = n; i < topic.size(); ++i)
        scores.push_back(predict_score(model, vectorize(vocab, tokens[i])));
    return true;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::CP: return "CP";
        case Method::CPClassLabel: return "CP_ClassLabel";
        case Method::CPClassScore: return "CP_ClassScore";
    }
    return "CP";
}

Method method_from_name(const std::string& name) {
    if (name == "CP") return Method::CP;
    if (name == "CP_ClassLabel") return Method::CPClassLabel;
    if (name == "CP_ClassScore") return Method::CPClassScore;
    throw std::runtime_error("unknown method '" + name + "'");
}

RelevanceSequence build_relevance_sequence(const Topic& topic, int n, Method method,
                                           const std::vector<double>& scores) {
    RelevanceSequence seq;
    const int len = method == Method::CP ? n : topic.size();
    seq.values.reserve(len);
    seq.provenance.reserve(len);
    for (int i = 0; i < n; ++i) {
        seq.values.push_back(topic.docs[i].gold_relevant ? 1.0 : 0.0);
        seq.provenance.push_back(Provenance::Manual);
    }
    if (method == Method::CPClassLabel) {
        for (double s : scores) {
            seq.values.push_back(s >= 0.5 ? 1.0 : 0.0);
            seq.provenance.push_back(Provenance::PredictedLabel);
        }
    } else if (method == Method::CPClassScore) {
        for (double s : scores) {
            seq.values.push_back(s);
            seq.provenance.push_back(Provenance::PredictedScore);
        }
    }
    return seq;
}

StoppingResult run(const Topic& topic, const RunConfig& config) {
    const int N = topic.size();
    if (N < 1) throw std::runtime_error("run: empty topic");
    if (config.initial_fraction <= 0.0 || config.initial_fraction > 1.0 ||
        config.increment_fraction <= 0.0 || config.increment_fraction > 1.0)
        throw std::runtime_error("run: batch fractions must be in (0,1]");

    const int step = std::max(1, ceil_fraction(config.increment_fraction, N));
    const int window = config.window_size > 0 ? config.window_size : std::max(step / 10, 10);

    std::vector<std::vector<std::string>> tokens;
    if (config.method != Method::CP) {
        tokens.reserve(N);
        for (const auto& d : topic.docs) tokens.push_back(tokenize(d.text));
    }

    StoppingResult result;
    result.topic_id = topic.topic_id;
    result.method = config.method;

    int n = std::min(std::max(1, ceil_fraction(config.initial_fraction, N)), N);
    for (;;) {
        IterationTrace it;
        it.n = n;
        it.relevant_seen = relevant_in_prefix(topic, n);

        std::vector<double> scores;
        Method effective = Method::CP;
        if (config.method != Method::CP && n < N &&
            classifier_scores(topic, n, tokens, config, scores)) {
            effective = config.method;
            it.classifier_used = true;
        }
        const RelevanceSequence seq = build_relevance_sequence(topic, n, effective, scores);

        std::vector<SamplePoint> points;
        if (seq.size() >= window) points = sample_points(seq, window);

        bool forced_continue = false;
        if (points.size() >= 2 && any_positive(points)) {
            it.rate = fit_power_law(points);
            it.has_rate = true;
            it.lambda_remaining = n < N ? expected_count(it.rate, n + 1, N) : 0.0;
        } else {
            // No fit possible. A sequence with no relevant signal at all gives
            // a zero remaining-relevant estimate, so all-nonrelevant topics
            // stop at the first batch. With relevant already observed but too
            // few usable sample points there is no estimate yet: keep going.
            it.has_rate = false;
            it.lambda_remaining = 0.0;
            bool signal = false;
            for (int i = 0; i < seq.size(); ++i) {
                const double v = seq.provenance[i] == Provenance::PredictedScore &&
                                         seq.values[i] < 0.5
                                     ? 0.0
                                     : seq.values[i];
                signal = signal || v > 0.0;
            }
            forced_continue = signal;
        }

        const StopDecision d =
            stop_decision(it.relevant_seen, it.lambda_remaining, config.stop_params);
        it.upper = d.upper;
        it.estimated_total = d.estimated_total;
        it.stop = d.stop && !forced_continue;
        result.trace.push_back(it);

        if (it.stop || n >= N) {
            result.stop_position = n;
            result.relevant_found = it.relevant_seen;
            break;
        }
        n = std::min(n + step, N);
    }
    return result;
}

std::vector<StoppingResult> run_dataset(const Dataset& dataset, const RunConfig& config,
                                        int parallelism) {
    const int num_topics = static_cast<int>(dataset.topics.size());
    std::vector<StoppingResult> results(num_topics);
    if (num_topics == 0) return results;
    parallelism = std::clamp(parallelism, 1, num_topics);

    auto worker = [&](int first, int stride) {
        for (int i = first; i < num_topics; i += stride) {
            try {
                results[i] = run(dataset.topics[i], config);
            } catch (const std::exception& e) {
                results[i].topic_id = dataset.topics[i].topic_id;
                results[i].method = config.method;
                results[i].error = e.what();
            }
        }
    };
    if (parallelism == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(parallelism);
        for (int t = 0; t < parallelism; ++t) threads.emplace_back(worker, t, parallelism);
        for (auto& th : threads) th.join();
    }
    return results;
}

std::string result_to_json(const StoppingResult& result) {
    nlohmann::json j;
    j["topic_id"] = result.topic_id;
    j["method"] = method_name(result.method);
    j["stop_position"] = result.stop_position;
    j["relevant_found"] = result.relevant_found;
    if (!result.error.empty()) j["error"] = result.error;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& it : result.trace) {
        nlohmann::json t;
        t["n"] = it.n;
        t["relevant_seen"] = it.relevant_seen;
        if (it.has_rate) t["rate"] = {{"a", it.rate.a}, {"k", it.rate.k}};
        else t["rate"] = nullptr;
        t["lambda_remaining"] = it.lambda_remaining;
        t["upper"] = it.upper;
        t["estimated_total"] = it.estimated_total;
        t["decision"] = it.stop ? "stop" : "continue";
        t["classifier_used"] = it.classifier_used;
        trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
    return j.dump();
}

}  // namespace tar
