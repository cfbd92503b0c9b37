#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tar/classifier.hpp"
#include "tar/corpus.hpp"
#include "tar/poisson.hpp"
#include "tar/rate.hpp"

namespace tar {

enum class Method { CP, CPClassLabel, CPClassScore };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct RunConfig {
    Method method = Method::CP;
    StopParams stop_params;
    double initial_fraction = 0.025;
    double increment_fraction = 0.025;
    int window_size = 0;  // 0 = max(batch/10, 10)
    TrainConfig classifier_config;
    bool cost_sensitive = true;  // false forces class weights 1/1 (ablation)

    // Test hook: when set, replaces classifier training; must return scores
    // for positions n+1..N given the prefix length n.
    std::function<std::vector<double>(const Topic&, int)> predictor_override;
};

struct IterationTrace {
    int n = 0;
    int relevant_seen = 0;
    bool has_rate = false;
    RateFunction rate;
    double lambda_remaining = 0.0;
    long long upper = 0;
    double estimated_total = 0.0;
    bool stop = false;
    bool classifier_used = false;
};

struct StoppingResult {
    std::string topic_id;
    Method method = Method::CP;
    int stop_position = 0;
    int relevant_found = 0;
    std::vector<IterationTrace> trace;
    std::string error;  // empty on success (run_dataset per-topic failures)
};

/// One simulated review run: reveal gold labels batch by batch, fit the
/// rate function (optionally over classifier predictions for the
/// unexamined tail), and stop once the counting process estimates the
/// desired recall has been reached.
StoppingResult run(const Topic& topic, const RunConfig& config);

/// Runs every topic; results are in topic order and independent of the
/// parallelism degree.
std::vector<StoppingResult> run_dataset(const Dataset& dataset, const RunConfig& config,
                                        int parallelism = 1);

/// Builds the relevance sequence a given iteration fits against (exposed
/// for invariant tests). scores holds classifier scores for n+1..N and is
/// ignored for Method::CP.
RelevanceSequence build_relevance_sequence(const Topic& topic, int n, Method method,
                                           const std::vector<double>& scores);

std::string result_to_json(const StoppingResult& result);

}  // namespace tar
