#pragma once

#include <string>
#include <vector>

#include "tar/eval.hpp"
#include "tar/stopper.hpp"

namespace tar {

/// One results.jsonl line: a (topic, method, desired-recall) run with its
/// per-topic metrics.
struct ResultRecord {
    std::string dataset;
    std::string topic_id;
    std::string method;
    double desired_recall = 0.0;
    int num_docs = 0;
    int num_relevant = 0;
    int stop_position = 0;
    int relevant_found = 0;
    TopicMetrics metrics;
    bool cost_sensitive = true;
    std::string error;
};

ResultRecord make_record(const std::string& dataset, const Topic& topic,
                         const StoppingResult& result, double desired_recall,
                         bool cost_sensitive = true);

/// Serializes the record (with the run trace when given) as one JSON line.
std::string record_to_json(const ResultRecord& record, const StoppingResult* result);

ResultRecord record_from_json(const std::string& line);
std::vector<ResultRecord> read_results_file(const std::string& path);

/// Groups records by (dataset, method, desired_recall, csl) and averages.
std::vector<MetricsRow> aggregate_records(const std::vector<ResultRecord>& records);

std::string metrics_csv(const std::vector<MetricsRow>& rows);

struct SignificanceRow {
    std::string dataset;
    double desired_recall = 0.0;
    std::string method_a;
    std::string method_b;
    std::string metric;  // "cost" or "recall"
    int num_topics = 0;
    double p_value = 0.0;      // uncorrected
    double p_corrected = 0.0;  // Bonferroni, capped at 1
    int family_size = 0;
};

/// Paired t-tests on cost and recall for every method pair sharing a
/// (dataset, desired_recall) group. Throws when the topic sets of a pair
/// differ ("unpaired topics").
std::vector<SignificanceRow> significance_tests(const std::vector<ResultRecord>& records);

std::string significance_csv(const std::vector<SignificanceRow>& rows);

}  // namespace tar
