#pragma once

#include <string>
#include <vector>

#include "tar/corpus.hpp"
#include "tar/stopper.hpp"

namespace tar {

struct TopicMetrics {
    double recall = 0.0;
    int reliability = 0;  // 1 iff recall >= desired_recall
    double cost = 0.0;    // stop_position / N
    double excess = 0.0;
};

struct MetricsRow {
    std::string dataset;
    std::string method;
    double desired_recall = 0.0;
    double recall = 0.0;
    double reliability = 0.0;
    double cost = 0.0;
    double excess = 0.0;
    int num_topics = 0;
};

/// Normalized cost beyond the optimal stopping point (Eq.-style
/// (cost - optimal) / (1 - optimal)); defined as 0 when optimal is 1.
double excess_cost(double cost_method, double cost_optimal);

/// Smallest prefix length reaching the desired recall; 0 when the topic
/// has no relevant documents.
int optimal_prefix(const Topic& topic, double desired_recall);

TopicMetrics topic_metrics(const StoppingResult& result, const Topic& topic,
                           double desired_recall);

MetricsRow aggregate(const std::vector<TopicMetrics>& per_topic);

/// Two-sided paired t-test p-value. All-zero differences give p = 1;
/// zero-variance non-zero-mean differences give p = 0.
double paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// CDF of Student's t distribution (regularized incomplete beta).
double student_t_cdf(double t, double df);

}  // namespace tar
