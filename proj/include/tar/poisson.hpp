#pragma once

namespace tar {

struct StopParams {
    double desired_recall = 0.9;  // in (0, 1]
    double confidence = 0.95;     // in (0, 1)
};

struct StopDecision {
    bool stop = false;
    long long upper = 0;           // confidence-level upper quantile on remaining count
    double estimated_total = 0.0;  // relevant_seen + upper
};

/// P(X <= count) for X ~ Poisson(lambda), computed with a log-space term
/// recurrence; stable for lambda up to at least 1e4.
double poisson_cdf(double lambda, long long count);

/// Smallest m with poisson_cdf(lambda, m) >= confidence.
long long poisson_quantile(double lambda, double confidence);

/// Stops when relevant_seen covers the desired fraction of
/// relevant_seen + upper-quantile of the remaining-relevant count.
StopDecision stop_decision(long long relevant_seen, double lambda_remaining,
                           const StopParams& params);

}  // namespace tar
