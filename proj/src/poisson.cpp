#include "tar/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace tar {

namespace {

// log(e^a + e^b) without overflow.
double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -INFINITY) return a;
    return a + std::log1p(std::exp(b - a));
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::runtime_error("poisson: lambda must be finite and >= 0");
}

}  // namespace

double poisson_cdf(double lambda, long long count) {
    check_lambda(lambda);
    if (count < 0) return 0.0;
    if (lambda == 0.0) return 1.0;
    // Terms well above the mean are negligible; the tail beyond
    // lambda + 60*sqrt(lambda) contributes far less than 1e-12.
    const long long cap =
        static_cast<long long>(lambda + 60.0 * std::sqrt(lambda) + 60.0);
    if (count >= cap) return 1.0;

    const double log_lambda = std::log(lambda);
    double log_term = -lambda;  // pmf(0)
    double log_sum = log_term;
    for (long long j = 1; j <= count; ++j) {
        log_term += log_lambda - std::log(static_cast<double>(j));
        log_sum = log_add(log_sum, log_term);
    }
    const double cdf = std::exp(std::min(log_sum, 0.0));
    return cdf > 1.0 ? 1.0 : cdf;
}

long long poisson_quantile(double lambda, double confidence) {
    check_lambda(lambda);
    if (confidence <= 0.0 || confidence >= 1.0)
        throw std::runtime_error("poisson_quantile: confidence must be in (0,1)");
    if (lambda == 0.0) return 0;

    const double log_lambda = std::log(lambda);
    double log_term = -lambda;
    double log_sum = log_term;
    long long m = 0;
    while (std::exp(std::min(log_sum, 0.0)) < confidence) {
        ++m;
        log_term += log_lambda - std::log(static_cast<double>(m));
        log_sum = log_add(log_sum, log_term);
    }
    return m;
}

StopDecision stop_decision(long long relevant_seen, double lambda_remaining,
                           const StopParams& params) {
    if (params.desired_recall <= 0.0 || params.desired_recall > 1.0)
        throw std::runtime_error("stop_decision: desired_recall must be in (0,1]");
    StopDecision d;
    d.upper = poisson_quantile(lambda_remaining, params.confidence);
    d.estimated_total = static_cast<double>(relevant_seen) + static_cast<double>(d.upper);
    d.stop = static_cast<double>(relevant_seen) >= params.desired_recall * d.estimated_total;
    return d;
}

}  // namespace tar
