#include "tar/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace tar {

namespace {

// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double incbeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw std::runtime_error("student_t_cdf: df must be > 0");
    const double x = df / (df + t * t);
    const double tail = 0.5 * incbeta(0.5 * df, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double excess_cost(double cost_method, double cost_optimal) {
    if (cost_optimal >= 1.0) return 0.0;
    return (cost_method - cost_optimal) / (1.0 - cost_optimal);
}

int optimal_prefix(const Topic& topic, double desired_recall) {
    const int R = topic.relevant_total();
    if (R == 0) return 0;
    int found = 0;
    for (int i = 0; i < topic.size(); ++i) {
        if (topic.docs[i].gold_relevant) ++found;
        if (static_cast<double>(found) / R >= desired_recall) return i + 1;
    }
    return topic.size();
}

TopicMetrics topic_metrics(const StoppingResult& result, const Topic& topic,
                           double desired_recall) {
    if (result.topic_id != topic.topic_id)
        throw std::runtime_error("topic_metrics: result does not belong to topic");
    const int N = topic.size();
    const int R = topic.relevant_total();
    TopicMetrics m;
    m.recall = R == 0 ? 1.0 : static_cast<double>(result.relevant_found) / R;
    m.reliability = m.recall >= desired_recall ? 1 : 0;
    m.cost = static_cast<double>(result.stop_position) / N;
    const double opt_cost = static_cast<double>(optimal_prefix(topic, desired_recall)) / N;
    m.excess = excess_cost(m.cost, opt_cost);
    return m;
}

MetricsRow aggregate(const std::vector<TopicMetrics>& per_topic) {
    if (per_topic.empty()) throw std::runtime_error("aggregate: empty metrics list");
    MetricsRow row;
    row.num_topics = static_cast<int>(per_topic.size());
    for (const auto& m : per_topic) {
        row.recall += m.recall;
        row.reliability += m.reliability;
        row.cost += m.cost;
        row.excess += m.excess;
    }
    row.recall /= row.num_topics;
    row.reliability /= row.num_topics;
    row.cost /= row.num_topics;
    row.excess /= row.num_topics;
    return row;
}

double paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::runtime_error("paired_t_test: length mismatch");
    const int n = static_cast<int>(a.size());
    if (n < 2) throw std::runtime_error("paired_t_test: need at least 2 pairs");

    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        var += d * d;
    }
    var /= (n - 1);

    if (var == 0.0) return mean == 0.0 ? 1.0 : 0.0;
    const double t = mean / std::sqrt(var / n);
    return 2.0 * (1.0 - student_t_cdf(std::abs(t), n - 1));
}

}  // namespace tar
