#include "tar/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace tar {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// ln(1 + e^z) without overflow.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double dot(const std::vector<double>& weights, double bias, const FeatureVector& x) {
    double z = bias;
    for (const auto& [idx, v] : x.entries) z += weights[idx] * v;
    return z;
}

double effective_l2(const TrainConfig& config, std::size_t num_examples) {
    return config.l2_penalty >= 0.0 ? config.l2_penalty
                                    : 1.0 / static_cast<double>(num_examples);
}

}  // namespace

ClassWeights class_weights(const std::vector<bool>& labels) {
    long long pos = 0;
    for (bool y : labels) pos += y ? 1 : 0;
    const long long neg = static_cast<long long>(labels.size()) - pos;
    if (pos == 0 || neg == 0) throw std::runtime_error("degenerate training set");
    ClassWeights cw;
    if (pos <= neg) {
        cw.relevant = 1.0;
        cw.nonrelevant = static_cast<double>(pos) / static_cast<double>(neg);
    } else {
        cw.nonrelevant = 1.0;
        cw.relevant = static_cast<double>(neg) / static_cast<double>(pos);
    }
    return cw;
}

double weighted_loss(const std::vector<double>& weights, double bias,
                     const std::vector<FeatureVector>& features,
                     const std::vector<bool>& labels, const ClassWeights& cw,
                     double l2_penalty) {
    double loss = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double z = dot(weights, bias, features[i]);
        const double y = labels[i] ? 1.0 : 0.0;
        const double w = labels[i] ? cw.relevant : cw.nonrelevant;
        loss += w * (softplus(z) - y * z);
    }
    double reg = 0.0;
    for (double w : weights) reg += w * w;
    return loss + 0.5 * l2_penalty * reg;
}

double weighted_loss_gradient(const std::vector<double>& weights, double bias,
                              const std::vector<FeatureVector>& features,
                              const std::vector<bool>& labels, const ClassWeights& cw,
                              double l2_penalty, std::vector<double>& grad_w) {
    grad_w.assign(weights.size(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double z = dot(weights, bias, features[i]);
        const double y = labels[i] ? 1.0 : 0.0;
        const double w = labels[i] ? cw.relevant : cw.nonrelevant;
        const double g = w * (sigmoid(z) - y);
        for (const auto& [idx, v] : features[i].entries) grad_w[idx] += g * v;
        grad_b += g;
    }
    for (std::size_t j = 0; j < weights.size(); ++j) grad_w[j] += l2_penalty * weights[j];
    return grad_b;
}

ClassifierModel train(const std::vector<FeatureVector>& features,
                      const std::vector<bool>& labels, const ClassWeights& cw,
                      const TrainConfig& config, int num_features) {
    if (features.size() != labels.size())
        throw std::runtime_error("train: feature/label count mismatch");
    if (features.size() < 2) throw std::runtime_error("train: need at least 2 examples");
    if (config.max_iters < 1) throw std::runtime_error("train: max_iters must be >= 1");
    if (config.tol <= 0.0) throw std::runtime_error("train: tol must be > 0");
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < features.size(); ++i) {
        (labels[i] ? has_pos : has_neg) = true;
        for (const auto& [idx, v] : features[i].entries) {
            if (idx < 0 || idx >= num_features)
                throw std::runtime_error("train: feature index out of range");
            if (!std::isfinite(v)) throw std::runtime_error("train: non-finite feature value");
        }
    }
    if (!has_pos || !has_neg) throw std::runtime_error("train: both classes required");

    const double l2 = effective_l2(config, features.size());

    ClassifierModel model;
    model.weights.assign(num_features, 0.0);
    model.bias = 0.0;

    const std::size_t num = features.size();
    std::vector<double> example_weight(num), target(num);
    for (std::size_t i = 0; i < num; ++i) {
        example_weight[i] = labels[i] ? cw.relevant : cw.nonrelevant;
        target[i] = labels[i] ? 1.0 : 0.0;
    }

    // Margins z_i = w.x_i + b are cached and updated along the search
    // direction, so each line-search trial costs O(num) instead of a full
    // sparse pass.
    std::vector<double> margin(num, 0.0);
    std::vector<double> grad_w(num_features);
    std::vector<double> grad_margin(num);

    auto data_loss = [&](const std::vector<double>& z) {
        double loss = 0.0;
        for (std::size_t i = 0; i < num; ++i)
            loss += example_weight[i] * (softplus(z[i]) - target[i] * z[i]);
        return loss;
    };

    double w_sq = 0.0;  // ||weights||^2, maintained across iterations
    double loss = data_loss(margin);
    double step = 1.0;
    constexpr double kArmijo = 1e-4;
    std::vector<double> trial_margin(num);

    for (int iter = 0; iter < config.max_iters; ++iter) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < num; ++i) {
            const double g = example_weight[i] * (sigmoid(margin[i]) - target[i]);
            for (const auto& [idx, v] : features[i].entries) grad_w[idx] += g * v;
            grad_b += g;
        }
        double wg = 0.0, g_sq = 0.0;
        for (int j = 0; j < num_features; ++j) {
            grad_w[j] += l2 * model.weights[j];
            wg += model.weights[j] * grad_w[j];
            g_sq += grad_w[j] * grad_w[j];
        }
        const double gn_sq = g_sq + grad_b * grad_b;
        if (std::sqrt(gn_sq) <= config.tol) break;

        for (std::size_t i = 0; i < num; ++i) {
            double gz = grad_b;
            for (const auto& [idx, v] : features[i].entries) gz += grad_w[idx] * v;
            grad_margin[i] = gz;
        }

        // Backtracking line search; start from twice the last accepted step.
        double t = std::min(step * 2.0, 1e3);
        double trial_loss = 0.0;
        bool accepted = false;
        for (int h = 0; h < 60; ++h) {
            for (std::size_t i = 0; i < num; ++i)
                trial_margin[i] = margin[i] - t * grad_margin[i];
            const double trial_w_sq = w_sq - 2.0 * t * wg + t * t * g_sq;
            trial_loss = data_loss(trial_margin) + 0.5 * l2 * trial_w_sq;
            if (trial_loss <= loss - kArmijo * t * gn_sq) {
                accepted = true;
                w_sq = trial_w_sq;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // no descent step representable
        for (int j = 0; j < num_features; ++j) model.weights[j] -= t * grad_w[j];
        model.bias -= t * grad_b;
        margin.swap(trial_margin);
        const bool stalled = loss - trial_loss <= 1e-9 * std::max(1.0, std::abs(loss));
        loss = trial_loss;
        step = t;
        if (stalled) break;  // relative improvement below solver resolution
    }
    return model;
}

double predict_score(const ClassifierModel& model, const FeatureVector& x) {
    return sigmoid(dot(model.weights, model.bias, x));
}

bool predict_label(const ClassifierModel& model, const FeatureVector& x) {
    return predict_score(model, x) >= model.threshold;
}

std::string model_to_json(const ClassifierModel& model) {
    nlohmann::json j;
    j["dim"] = model.weights.size();
    j["bias"] = model.bias;
    j["threshold"] = model.threshold;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (model.weights[i] != 0.0) entries.push_back({i, model.weights[i]});
    }
    j["weights"] = std::move(entries);
    return j.dump();
}

ClassifierModel model_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    ClassifierModel model;
    model.weights.assign(j.at("dim").get<std::size_t>(), 0.0);
    model.bias = j.at("bias").get<double>();
    model.threshold = j.at("threshold").get<double>();
    for (const auto& e : j.at("weights")) {
        model.weights.at(e.at(0).get<std::size_t>()) = e.at(1).get<double>();
    }
    return model;
}

}  // namespace tar
