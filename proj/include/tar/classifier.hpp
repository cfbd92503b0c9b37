#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tar/textproc.hpp"

namespace tar {

struct ClassWeights {
    double relevant = 1.0;
    double nonrelevant = 1.0;
};

struct TrainConfig {
    double l2_penalty = -1.0;  // < 0 means 1/|training set|
    int max_iters = 1000;
    double tol = 1e-6;  // gradient-norm stopping criterion
    std::uint64_t seed = 0;
};

/// Linear logistic regression model over sparse TF-IDF features.
struct ClassifierModel {
    std::vector<double> weights;
    double bias = 0.0;
    double threshold = 0.5;
};

/// Minority class gets weight 1, majority class gets the imbalance ratio
/// (minority count / majority count). Throws on single-class input.
ClassWeights class_weights(const std::vector<bool>& labels);

/// L2-regularized weighted negative log-likelihood (bias unpenalized).
double weighted_loss(const std::vector<double>& weights, double bias,
                     const std::vector<FeatureVector>& features,
                     const std::vector<bool>& labels, const ClassWeights& cw,
                     double l2_penalty);

/// Analytic gradient of weighted_loss; writes d/dweights into grad_w and
/// returns d/dbias.
double weighted_loss_gradient(const std::vector<double>& weights, double bias,
                              const std::vector<FeatureVector>& features,
                              const std::vector<bool>& labels, const ClassWeights& cw,
                              double l2_penalty, std::vector<double>& grad_w);

/// Full-batch gradient descent with backtracking line search, zero
/// initialization. Deterministic; training loss is non-increasing.
ClassifierModel train(const std::vector<FeatureVector>& features,
                      const std::vector<bool>& labels, const ClassWeights& cw,
                      const TrainConfig& config, int num_features);

double predict_score(const ClassifierModel& model, const FeatureVector& x);
bool predict_label(const ClassifierModel& model, const FeatureVector& x);

std::string model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const std::string& json_text);

}  // namespace tar
