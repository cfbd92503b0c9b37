// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Runs the full desk-scale benchmark, so expect ~2 minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tar/classifier.hpp"
#include "tar/corpus.hpp"
#include "tar/eval.hpp"
#include "tar/poisson.hpp"
#include "tar/rate.hpp"
#include "tar/stopper.hpp"
#include "tar/textproc.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using big_float = boost::multiprecision::cpp_bin_float_50;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

int jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// ---------------------------------------------------------------------------
// Criterion 1: Poisson CDF/quantile vs high-precision brute-force summation.

big_float oracle_cdf_big(const big_float& lambda, long long count) {
    big_float term = exp(-lambda);
    big_float sum = term;
    for (long long j = 1; j <= count; ++j) {
        term *= lambda / j;
        sum += term;
    }
    return sum;
}

long long oracle_quantile_big(const big_float& lambda, const big_float& confidence) {
    big_float term = exp(-lambda);
    big_float sum = term;
    long long m = 0;
    while (sum < confidence) {
        ++m;
        term *= lambda / m;
        sum += term;
    }
    return m;
}

void criterion_1() {
    const auto start = Clock::now();
    std::vector<double> lambdas = {0.1, 0.5};
    for (int i = 1; i <= 25; ++i) lambdas.push_back(2.0 * i);  // 2,4,...,50
    const std::vector<double> confidences = {0.5, 0.8, 0.9, 0.95, 0.99};

    double max_cdf_err = 0.0;
    long long quantile_mismatches = 0;
    for (double lambda : lambdas) {
        const big_float big_lambda(lambda);
        const long long top =
            static_cast<long long>(lambda + 10.0 * std::sqrt(lambda) + 20.0);
        for (long long count = 0; count <= top; ++count) {
            const double got = tar::poisson_cdf(lambda, count);
            big_float cdf = oracle_cdf_big(big_lambda, count);
            if (cdf > 1) cdf = 1;
            const double want = static_cast<double>(cdf);
            max_cdf_err = std::max(max_cdf_err, std::abs(got - want));
        }
        for (double conf : confidences) {
            if (tar::poisson_quantile(lambda, conf) !=
                oracle_quantile_big(big_lambda, big_float(conf)))
                ++quantile_mismatches;
        }
    }
    const double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "max cdf err %.3e, quantile mismatches %lld, %.2fs", max_cdf_err,
                  quantile_mismatches, elapsed);
    report(1, "Poisson oracle equivalence",
           max_cdf_err <= 1e-10 && quantile_mismatches == 0 && elapsed < 1.0, detail);
}

// ---------------------------------------------------------------------------
// Criterion 2: power-law curve-fit recovery, noiseless and noisy.

void criterion_2() {
    const auto start = Clock::now();

    std::vector<tar::SamplePoint> clean;
    for (double x : {1.0, 4.0, 9.0, 16.0, 25.0}) clean.push_back({x, 2.0 * std::pow(x, -0.5)});
    const auto fit = tar::fit_power_law(clean);
    const bool noiseless_ok =
        std::abs(fit.a - 2.0) / 2.0 <= 1e-6 && std::abs(fit.k + 0.5) / 0.5 <= 1e-6;

    int successes = 0;
    constexpr int kTrials = 100;
    for (int trial = 0; trial < kTrials; ++trial) {
        std::mt19937_64 rng(9000 + trial);
        std::vector<tar::SamplePoint> pts;
        for (int w = 0; w < 20; ++w) {
            const double x = 5.5 + 10.0 * w;  // midpoints of size-10 windows
            const double noise = 0.01 * (2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0);
            pts.push_back({x, 3.0 * std::pow(x, -0.8) + noise});
        }
        const auto noisy = tar::fit_power_law(pts);
        if (std::abs(noisy.a - 3.0) / 3.0 <= 5e-2 && std::abs(noisy.k + 0.8) / 0.8 <= 5e-2)
            ++successes;
    }
    const double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof detail, "noiseless %s, noisy %d/%d, %.2fs",
                  noiseless_ok ? "ok" : "off", successes, kTrials, elapsed);
    report(2, "curve-fit recovery", noiseless_ok && successes >= 95 && elapsed < 10.0, detail);
}

// ---------------------------------------------------------------------------
// Criterion 3: classifier gradient check and training-loss monotonicity.

void criterion_3() {
    std::mt19937_64 rng(777);
    auto unif = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };

    double worst_rel_err = 0.0;
    for (int point = 0; point < 50; ++point) {
        const int dim = 4 + static_cast<int>(rng() % 5);
        const int num = 6 + static_cast<int>(rng() % 10);
        std::vector<tar::FeatureVector> features(num);
        std::vector<bool> labels(num);
        for (int i = 0; i < num; ++i) {
            for (int j = 0; j < dim; ++j)
                if (rng() % 3) features[i].entries.emplace_back(j, unif(-1, 1));
            labels[i] = rng() % 2 == 0;
        }
        std::vector<double> weights(dim);
        for (auto& w : weights) w = unif(-1, 1);
        const double bias = unif(-1, 1);
        const tar::ClassWeights cw{unif(0.2, 2.0), unif(0.2, 2.0)};
        const double l2 = unif(0.0, 1.0);

        std::vector<double> grad_w;
        const double grad_b =
            tar::weighted_loss_gradient(weights, bias, features, labels, cw, l2, grad_w);

        const double h = 1e-6;
        auto rel_err = [](double analytic, double fd) {
            return std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
        };
        for (int j = 0; j < dim; ++j) {
            auto wp = weights, wm = weights;
            wp[j] += h;
            wm[j] -= h;
            const double fd = (tar::weighted_loss(wp, bias, features, labels, cw, l2) -
                               tar::weighted_loss(wm, bias, features, labels, cw, l2)) /
                              (2 * h);
            worst_rel_err = std::max(worst_rel_err, rel_err(grad_w[j], fd));
        }
        const double fdb = (tar::weighted_loss(weights, bias + h, features, labels, cw, l2) -
                            tar::weighted_loss(weights, bias - h, features, labels, cw, l2)) /
                           (2 * h);
        worst_rel_err = std::max(worst_rel_err, rel_err(grad_b, fdb));
    }

    // Monotone training loss: the k-iteration model is the k-th iterate of
    // the deterministic optimizer, so losses must be non-increasing in k.
    bool monotone = true;
    for (std::uint64_t seed : {1ULL, 12ULL, 123ULL}) {
        const auto topic = tar::synth_topic(seed, 120, 0.25, -0.5, 0.7);
        std::vector<std::vector<std::string>> tokens;
        for (const auto& d : topic.docs) tokens.push_back(tar::tokenize(d.text));
        const auto vocab = tar::fit_vocabulary(tokens);
        std::vector<tar::FeatureVector> features;
        std::vector<bool> labels;
        for (int i = 0; i < topic.size(); ++i) {
            features.push_back(tar::vectorize(vocab, tokens[i]));
            labels.push_back(topic.docs[i].gold_relevant);
        }
        const auto cw = tar::class_weights(labels);
        const double l2 = 1.0 / features.size();
        double prev = tar::weighted_loss(std::vector<double>(vocab.size(), 0.0), 0.0,
                                         features, labels, cw, l2);
        for (int iters = 1; iters <= 25; ++iters) {
            tar::TrainConfig config;
            config.max_iters = iters;
            const auto model = tar::train(features, labels, cw, config, vocab.size());
            const double loss =
                tar::weighted_loss(model.weights, model.bias, features, labels, cw, l2);
            if (loss > prev + 1e-12) monotone = false;
            prev = loss;
        }
    }

    char detail[120];
    std::snprintf(detail, sizeof detail, "max gradient rel err %.3e, loss monotone %s",
                  worst_rel_err, monotone ? "yes" : "no");
    report(3, "classifier gradient check", worst_rel_err <= 1e-6 && monotone, detail);
}

// ---------------------------------------------------------------------------
// Criterion 4: desk-scale direction reproduction on the synthetic benchmark.

tar::Dataset benchmark_dataset(int topics, int docs, double prevalence, double decay,
                               double vocab_quality, std::uint64_t seed) {
    tar::Dataset ds;
    ds.name = "bench";
    char id[32];
    for (int i = 0; i < topics; ++i) {
        std::snprintf(id, sizeof id, "bench-%03d", i + 1);
        ds.topics.push_back(tar::synth_topic(tar::mix_seed(seed, i), docs, prevalence, decay,
                                             vocab_quality, id));
    }
    return ds;
}

tar::MetricsRow evaluate(const tar::Dataset& ds, tar::Method method, double recall,
                         bool cost_sensitive = true, double initial_fraction = 0.025) {
    tar::RunConfig config;
    config.method = method;
    config.stop_params = {recall, 0.95};
    config.cost_sensitive = cost_sensitive;
    config.initial_fraction = initial_fraction;
    const auto results = tar::run_dataset(ds, config, jobs());
    std::vector<tar::TopicMetrics> metrics;
    for (std::size_t i = 0; i < results.size(); ++i)
        metrics.push_back(tar::topic_metrics(results[i], ds.topics[i], recall));
    return tar::aggregate(metrics);
}

void criterion_4() {
    const auto start = Clock::now();
    const auto ds = benchmark_dataset(50, 2000, 0.02, -0.9, 0.9, 7);

    const auto cp = evaluate(ds, tar::Method::CP, 0.9);
    const auto label = evaluate(ds, tar::Method::CPClassLabel, 0.9);
    const auto score = evaluate(ds, tar::Method::CPClassScore, 0.9);
    const double elapsed = seconds_since(start);

    const bool reliability_ok =
        cp.reliability >= 0.9 && label.reliability >= 0.9 && score.reliability >= 0.9;
    const bool cost_ok = label.cost <= cp.cost + 1e-9 && score.cost <= cp.cost + 1e-9;
    const bool recall_ok = cp.recall >= 0.9 && label.recall >= 0.9 && score.recall >= 0.9;

    char detail[240];
    std::snprintf(detail, sizeof detail,
                  "rel CP %.3f / CL %.3f / CS %.3f; cost CP %.3f / CL %.3f / CS %.3f; "
                  "recall CP %.3f / CL %.3f / CS %.3f; %.1fs",
                  cp.reliability, label.reliability, score.reliability, cp.cost, label.cost,
                  score.cost, cp.recall, label.recall, score.recall, elapsed);
    report(4, "benchmark direction reproduction",
           reliability_ok && cost_ok && recall_ok && elapsed < 120.0, detail);
}

// ---------------------------------------------------------------------------
// Criterion 5: cost-sensitive learning ablation direction.

void criterion_5() {
    const auto start = Clock::now();
    // Low-prevalence topics (R ~ 20 of 2000) where the first batches hold only a
    // handful of positives: without class weighting the classifier under-predicts
    // the tail, the fitted rate drops sooner, and review stops a batch early.
    const auto ds = benchmark_dataset(10, 2000, 0.01, -1.0, 0.85, 6);

    const auto with_csl = evaluate(ds, tar::Method::CPClassLabel, 0.9, true, 0.05);
    const auto without_csl = evaluate(ds, tar::Method::CPClassLabel, 0.9, false, 0.05);
    const double elapsed = seconds_since(start);

    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "with CSL rel %.3f recall %.3f; without rel %.3f recall %.3f; %.1fs",
                  with_csl.reliability, with_csl.recall, without_csl.reliability,
                  without_csl.recall, elapsed);
    report(5, "CSL ablation direction",
           without_csl.reliability < with_csl.reliability && without_csl.recall < 0.9 &&
               elapsed < 120.0,
           detail);
}

// ---------------------------------------------------------------------------
// Criterion 6: excess-cost consistency with the published Legal/0.9 row.

void criterion_6() {
    const double c_star = 0.024 / 0.599;
    const double got = tar::excess_cost(0.425, c_star);
    char detail[80];
    std::snprintf(detail, sizeof detail, "excess_cost(0.425, %.6f) = %.6f", c_star, got);
    report(6, "excess-cost reference-value consistency", std::abs(got - 0.401) <= 5e-4,
           detail);
}

// ---------------------------------------------------------------------------
// Criterion 7: algorithm invariant suite.

std::vector<double> gold_scores(const tar::Topic& topic, int n) {
    std::vector<double> scores;
    for (int i = n; i < topic.size(); ++i)
        scores.push_back(topic.docs[i].gold_relevant ? 1.0 : 0.0);
    return scores;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_7() {
    bool ok = true;
    std::string why = "all invariants hold";

    // termination bound + prefix-boundary stop positions
    for (std::uint64_t seed : {3ULL, 30ULL, 300ULL}) {
        const auto topic = tar::synth_topic(seed, 500, 0.05, -0.8, 0.9);
        for (auto method : {tar::Method::CP, tar::Method::CPClassLabel}) {
            tar::RunConfig config;
            config.method = method;
            config.stop_params = {0.9, 0.95};
            const auto result = tar::run(topic, config);
            const int N = topic.size();
            const int step0 = static_cast<int>(std::ceil(config.initial_fraction * N));
            const int step = static_cast<int>(std::ceil(config.increment_fraction * N));
            if (result.trace.size() >
                static_cast<std::size_t>(std::ceil(1.0 / config.increment_fraction))) {
                ok = false;
                why = "termination bound exceeded";
            }
            bool boundary = false;
            for (int j = 0; step0 + j * step <= N + step; ++j)
                if (result.stop_position == std::min(step0 + j * step, N)) boundary = true;
            if (!boundary) {
                ok = false;
                why = "stop position off the batch grid";
            }
            if (result.relevant_found != tar::relevant_in_prefix(topic, result.stop_position)) {
                ok = false;
                why = "relevant_found mismatch";
            }
        }
    }

    // ClassScore <= ClassLabel sample-point dominance for shared predictions
    {
        const auto topic = tar::synth_topic(42, 300, 0.1, -0.7, 0.6);
        const int n = 60;
        std::vector<double> scores;
        for (int i = n; i < topic.size(); ++i) scores.push_back(((i * 31) % 100) / 100.0);
        const auto label_pts = tar::sample_points(
            tar::build_relevance_sequence(topic, n, tar::Method::CPClassLabel, scores), 10);
        const auto score_pts = tar::sample_points(
            tar::build_relevance_sequence(topic, n, tar::Method::CPClassScore, scores), 10);
        for (std::size_t i = 0; i < label_pts.size(); ++i) {
            if (score_pts[i].p > label_pts[i].p + 1e-12) {
                ok = false;
                why = "ClassScore point exceeds ClassLabel point";
            }
        }
    }

    // perfect-classifier stub == full-knowledge CP fit
    {
        const auto topic = tar::synth_topic(7, 400, 0.08, -0.9, 0.9);
        const int n = 40;
        const auto stub_seq = tar::build_relevance_sequence(topic, n, tar::Method::CPClassLabel,
                                                            gold_scores(topic, n));
        const auto full_seq =
            tar::build_relevance_sequence(topic, topic.size(), tar::Method::CP, {});
        const auto fit_stub = tar::fit_power_law(tar::sample_points(stub_seq, 10));
        const auto fit_full = tar::fit_power_law(tar::sample_points(full_seq, 10));
        if (std::abs(fit_stub.a - fit_full.a) > 1e-12 ||
            std::abs(fit_stub.k - fit_full.k) > 1e-12) {
            ok = false;
            why = "perfect-stub fit differs from full-knowledge CP fit";
        }
    }

    // end-to-end byte determinism under --jobs 1 vs 8
    {
        const std::string bin = TARSTOP_BIN_PATH;
        const auto tmp = std::filesystem::temp_directory_path() / "tar_acceptance_jobs";
        std::filesystem::remove_all(tmp);
        const std::string common =
            " run --synth-topics 6 --docs 300 --prevalence 0.05 --decay -0.8"
            " --vocab-quality 0.9 --seed 77 --method CP --method CP_ClassLabel"
            " --method CP_ClassScore --recall 0.9 ";
        const std::string out1 = (tmp / "j1").string();
        const std::string out8 = (tmp / "j8").string();
        if (std::system((bin + common + "--jobs 1 --out " + out1 + " >/dev/null").c_str()) !=
                0 ||
            std::system((bin + common + "--jobs 8 --out " + out8 + " >/dev/null").c_str()) !=
                0) {
            ok = false;
            why = "CLI run failed";
        } else if (slurp(out1 + "/results.jsonl") != slurp(out8 + "/results.jsonl") ||
                   slurp(out1 + "/report.csv") != slurp(out8 + "/report.csv")) {
            ok = false;
            why = "outputs differ across --jobs";
        }
        std::filesystem::remove_all(tmp);
    }

    report(7, "algorithm invariant suite", ok, why);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
