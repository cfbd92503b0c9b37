#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tar/corpus.hpp"
#include "tar/eval.hpp"
#include "tar/report.hpp"
#include "tar/stopper.hpp"

namespace {

struct ExperimentSpec {
    std::string ranking, qrels, texts;
    std::string dataset_name = "dataset";
    int synth_topics = 0;
    int synth_docs = 1000;
    double synth_prevalence = 0.02;
    double synth_decay = -0.9;
    double synth_vocab_quality = 0.9;
    std::vector<std::string> methods = {"CP", "CP_ClassLabel", "CP_ClassScore"};
    std::vector<double> recalls = {0.9};
    double confidence = 0.95;
    double initial_fraction = 0.025;
    double increment_fraction = 0.025;
    int window_size = 0;
    std::uint64_t seed = 1;
    std::string out = "out";
    int jobs = 0;
};

void apply_spec_file(ExperimentSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("dataset")) {
        const auto& d = j["dataset"];
        spec.ranking = d.value("ranking", spec.ranking);
        spec.qrels = d.value("qrels", spec.qrels);
        spec.texts = d.value("texts", spec.texts);
        spec.dataset_name = d.value("name", spec.dataset_name);
    }
    if (j.contains("synthetic")) {
        const auto& s = j["synthetic"];
        spec.synth_topics = s.value("topics", spec.synth_topics);
        spec.synth_docs = s.value("docs", spec.synth_docs);
        spec.synth_prevalence = s.value("prevalence", spec.synth_prevalence);
        spec.synth_decay = s.value("decay", spec.synth_decay);
        spec.synth_vocab_quality = s.value("vocab_quality", spec.synth_vocab_quality);
        if (s.contains("name")) spec.dataset_name = s["name"].get<std::string>();
    }
    if (j.contains("methods")) spec.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("recalls")) spec.recalls = j["recalls"].get<std::vector<double>>();
    spec.confidence = j.value("confidence", spec.confidence);
    spec.initial_fraction = j.value("initial_fraction", spec.initial_fraction);
    spec.increment_fraction = j.value("increment_fraction", spec.increment_fraction);
    spec.window_size = j.value("window_size", spec.window_size);
    spec.seed = j.value("seed", spec.seed);
    spec.out = j.value("out", spec.out);
    spec.jobs = j.value("jobs", spec.jobs);
}

tar::Dataset build_dataset(const ExperimentSpec& spec) {
    if (!spec.ranking.empty()) {
        if (spec.qrels.empty() || spec.texts.empty())
            throw std::runtime_error("--ranking requires --qrels and --texts");
        return tar::load_dataset(spec.ranking, spec.qrels, spec.texts, spec.dataset_name);
    }
    if (spec.synth_topics <= 0)
        throw std::runtime_error("no input: give --ranking/--qrels/--texts or --synth-topics");
    tar::Dataset ds;
    ds.name = spec.dataset_name;
    char idbuf[32];
    for (int i = 0; i < spec.synth_topics; ++i) {
        std::snprintf(idbuf, sizeof idbuf, "synth-%03d", i + 1);
        ds.topics.push_back(tar::synth_topic(tar::mix_seed(spec.seed, i), spec.synth_docs,
                                             spec.synth_prevalence, spec.synth_decay,
                                             spec.synth_vocab_quality, idbuf));
    }
    return ds;
}

tar::RunConfig make_config(const ExperimentSpec& spec, const std::string& method,
                           double recall, bool cost_sensitive) {
    tar::RunConfig config;
    config.method = tar::method_from_name(method);
    config.stop_params.desired_recall = recall;
    config.stop_params.confidence = spec.confidence;
    config.initial_fraction = spec.initial_fraction;
    config.increment_fraction = spec.increment_fraction;
    config.window_size = spec.window_size;
    config.cost_sensitive = cost_sensitive;
    return config;
}

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct RunOutput {
    std::vector<std::pair<tar::ResultRecord, tar::StoppingResult>> rows;
};

void run_arm(const ExperimentSpec& spec, const tar::Dataset& dataset,
             const std::string& method, double recall, bool cost_sensitive,
             RunOutput& out) {
    const auto config = make_config(spec, method, recall, cost_sensitive);
    const auto results = tar::run_dataset(dataset, config, effective_jobs(spec.jobs));
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.rows.emplace_back(
            tar::make_record(dataset.name, dataset.topics[i], results[i], recall,
                             cost_sensitive),
            results[i]);
    }
}

void write_outputs(const ExperimentSpec& spec, RunOutput& out, const std::string& csv_name) {
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.method, a.first.desired_recall, a.first.cost_sensitive,
                        a.first.topic_id) < std::tie(b.first.method, b.first.desired_recall,
                                                     b.first.cost_sensitive, b.first.topic_id);
    });
    std::filesystem::create_directories(spec.out);
    std::ofstream jsonl(spec.out + "/results.jsonl");
    if (!jsonl) throw std::runtime_error("cannot write " + spec.out + "/results.jsonl");
    std::vector<tar::ResultRecord> records;
    for (const auto& [rec, result] : out.rows) {
        jsonl << tar::record_to_json(rec, &result) << '\n';
        records.push_back(rec);
    }
    std::ofstream csv(spec.out + "/" + csv_name);
    if (!csv) throw std::runtime_error("cannot write " + spec.out + "/" + csv_name);
    csv << tar::metrics_csv(tar::aggregate_records(records));
}

int cmd_run(const ExperimentSpec& spec) {
    const tar::Dataset dataset = build_dataset(spec);
    RunOutput out;
    for (const auto& method : spec.methods) {
        for (double recall : spec.recalls) run_arm(spec, dataset, method, recall, true, out);
    }
    write_outputs(spec, out, "report.csv");
    std::size_t failures = 0;
    for (const auto& [rec, _] : out.rows) failures += rec.error.empty() ? 0 : 1;
    if (!out.rows.empty() && failures == out.rows.size()) {
        std::cerr << "all topics failed\n";
        return 1;
    }
    return 0;
}

int cmd_ablate_csl(const ExperimentSpec& spec) {
    const tar::Dataset dataset = build_dataset(spec);
    RunOutput out;
    for (double recall : spec.recalls) {
        run_arm(spec, dataset, "CP_ClassLabel", recall, true, out);
        run_arm(spec, dataset, "CP_ClassLabel", recall, false, out);
    }
    write_outputs(spec, out, "ablation.csv");
    return 0;
}

int cmd_synth(const ExperimentSpec& spec) {
    tar::Dataset dataset = build_dataset(spec);
    tar::write_dataset(dataset, spec.out);
    return 0;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& out_dir,
               bool group_by_recall) {
    std::vector<tar::ResultRecord> records;
    for (const auto& path : paths) {
        auto part = tar::read_results_file(path);
        records.insert(records.end(), part.begin(), part.end());
    }
    std::set<double> recalls;
    for (const auto& rec : records) recalls.insert(rec.desired_recall);
    if (recalls.size() > 1 && !group_by_recall)
        throw std::runtime_error(
            "results mix desired recalls; pass --group-by-recall to report per level");

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/report.csv");
    if (!csv) throw std::runtime_error("cannot write " + out_dir + "/report.csv");
    csv << tar::metrics_csv(tar::aggregate_records(records));

    const auto sig = tar::significance_tests(records);
    if (!sig.empty()) {
        std::ofstream sig_csv(out_dir + "/significance.csv");
        sig_csv << tar::significance_csv(sig);
        std::cout << "Bonferroni family size: " << sig.front().family_size
                  << " (all method pairs x {cost, recall} x recall levels)\n";
    }
    return 0;
}

// Starts from the spec-file values and overwrites any option the user
// actually passed on the command line (flags win over the file).
ExperimentSpec merge_with_file(const CLI::App* cmd, const ExperimentSpec& flags,
                               const std::string& spec_path) {
    if (spec_path.empty()) return flags;
    ExperimentSpec merged;
    apply_spec_file(merged, spec_path);
    auto set = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (set("--ranking")) merged.ranking = flags.ranking;
    if (set("--qrels")) merged.qrels = flags.qrels;
    if (set("--texts")) merged.texts = flags.texts;
    if (set("--name")) merged.dataset_name = flags.dataset_name;
    if (set("--synth-topics")) merged.synth_topics = flags.synth_topics;
    if (set("--docs")) merged.synth_docs = flags.synth_docs;
    if (set("--prevalence")) merged.synth_prevalence = flags.synth_prevalence;
    if (set("--decay")) merged.synth_decay = flags.synth_decay;
    if (set("--vocab-quality")) merged.synth_vocab_quality = flags.synth_vocab_quality;
    if (set("--method")) merged.methods = flags.methods;
    if (set("--recall")) merged.recalls = flags.recalls;
    if (set("--confidence")) merged.confidence = flags.confidence;
    if (set("--initial-fraction")) merged.initial_fraction = flags.initial_fraction;
    if (set("--increment-fraction")) merged.increment_fraction = flags.increment_fraction;
    if (set("--window-size")) merged.window_size = flags.window_size;
    if (set("--seed")) merged.seed = flags.seed;
    if (set("--out")) merged.out = flags.out;
    if (set("--jobs")) merged.jobs = flags.jobs;
    return merged;
}

void add_experiment_flags(CLI::App* cmd, ExperimentSpec& spec, std::string& spec_path) {
    cmd->add_option("--spec", spec_path, "experiment spec JSON file");
    cmd->add_option("--ranking", spec.ranking, "ranking TSV (topic_id\\tdoc_id\\trank)");
    cmd->add_option("--qrels", spec.qrels, "TREC qrels file");
    cmd->add_option("--texts", spec.texts, "texts TSV (doc_id\\ttext)");
    cmd->add_option("--name", spec.dataset_name, "dataset name");
    cmd->add_option("--synth-topics", spec.synth_topics, "number of synthetic topics");
    cmd->add_option("--docs", spec.synth_docs, "documents per synthetic topic");
    cmd->add_option("--prevalence", spec.synth_prevalence, "synthetic relevant fraction");
    cmd->add_option("--decay", spec.synth_decay, "synthetic position decay exponent (<= 0)");
    cmd->add_option("--vocab-quality", spec.synth_vocab_quality,
                    "synthetic vocabulary separation in [0,1]");
    cmd->add_option("--method", spec.methods,
                    "methods: CP, CP_ClassLabel, CP_ClassScore (repeatable)");
    cmd->add_option("--recall", spec.recalls, "desired recall levels (repeatable)");
    cmd->add_option("--confidence", spec.confidence, "counting-process confidence level");
    cmd->add_option("--initial-fraction", spec.initial_fraction, "first batch fraction");
    cmd->add_option("--increment-fraction", spec.increment_fraction, "batch increment fraction");
    cmd->add_option("--window-size", spec.window_size, "sample-point window (0 = auto)");
    cmd->add_option("--seed", spec.seed, "random seed");
    cmd->add_option("--out", spec.out, "output directory");
    cmd->add_option("--jobs", spec.jobs, "topic-level parallelism (0 = cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TAR stopping rules: counting process + text classifier"};
    app.require_subcommand(1);

    ExperimentSpec run_spec, ablate_spec, synth_spec;
    std::string run_spec_path, ablate_spec_path, synth_spec_path;

    auto* run_cmd = app.add_subcommand("run", "run stopping methods and write results");
    add_experiment_flags(run_cmd, run_spec, run_spec_path);

    auto* ablate_cmd =
        app.add_subcommand("ablate-csl", "CP_ClassLabel with vs without cost-sensitive weights");
    add_experiment_flags(ablate_cmd, ablate_spec, ablate_spec_path);

    auto* synth_cmd = app.add_subcommand("synth", "emit synthetic dataset files");
    add_experiment_flags(synth_cmd, synth_spec, synth_spec_path);

    auto* report_cmd = app.add_subcommand("report", "merge results files, significance tests");
    std::vector<std::string> report_paths;
    std::string report_out = ".";
    bool group_by_recall = false;
    report_cmd->add_option("results", report_paths, "results.jsonl files")->required();
    report_cmd->add_option("--out", report_out, "output directory");
    report_cmd->add_flag("--group-by-recall", group_by_recall,
                         "allow results at multiple desired recalls");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(merge_with_file(run_cmd, run_spec, run_spec_path));
        if (ablate_cmd->parsed())
            return cmd_ablate_csl(merge_with_file(ablate_cmd, ablate_spec, ablate_spec_path));
        if (synth_cmd->parsed()) {
            ExperimentSpec spec = merge_with_file(synth_cmd, synth_spec, synth_spec_path);
            if (spec.synth_topics <= 0) spec.synth_topics = 1;
            return cmd_synth(spec);
        }
        if (report_cmd->parsed()) return cmd_report(report_paths, report_out, group_by_recall);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos ||
            what.find("no input") != std::string::npos ||
            what.find("mix desired recalls") != std::string::npos ||
            what.find("requires") != std::string::npos)
            return 2;
        return 1;
    }
    return 0;
}
