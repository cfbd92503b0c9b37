#include "tar/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace tar {

namespace {

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

ResultRecord make_record(const std::string& dataset, const Topic& topic,
                         const StoppingResult& result, double desired_recall,
                         bool cost_sensitive) {
    ResultRecord rec;
    rec.dataset = dataset;
    rec.topic_id = topic.topic_id;
    rec.method = method_name(result.method);
    rec.desired_recall = desired_recall;
    rec.num_docs = topic.size();
    rec.num_relevant = topic.relevant_total();
    rec.stop_position = result.stop_position;
    rec.relevant_found = result.relevant_found;
    rec.cost_sensitive = cost_sensitive;
    rec.error = result.error;
    if (result.error.empty()) rec.metrics = topic_metrics(result, topic, desired_recall);
    return rec;
}

std::string record_to_json(const ResultRecord& record, const StoppingResult* result) {
    nlohmann::json j;
    j["dataset"] = record.dataset;
    j["topic_id"] = record.topic_id;
    j["method"] = record.method;
    j["desired_recall"] = record.desired_recall;
    j["N"] = record.num_docs;
    j["R"] = record.num_relevant;
    j["stop_position"] = record.stop_position;
    j["relevant_found"] = record.relevant_found;
    j["recall"] = record.metrics.recall;
    j["reliability"] = record.metrics.reliability;
    j["cost"] = record.metrics.cost;
    j["excess"] = record.metrics.excess;
    j["csl"] = record.cost_sensitive;
    if (!record.error.empty()) j["error"] = record.error;
    if (result != nullptr) j["trace"] = nlohmann::json::parse(result_to_json(*result))["trace"];
    return j.dump();
}

ResultRecord record_from_json(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    ResultRecord rec;
    rec.dataset = j.at("dataset").get<std::string>();
    rec.topic_id = j.at("topic_id").get<std::string>();
    rec.method = j.at("method").get<std::string>();
    rec.desired_recall = j.at("desired_recall").get<double>();
    rec.num_docs = j.at("N").get<int>();
    rec.num_relevant = j.at("R").get<int>();
    rec.stop_position = j.at("stop_position").get<int>();
    rec.relevant_found = j.at("relevant_found").get<int>();
    rec.metrics.recall = j.at("recall").get<double>();
    rec.metrics.reliability = j.at("reliability").get<int>();
    rec.metrics.cost = j.at("cost").get<double>();
    rec.metrics.excess = j.at("excess").get<double>();
    rec.cost_sensitive = j.value("csl", true);
    rec.error = j.value("error", std::string());
    return rec;
}

std::vector<ResultRecord> read_results_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ResultRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(record_from_json(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<MetricsRow> aggregate_records(const std::vector<ResultRecord>& records) {
    std::map<std::tuple<std::string, std::string, double, bool>, std::vector<TopicMetrics>>
        groups;
    for (const auto& rec : records) {
        if (!rec.error.empty()) continue;
        groups[{rec.dataset, rec.method, rec.desired_recall, rec.cost_sensitive}]
            .push_back(rec.metrics);
    }
    std::vector<MetricsRow> rows;
    for (const auto& [key, metrics] : groups) {
        MetricsRow row = aggregate(metrics);
        row.dataset = std::get<0>(key);
        row.method = std::get<1>(key);
        if (!std::get<3>(key)) row.method += "(no-csl)";
        row.desired_recall = std::get<2>(key);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::string out = "dataset,method,desired_recall,recall,reliability,cost,excess,topics\n";
    for (const auto& r : rows) {
        out += r.dataset + ',' + r.method + ',' + fmt6(r.desired_recall) + ',' +
               fmt6(r.recall) + ',' + fmt6(r.reliability) + ',' + fmt6(r.cost) + ',' +
               fmt6(r.excess) + ',' + std::to_string(r.num_topics) + '\n';
    }
    return out;
}

std::vector<SignificanceRow> significance_tests(const std::vector<ResultRecord>& records) {
    // (dataset, desired_recall) -> method -> topic_id -> record
    std::map<std::pair<std::string, double>,
             std::map<std::string, std::map<std::string, const ResultRecord*>>>
        groups;
    for (const auto& rec : records) {
        if (!rec.error.empty()) continue;
        std::string method = rec.method;
        if (!rec.cost_sensitive) method += "(no-csl)";
        groups[{rec.dataset, rec.desired_recall}][method][rec.topic_id] = &rec;
    }

    std::vector<SignificanceRow> rows;
    for (const auto& [group_key, by_method] : groups) {
        std::vector<std::string> methods;
        for (const auto& [m, _] : by_method) methods.push_back(m);
        for (std::size_t i = 0; i < methods.size(); ++i) {
            for (std::size_t j = i + 1; j < methods.size(); ++j) {
                const auto& ta = by_method.at(methods[i]);
                const auto& tb = by_method.at(methods[j]);
                std::vector<double> cost_a, cost_b, recall_a, recall_b;
                for (const auto& [topic_id, ra] : ta) {
                    auto rb = tb.find(topic_id);
                    if (rb == tb.end()) throw std::runtime_error("unpaired topics");
                    cost_a.push_back(ra->metrics.cost);
                    cost_b.push_back(rb->second->metrics.cost);
                    recall_a.push_back(ra->metrics.recall);
                    recall_b.push_back(rb->second->metrics.recall);
                }
                if (ta.size() != tb.size()) throw std::runtime_error("unpaired topics");
                if (cost_a.size() < 2) continue;
                for (const char* metric : {"cost", "recall"}) {
                    SignificanceRow row;
                    row.dataset = group_key.first;
                    row.desired_recall = group_key.second;
                    row.method_a = methods[i];
                    row.method_b = methods[j];
                    row.metric = metric;
                    row.num_topics = static_cast<int>(cost_a.size());
                    row.p_value = metric == std::string("cost")
                                      ? paired_t_test(cost_a, cost_b)
                                      : paired_t_test(recall_a, recall_b);
                    rows.push_back(row);
                }
            }
        }
    }
    // Bonferroni family = every test emitted in this report.
    const int family = static_cast<int>(rows.size());
    for (auto& row : rows) {
        row.family_size = family;
        row.p_corrected = std::min(1.0, row.p_value * family);
    }
    return rows;
}

std::string significance_csv(const std::vector<SignificanceRow>& rows) {
    std::string out =
        "dataset,desired_recall,method_a,method_b,metric,topics,p_value,p_bonferroni,"
        "family_size\n";
    for (const auto& r : rows) {
        out += r.dataset + ',' + fmt6(r.desired_recall) + ',' + r.method_a + ',' + r.method_b +
               ',' + r.metric + ',' + std::to_string(r.num_topics) + ',' + fmt6(r.p_value) +
               ',' + fmt6(r.p_corrected) + ',' + std::to_string(r.family_size) + '\n';
    }
    return out;
}

}  // namespace tar
