#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tar/corpus.hpp"
#include "tar/eval.hpp"
#include "tar/poisson.hpp"
#include "tar/rate.hpp"
#include "tar/stopper.hpp"
#include "tar/textproc.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "counting-process stopping rules for technology-assisted review";

    py::class_<tar::Document>(m, "Document")
        .def(py::init<>())
        .def_readwrite("doc_id", &tar::Document::doc_id)
        .def_readwrite("text", &tar::Document::text)
        .def_readwrite("gold_relevant", &tar::Document::gold_relevant);

    py::class_<tar::Topic>(m, "Topic")
        .def(py::init<>())
        .def_readwrite("topic_id", &tar::Topic::topic_id)
        .def_readwrite("docs", &tar::Topic::docs)
        .def("__len__", &tar::Topic::size)
        .def("relevant_total", &tar::Topic::relevant_total);

    py::class_<tar::Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("name", &tar::Dataset::name)
        .def_readwrite("topics", &tar::Dataset::topics);

    m.def("load_topic", &tar::load_topic, py::arg("ranking_path"), py::arg("qrels_path"),
          py::arg("texts_path"), py::arg("topic_id"));
    m.def("load_dataset", &tar::load_dataset, py::arg("ranking_path"), py::arg("qrels_path"),
          py::arg("texts_path"), py::arg("name"));
    m.def("synth_topic",
          py::overload_cast<std::uint64_t, int, double, double, double, const std::string&>(
              &tar::synth_topic),
          py::arg("seed"), py::arg("num_docs"), py::arg("prevalence"), py::arg("decay"),
          py::arg("vocab_quality"), py::arg("topic_id") = "synth");
    m.def("relevant_in_prefix", &tar::relevant_in_prefix);
    m.def("write_dataset", &tar::write_dataset);
    m.def("mix_seed", &tar::mix_seed);

    m.def("tokenize", &tar::tokenize);

    m.def("poisson_cdf", &tar::poisson_cdf, py::arg("lam"), py::arg("count"));
    m.def("poisson_quantile", &tar::poisson_quantile, py::arg("lam"), py::arg("confidence"));

    py::class_<tar::StopParams>(m, "StopParams")
        .def(py::init<>())
        .def_readwrite("desired_recall", &tar::StopParams::desired_recall)
        .def_readwrite("confidence", &tar::StopParams::confidence);

    py::class_<tar::StopDecision>(m, "StopDecision")
        .def_readonly("stop", &tar::StopDecision::stop)
        .def_readonly("upper", &tar::StopDecision::upper)
        .def_readonly("estimated_total", &tar::StopDecision::estimated_total);

    m.def("stop_decision", &tar::stop_decision, py::arg("relevant_seen"),
          py::arg("lambda_remaining"), py::arg("params"));

    py::class_<tar::SamplePoint>(m, "SamplePoint")
        .def(py::init<>())
        .def_readwrite("x", &tar::SamplePoint::x)
        .def_readwrite("p", &tar::SamplePoint::p);

    py::class_<tar::RateFunction>(m, "RateFunction")
        .def_readonly("a", &tar::RateFunction::a)
        .def_readonly("k", &tar::RateFunction::k)
        .def_readonly("converged", &tar::RateFunction::converged);

    m.def(
        "fit_power_law",
        [](const std::vector<std::pair<double, double>>& pts, int max_iters) {
            std::vector<tar::SamplePoint> points;
            points.reserve(pts.size());
            for (const auto& [x, p] : pts) points.push_back({x, p});
            return tar::fit_power_law(points, max_iters);
        },
        py::arg("points"), py::arg("max_iters") = 200);
    m.def("expected_count", &tar::expected_count, py::arg("rate"), py::arg("from_pos"),
          py::arg("to_pos"));

    py::enum_<tar::Method>(m, "Method")
        .value("CP", tar::Method::CP)
        .value("CPClassLabel", tar::Method::CPClassLabel)
        .value("CPClassScore", tar::Method::CPClassScore);
    m.def("method_name", &tar::method_name);
    m.def("method_from_name", &tar::method_from_name);

    py::class_<tar::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("method", &tar::RunConfig::method)
        .def_readwrite("stop_params", &tar::RunConfig::stop_params)
        .def_readwrite("initial_fraction", &tar::RunConfig::initial_fraction)
        .def_readwrite("increment_fraction", &tar::RunConfig::increment_fraction)
        .def_readwrite("window_size", &tar::RunConfig::window_size)
        .def_readwrite("cost_sensitive", &tar::RunConfig::cost_sensitive);

    py::class_<tar::IterationTrace>(m, "IterationTrace")
        .def_readonly("n", &tar::IterationTrace::n)
        .def_readonly("relevant_seen", &tar::IterationTrace::relevant_seen)
        .def_readonly("has_rate", &tar::IterationTrace::has_rate)
        .def_readonly("rate", &tar::IterationTrace::rate)
        .def_readonly("lambda_remaining", &tar::IterationTrace::lambda_remaining)
        .def_readonly("upper", &tar::IterationTrace::upper)
        .def_readonly("estimated_total", &tar::IterationTrace::estimated_total)
        .def_readonly("stop", &tar::IterationTrace::stop)
        .def_readonly("classifier_used", &tar::IterationTrace::classifier_used);

    py::class_<tar::StoppingResult>(m, "StoppingResult")
        .def_readonly("topic_id", &tar::StoppingResult::topic_id)
        .def_readonly("method", &tar::StoppingResult::method)
        .def_readonly("stop_position", &tar::StoppingResult::stop_position)
        .def_readonly("relevant_found", &tar::StoppingResult::relevant_found)
        .def_readonly("trace", &tar::StoppingResult::trace)
        .def_readonly("error", &tar::StoppingResult::error);

    m.def("run", &tar::run, py::arg("topic"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_dataset", &tar::run_dataset, py::arg("dataset"), py::arg("config"),
          py::arg("parallelism") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("result_to_json", &tar::result_to_json);

    py::class_<tar::TopicMetrics>(m, "TopicMetrics")
        .def_readonly("recall", &tar::TopicMetrics::recall)
        .def_readonly("reliability", &tar::TopicMetrics::reliability)
        .def_readonly("cost", &tar::TopicMetrics::cost)
        .def_readonly("excess", &tar::TopicMetrics::excess);

    py::class_<tar::MetricsRow>(m, "MetricsRow")
        .def_readonly("dataset", &tar::MetricsRow::dataset)
        .def_readonly("method", &tar::MetricsRow::method)
        .def_readonly("desired_recall", &tar::MetricsRow::desired_recall)
        .def_readonly("recall", &tar::MetricsRow::recall)
        .def_readonly("reliability", &tar::MetricsRow::reliability)
        .def_readonly("cost", &tar::MetricsRow::cost)
        .def_readonly("excess", &tar::MetricsRow::excess)
        .def_readonly("num_topics", &tar::MetricsRow::num_topics);

    m.def("excess_cost", &tar::excess_cost, py::arg("cost_method"), py::arg("cost_optimal"));
    m.def("optimal_prefix", &tar::optimal_prefix, py::arg("topic"), py::arg("desired_recall"));
    m.def("topic_metrics", &tar::topic_metrics, py::arg("result"), py::arg("topic"),
          py::arg("desired_recall"));
    m.def("aggregate", &tar::aggregate);
    m.def("paired_t_test", &tar::paired_t_test);
    m.def("student_t_cdf", &tar::student_t_cdf, py::arg("t"), py::arg("df"));
}
