"""Counting-process stopping rules for technology-assisted review."""

from ._core import (
    Dataset,
    Document,
    IterationTrace,
    Method,
    MetricsRow,
    RateFunction,
    RunConfig,
    SamplePoint,
    StopDecision,
    StopParams,
    StoppingResult,
    Topic,
    TopicMetrics,
    aggregate,
    excess_cost,
    expected_count,
    fit_power_law,
    load_dataset,
    load_topic,
    method_from_name,
    method_name,
    mix_seed,
    optimal_prefix,
    paired_t_test,
    poisson_cdf,
    poisson_quantile,
    relevant_in_prefix,
    result_to_json,
    run,
    run_dataset,
    stop_decision,
    student_t_cdf,
    synth_topic,
    tokenize,
    topic_metrics,
    write_dataset,
)

__all__ = [
    "Dataset",
    "Document",
    "IterationTrace",
    "Method",
    "MetricsRow",
    "RateFunction",
    "RunConfig",
    "SamplePoint",
    "StopDecision",
    "StopParams",
    "StoppingResult",
    "Topic",
    "TopicMetrics",
    "aggregate",
    "excess_cost",
    "expected_count",
    "fit_power_law",
    "load_dataset",
    "load_topic",
    "method_from_name",
    "method_name",
    "mix_seed",
    "optimal_prefix",
    "paired_t_test",
    "poisson_cdf",
    "poisson_quantile",
    "relevant_in_prefix",
    "result_to_json",
    "run",
    "run_dataset",
    "stop_decision",
    "student_t_cdf",
    "synth_topic",
    "tokenize",
    "topic_metrics",
    "write_dataset",
]
