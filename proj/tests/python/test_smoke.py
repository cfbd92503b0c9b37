import json
import math

import pytest

import tarstop


def test_poisson():
    assert tarstop.poisson_cdf(3.0, 6) == pytest.approx(0.96649, abs=1e-5)
    assert tarstop.poisson_quantile(3.0, 0.95) == 6
    with pytest.raises(Exception):
        tarstop.poisson_cdf(-1.0, 2)


def test_fit_power_law():
    points = [(x, 2.0 * x**-0.5) for x in (1.0, 4.0, 9.0, 16.0, 25.0)]
    rate = tarstop.fit_power_law(points)
    assert rate.a == pytest.approx(2.0, rel=1e-6)
    assert rate.k == pytest.approx(-0.5, rel=1e-6)
    assert tarstop.expected_count(rate, 1, 4) == pytest.approx(
        2.0 * sum(x**-0.5 for x in range(1, 5))
    )


def test_synth_determinism():
    a = tarstop.synth_topic(7, 120, 0.2, -0.5, 0.9)
    b = tarstop.synth_topic(7, 120, 0.2, -0.5, 0.9)
    assert len(a) == 120
    assert [d.doc_id for d in a.docs] == [d.doc_id for d in b.docs]
    assert [d.gold_relevant for d in a.docs] == [d.gold_relevant for d in b.docs]
    assert tarstop.tokenize(a.docs[0].text)


def test_run_and_metrics():
    topic = tarstop.synth_topic(3, 200, 0.15, -0.8, 0.9)
    config = tarstop.RunConfig()
    config.method = tarstop.Method.CPClassLabel
    config.stop_params.desired_recall = 0.8
    result = tarstop.run(topic, config)
    assert 0 < result.stop_position <= len(topic)
    assert result.relevant_found == tarstop.relevant_in_prefix(
        topic, result.stop_position
    )
    parsed = json.loads(tarstop.result_to_json(result))
    assert parsed["topic_id"] == topic.topic_id
    assert len(parsed["trace"]) == len(result.trace)

    metrics = tarstop.topic_metrics(result, topic, 0.8)
    assert 0.0 <= metrics.recall <= 1.0
    assert metrics.cost == pytest.approx(result.stop_position / len(topic))


def test_run_dataset_parallel_invariance():
    ds = tarstop.Dataset()
    ds.name = "smoke"
    ds.topics = [
        tarstop.synth_topic(tarstop.mix_seed(5, i), 100, 0.1, -0.6, 0.8, f"t{i}")
        for i in range(4)
    ]
    config = tarstop.RunConfig()
    config.stop_params.desired_recall = 0.9
    seq = tarstop.run_dataset(ds, config, 1)
    par = tarstop.run_dataset(ds, config, 4)
    assert [r.stop_position for r in seq] == [r.stop_position for r in par]


def test_stats():
    assert tarstop.excess_cost(0.3, 0.3) == 0.0
    assert tarstop.paired_t_test([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == 1.0
    assert tarstop.student_t_cdf(0.0, 5) == pytest.approx(0.5)
    assert math.isclose(
        tarstop.paired_t_test([1, 2, 3, 4, 5], [1, 2, 4, 5, 7]), 0.0993007, rel_tol=1e-4
    )
