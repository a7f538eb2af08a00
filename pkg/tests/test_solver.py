from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from neartsp import (
    CapExceeded,
    GeneratorSpec,
    InstanceFormatError,
    NearMetricTSP,
    NotMetric,
    brute_force_tour,
    generate,
    solve,
    attach_oracle,
)


@pytest.fixture(scope="module")
def planted_p_graph():
    return generate(GeneratorSpec(kind="plantedP", n=9, target=3, seed=2))


@pytest.fixture(scope="module")
def metric_graph():
    return generate(GeneratorSpec(kind="randomMetric", n=9, seed=2))


class TestSolve:
    def test_dispatch_names(self, planted_p_graph):
        for alg in ("alg1", "alg2", "alg4", "exact"):
            report = solve(planted_p_graph, alg)
            assert report.algorithm == alg
            assert sorted(report.tour) == list(range(9))

    def test_exact_equals_brute(self, planted_p_graph):
        assert solve(planted_p_graph, "exact").weight == brute_force_tour(planted_p_graph).weight

    def test_christofides_requires_metric(self, planted_p_graph, metric_graph):
        with pytest.raises(NotMetric):
            solve(planted_p_graph, "christofides")
        assert solve(metric_graph, "christofides").p == 0

    def test_unknown_algorithm(self, metric_graph):
        with pytest.raises(ValueError):
            solve(metric_graph, "alg3")

    def test_attach_oracle(self, planted_p_graph):
        report = attach_oracle(planted_p_graph, solve(planted_p_graph, "alg2"))
        assert report.opt == brute_force_tour(planted_p_graph).weight
        assert report.ratio == Fraction(report.weight, report.opt)
        assert report.ratio <= Fraction(3, 2)

    def test_attach_oracle_cap(self, planted_p_graph):
        report = solve(planted_p_graph, "alg1")
        with pytest.raises(CapExceeded):
            attach_oracle(planted_p_graph, report, cap=5)

    def test_exact_ratio_is_one(self, metric_graph):
        report = attach_oracle(metric_graph, solve(metric_graph, "exact"))
        assert report.ratio == 1


class TestNearMetricTSP:
    def test_params_round_trip(self):
        est = NearMetricTSP(algorithm="alg2", chain_cap=5)
        params = est.get_params()
        assert params["algorithm"] == "alg2"
        assert params["chain_cap"] == 5
        twin = clone(est)
        assert twin.get_params() == params

    def test_fit_sets_attributes(self, planted_p_graph):
        est = NearMetricTSP(algorithm="alg2")
        out = est.fit([list(r) for r in planted_p_graph.matrix])
        assert out is est
        assert sorted(est.tour_) == list(range(9))
        assert est.weight_ == est.report_.weight
        assert est.p_ == 3
        assert est.n_features_in_ == 9

    def test_fit_predict_returns_array(self, metric_graph):
        pred = NearMetricTSP().fit_predict([list(r) for r in metric_graph.matrix])
        assert isinstance(pred, np.ndarray)
        assert sorted(pred.tolist()) == list(range(9))

    def test_score_is_negative_weight(self, metric_graph):
        est = NearMetricTSP().fit([list(r) for r in metric_graph.matrix])
        assert est.score(None) == -float(est.weight_)

    def test_score_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            NearMetricTSP().score(None)

    def test_input_validation(self):
        est = NearMetricTSP()
        with pytest.raises(ValueError):
            est.fit([[0, 1, 2], [1, 0, 3]])
        with pytest.raises(ValueError):
            est.fit([[0.0, 1.5], [1.5, 0.0]])
        with pytest.raises(InstanceFormatError):
            est.fit([[0, 1], [2, 0]])

    def test_float_integers_are_accepted(self, frozen4):
        est = NearMetricTSP(algorithm="exact")
        est.fit([[float(x) for x in row] for row in frozen4.matrix])
        assert est.weight_ == 4

    def test_auto_policy(self, metric_graph, planted_p_graph, frozen4):
        assert NearMetricTSP().fit(
            [list(r) for r in metric_graph.matrix]
        ).report_.algorithm == "christofides"
        assert NearMetricTSP().fit(
            [list(r) for r in planted_p_graph.matrix]
        ).report_.algorithm == "alg2"
        assert NearMetricTSP(chain_cap=0).fit(
            [list(r) for r in planted_p_graph.matrix]
        ).report_.algorithm == "alg4"
        assert NearMetricTSP(chain_cap=0, ordered_chain_cap=0).fit(
            [list(r) for r in frozen4.matrix]
        ).report_.algorithm == "exact"
        with pytest.raises(CapExceeded):
            NearMetricTSP(chain_cap=0, ordered_chain_cap=0, hk_cap=3).fit(
                [list(r) for r in frozen4.matrix]
            )

    def test_unknown_algorithm_rejected(self, frozen4):
        with pytest.raises(ValueError):
            NearMetricTSP(algorithm="alg9").fit([list(r) for r in frozen4.matrix])
