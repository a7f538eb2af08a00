"""Acceptance gate: one test per suite-level guarantee, one line under -v.

Suite instances come from fixed seeds and are built once per module,
together with exact reference tours. The time spent building a suite is
charged against the wall-clock budget of every criterion that uses it,
so the budgets cover generation, reference solving, and the run itself.
"""

import random
import time
from dataclasses import dataclass

import pytest

from neartsp import (
    WeightedGraph,
    bad_vertices_p,
    brute_force_tour,
    enumerate_bad_chains,
    generate,
    held_karp_tour,
    min_violating_set,
    safety,
    solve,
    suite_specs,
)
from neartsp.groundtruth import audit_alg2, audit_alg4

from helpers import brute_min_violating_set, chain_sets_by_insertion, random_symmetric_matrix

SUITE_SEED = 1729
METRIC_COUNT = 200
PLANTED_P_COUNT = 100
PLANTED_Q_COUNT = 50

METRIC_BUDGET_S = 60.0
ALG1_BUDGET_S = 300.0
ALG2_BUDGET_S = 900.0
ALG4_BUDGET_S = 1800.0

# (graph, tour order, claimed weight) for every solver run in this module
RESULT_TOURS: list[tuple[WeightedGraph, tuple[int, ...], int]] = []
EXPECTED_RESULTS = METRIC_COUNT + 2 * PLANTED_P_COUNT + PLANTED_Q_COUNT


@dataclass(frozen=True)
class Suite:
    graphs: list[WeightedGraph]
    opt_orders: list[tuple[int, ...]]
    opt_weights: list[int]
    build_seconds: float


def _build_suite(name: str, count: int) -> Suite:
    start = time.perf_counter()
    graphs = [generate(spec) for _, spec in suite_specs(name, count, SUITE_SEED)]
    opts = [brute_force_tour(g) for g in graphs]
    return Suite(
        graphs=graphs,
        opt_orders=[t.order for t in opts],
        opt_weights=[t.weight for t in opts],
        build_seconds=time.perf_counter() - start,
    )


def _stats_snapshot() -> tuple[int, int, int, int]:
    s = safety.STATS
    return (
        s.weight_checks,
        s.weight_violations,
        s.hamiltonicity_checks,
        s.hamiltonicity_violations,
    )


@pytest.fixture(scope="module")
def safety_baseline():
    return _stats_snapshot()


@pytest.fixture(scope="module")
def metric_suite(safety_baseline):
    return _build_suite("metric", METRIC_COUNT)


@pytest.fixture(scope="module")
def planted_p_suite(safety_baseline):
    return _build_suite("p", PLANTED_P_COUNT)


@pytest.fixture(scope="module")
def planted_q_suite(safety_baseline):
    return _build_suite("q", PLANTED_Q_COUNT)


def _run_suite(suite: Suite, algorithm: str) -> list[int]:
    weights = []
    for g in suite.graphs:
        report = solve(g, algorithm)
        RESULT_TOURS.append((g, tuple(report.tour), report.weight))
        weights.append(report.weight)
    return weights


def test_metric_suite_christofides_within_3_halves_of_optimum(metric_suite):
    start = time.perf_counter()
    weights = _run_suite(metric_suite, "christofides")
    for w, opt in zip(weights, metric_suite.opt_weights):
        assert 2 * w <= 3 * opt
    elapsed = time.perf_counter() - start + metric_suite.build_seconds
    assert elapsed < METRIC_BUDGET_S


def test_planted_p_suite_alg1_within_5_halves_of_optimum(planted_p_suite):
    start = time.perf_counter()
    weights = _run_suite(planted_p_suite, "alg1")
    for w, opt in zip(weights, planted_p_suite.opt_weights):
        assert 2 * w <= 5 * opt
    elapsed = time.perf_counter() - start + planted_p_suite.build_seconds
    assert elapsed < ALG1_BUDGET_S


def test_planted_p_suite_alg2_within_3_halves_of_optimum(planted_p_suite):
    start = time.perf_counter()
    weights = _run_suite(planted_p_suite, "alg2")
    for w, opt in zip(weights, planted_p_suite.opt_weights):
        assert 2 * w <= 3 * opt
    elapsed = time.perf_counter() - start + planted_p_suite.build_seconds
    assert elapsed < ALG2_BUDGET_S


def test_planted_q_suite_alg4_within_3_of_optimum(planted_q_suite):
    start = time.perf_counter()
    weights = _run_suite(planted_q_suite, "alg4")
    for w, opt in zip(weights, planted_q_suite.opt_weights):
        assert w <= 3 * opt
    elapsed = time.perf_counter() - start + planted_q_suite.build_seconds
    assert elapsed < ALG4_BUDGET_S


def test_optimal_tour_guesses_satisfy_all_structural_bounds(planted_p_suite, planted_q_suite):
    violated = []
    for g, order in zip(planted_p_suite.graphs, planted_p_suite.opt_orders):
        violated += audit_alg2(g, order, bad_vertices_p(g).bad).violations()
    for g, order in zip(planted_q_suite.graphs, planted_q_suite.opt_orders):
        violated += audit_alg4(g, order, min_violating_set(g).bad).violations()
    assert violated == []


def test_exact_solvers_agree_with_independent_brute_force():
    rng = random.Random(8128)
    for _ in range(100):
        g = WeightedGraph(random_symmetric_matrix(rng.randint(4, 10), rng))
        assert held_karp_tour(g).weight == brute_force_tour(g).weight
    for _ in range(100):
        g = WeightedGraph(random_symmetric_matrix(rng.randint(3, 9), rng))
        assert min_violating_set(g).bad == brute_min_violating_set(g)


def test_chain_set_enumeration_counts():
    expected = {1: 1, 2: 2, 3: 7, 4: 34}
    for size, count in expected.items():
        vs = tuple(range(size))
        got = [cs.chains for cs in enumerate_bad_chains(vs)]
        assert len(got) == count
        assert len(set(got)) == count
        assert set(got) == chain_sets_by_insertion(vs)


def test_all_shortcut_and_hamiltonicity_checks_pass(safety_baseline):
    checks_w, viol_w, checks_h, viol_h = _stats_snapshot()
    base_checks_w, base_viol_w, base_checks_h, base_viol_h = safety_baseline
    assert checks_w > base_checks_w
    assert checks_h > base_checks_h
    assert viol_w == base_viol_w
    assert viol_h == base_viol_h

    assert len(RESULT_TOURS) == EXPECTED_RESULTS
    for g, order, weight in RESULT_TOURS:
        assert sorted(order) == list(range(g.n))
        assert g.tour_weight(order) == weight
