import random

import pytest

from helpers import chain_sets_by_insertion, random_symmetric_matrix, spanning_forests
from neartsp import (
    CapExceeded,
    ChainSet,
    GeneratorSpec,
    VertexPartition,
    WeightedGraph,
    alg1,
    alg2,
    brute_force_tour,
    christofides,
    enumerate_bad_chains,
    generate,
)
from neartsp.alg_p import build_cst, parity_matching_alg2, shortcut_alg2
from neartsp.graph import bad_vertices_p
from neartsp.structures import MultiEdgeSet


def planted_p(n: int, target: int, seed: int) -> WeightedGraph:
    return generate(GeneratorSpec(kind="plantedP", n=n, target=target, seed=seed))


class TestChainSet:
    def test_of_canonicalizes(self):
        cs = ChainSet.of([(5, 3, 1), (2,)])
        assert cs.chains == ((1, 3, 5), (2,))

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            ChainSet(chains=((2, 1),))
        with pytest.raises(ValueError):
            ChainSet(chains=((1,), (1, 2)))
        with pytest.raises(ValueError):
            ChainSet(chains=((),))
        with pytest.raises(ValueError):
            ChainSet(chains=((2,), (1,)))

    def test_edges_and_weight(self, frozen4):
        cs = ChainSet.of([(1, 0, 2)])
        assert cs.edges(frozen4) == [(0, 1, 1), (0, 2, 5)]
        assert cs.weight(frozen4) == 6
        assert cs.vertices() == frozenset({0, 1, 2})


class TestEnumerateBadChains:
    def test_counts_match_known_sequence(self):
        for size, expected in [(0, 1), (1, 1), (2, 2), (3, 7), (4, 34), (5, 206)]:
            got = list(enumerate_bad_chains(range(size)))
            assert len(got) == expected

    def test_matches_insertion_oracle(self):
        for size in range(1, 6):
            vs = list(range(0, 2 * size, 2))
            got = [cs.chains for cs in enumerate_bad_chains(vs)]
            assert len(got) == len(set(got))
            assert set(got) == chain_sets_by_insertion(vs)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            list(enumerate_bad_chains(range(8)))
        assert len(list(enumerate_bad_chains(range(8), cap=8))) > 0

    def test_empty(self):
        assert [cs.chains for cs in enumerate_bad_chains([])] == [()]


def _valid_csts(g: WeightedGraph, chains: ChainSet):
    """Spanning trees containing the chains with legal degrees, by brute force."""
    bad = chains.vertices()
    chain_edges = {(u, v) for u, v, _ in chains.edges(g)}
    chain_nbrs: dict[int, set[int]] = {v: set() for v in bad}
    for c in chains.chains:
        for a, b in zip(c, c[1:]):
            chain_nbrs[a].add(b)
            chain_nbrs[b].add(a)
    for tree in spanning_forests(range(g.n), g.w, 1):
        keys = {(u, v) for u, v in tree}
        if not chain_edges <= keys:
            continue
        ok = True
        for v in bad:
            nbrs = {u for u, x in tree if x == v} | {x for u, x in tree if u == v}
            if {u for u in nbrs if u in bad} != chain_nbrs[v]:
                ok = False
                break
            if len(chain_nbrs[v]) == 2 and len(nbrs) != 2:
                ok = False
                break
        if ok:
            yield sum(g.w(u, v) for u, v in tree)


class TestConstrainedSpanningTree:
    def test_minimum_over_exhaustive_class(self):
        rng = random.Random(67)
        for _ in range(12):
            n = rng.randint(4, 6)
            g = WeightedGraph(random_symmetric_matrix(n, rng))
            bad = sorted(rng.sample(range(n), rng.randint(1, n - 1)))
            for chains in enumerate_bad_chains(bad):
                cst = build_cst(g, chains)
                cst.validate(g)
                best = min(_valid_csts(g, chains))
                assert cst.total_weight == best

    def test_validate_rejects_missing_chain_edge(self, frozen4):
        chains = ChainSet.of([(0, 1)])
        cst = build_cst(frozen4, chains)
        from neartsp.alg_p import ConstrainedSpanningTree
        from neartsp.errors import InvariantViolation
        from neartsp.structures import EdgeSet

        broken = ConstrainedSpanningTree(
            chains=chains,
            edges=EdgeSet.of([(0, 3, 1), (1, 3, 1), (2, 3, 1)]),
        )
        with pytest.raises(InvariantViolation):
            broken.validate(frozen4)
        cst.validate(frozen4)


class TestParityMatching:
    def test_fixes_all_parities(self):
        rng = random.Random(71)
        for _ in range(15):
            g = planted_p(rng.randint(8, 10), rng.choice([3, 4, 5]), rng.randrange(10**6))
            bad = sorted(bad_vertices_p(g).bad)
            for chains in list(enumerate_bad_chains(bad))[:10]:
                cst = build_cst(g, chains)
                pm = parity_matching_alg2(g, chains, cst)
                multigraph = MultiEdgeSet()
                for u, v, wt in cst.edges:
                    multigraph.add(u, v, wt)
                for idx in pm.doubled_chains:
                    chain = chains.chains[idx]
                    for a, b in zip(chain, chain[1:]):
                        multigraph.add(a, b, g.w(a, b))
                for u, v, wt in pm.cross_edges:
                    multigraph.add(u, v, wt)
                assert multigraph.odd_vertices() == []
                assert pm.weight == pm.aux.total_weight

    def test_doubling_costs_chain_weight(self):
        # cheap chains amid uniformly heavy edges make doubling the best fix
        g = WeightedGraph.from_upper_triangle(
            6,
            [[1, 30, 30, 30, 30], [30, 30, 30, 30], [1, 30, 30], [30, 30], [30]],
        )
        chains = ChainSet.of([(0, 1), (2, 3)])
        cst = build_cst(g, chains)
        pm = parity_matching_alg2(g, chains, cst)
        assert pm.doubled_chains == (1,)
        assert pm.cross_edges == ((1, 5, 30),)
        assert pm.weight == pm.aux.total_weight == 31
        tour = shortcut_alg2(g, chains, cst, pm)
        assert sorted(tour.order) == list(range(6))
        assert tour.weight <= cst.total_weight + pm.weight


class TestAlg1:
    def test_metric_falls_back_to_christofides(self):
        g = generate(GeneratorSpec(kind="randomMetric", n=9, seed=8))
        report = alg1(g)
        assert report.weight == christofides(g).weight
        assert report.p == 0 and report.q == 0
        assert report.guesses_evaluated == 1

    def test_few_good_vertices_solved_exactly(self, frozen4):
        report = alg1(frozen4)
        assert report.weight == 4
        assert sorted(report.tour) == [0, 1, 2, 3]

    def test_bound_on_planted_instances(self):
        rng = random.Random(73)
        for _ in range(10):
            g = planted_p(rng.randint(8, 11), rng.choice([3, 4]), rng.randrange(10**6))
            report = alg1(g)
            opt = brute_force_tour(g).weight
            assert 2 * report.weight <= 5 * opt
            assert sorted(report.tour) == list(range(g.n))

    def test_rejects_wrong_partition_kind(self, frozen4):
        part = VertexPartition(bad=frozenset({0}), good=frozenset({1, 2, 3}), kind="byQ")
        with pytest.raises(ValueError):
            alg1(frozen4, partition=part)


class TestAlg2:
    def test_bound_on_planted_instances(self):
        rng = random.Random(79)
        for _ in range(10):
            g = planted_p(rng.randint(8, 10), rng.choice([3, 4, 5]), rng.randrange(10**6))
            report = alg2(g)
            opt = brute_force_tour(g).weight
            assert 2 * report.weight <= 3 * opt
            assert sorted(report.tour) == list(range(g.n))
            assert report.algorithm == "alg2"

    def test_single_bad_vertex_means_one_guess(self):
        g = generate(GeneratorSpec(kind="randomMetric", n=8, seed=10))
        part = VertexPartition(bad=frozenset({0}), good=frozenset(range(1, 8)), kind="byP")
        report = alg2(g, partition=part)
        assert report.guesses_evaluated == 1
        assert report.guesses_skipped == 0

    def test_all_bad_solved_exactly(self, frozen4):
        report = alg2(frozen4)
        assert report.weight == 4
        assert report.p == 4 and report.q == 1

    def test_never_worse_than_alg1(self):
        rng = random.Random(83)
        for _ in range(6):
            g = planted_p(9, 3, rng.randrange(10**6))
            assert alg2(g).weight <= alg1(g).weight

    def test_shortcut_pipeline_on_true_instances(self):
        g = planted_p(9, 3, 1234)
        bad = sorted(bad_vertices_p(g).bad)
        results = []
        for chains in enumerate_bad_chains(bad):
            cst = build_cst(g, chains)
            pm = parity_matching_alg2(g, chains, cst)
            tour = shortcut_alg2(g, chains, cst, pm)
            assert sorted(tour.order) == list(range(g.n))
            assert tour.weight <= cst.total_weight + pm.weight
            results.append(tour.weight)
        assert alg2(g).weight == min(results)
