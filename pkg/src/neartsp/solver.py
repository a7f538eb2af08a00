"""One entry point over all solvers, plus oracle attachment."""

from __future__ import annotations

import time

from .alg_p import CHAIN_CAP, alg1, alg2
from .alg_q import ORDERED_CHAIN_CAP, alg4
from .errors import CapExceeded
from .graph import WeightedGraph, bad_vertices_p, min_violating_set
from .metric import christofides
from .prims import BRUTE_FORCE_CAP, HELD_KARP_CAP, brute_force_tour, held_karp_tour
from .report import SolveReport
from .structures import Tour

ALGORITHMS = ("alg1", "alg2", "alg4", "christofides", "exact")


def _wrap(algorithm: str, tour: Tour, p: int, q: int, t0: float) -> SolveReport:
    return SolveReport(
        algorithm=algorithm,
        tour=list(tour.order),
        weight=tour.weight,
        opt=None,
        ratio=None,
        p=p,
        q=q,
        guesses_evaluated=1,
        guesses_skipped=0,
        wall_time_ms=int((time.perf_counter() - t0) * 1000),
    )


def solve(
    g: WeightedGraph,
    algorithm: str,
    chain_cap: int = CHAIN_CAP,
    ordered_chain_cap: int = ORDERED_CHAIN_CAP,
    hk_cap: int = HELD_KARP_CAP,
) -> SolveReport:
    """Run one named solver and report the result without an optimum."""
    if algorithm == "alg1":
        return alg1(g, hk_cap=hk_cap)
    if algorithm == "alg2":
        return alg2(g, chain_cap=chain_cap, hk_cap=hk_cap)
    if algorithm == "alg4":
        return alg4(g, chain_cap=ordered_chain_cap, hk_cap=hk_cap)
    if algorithm == "christofides":
        t0 = time.perf_counter()
        tour = christofides(g)
        return _wrap("christofides", tour, bad_vertices_p(g).size, min_violating_set(g).size, t0)
    if algorithm == "exact":
        t0 = time.perf_counter()
        tour = held_karp_tour(g, cap=hk_cap)
        return _wrap("exact", tour, bad_vertices_p(g).size, min_violating_set(g).size, t0)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def attach_oracle(
    g: WeightedGraph, report: SolveReport, cap: int = BRUTE_FORCE_CAP
) -> SolveReport:
    """Fill in the exact optimum (branch and bound) and the ratio."""
    if g.n > cap:
        raise CapExceeded(f"oracle needs n <= {cap}, instance has {g.n}")
    return report.with_opt(brute_force_tour(g, cap=cap).weight)
