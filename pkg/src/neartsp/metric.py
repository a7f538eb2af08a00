"""Christofides tour construction for metric (sub)instances.

The pipeline is the classic one: minimum spanning tree, minimum-weight
perfect matching on the odd-degree tree vertices, Eulerian walk, then a
first-occurrence shortcut.  On a metric vertex set the result is within
3/2 of the optimal tour weight.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from . import safety
from .errors import IncompleteCover, NotMetric
from .graph import WeightedGraph, is_metric
from .prims import eulerian_tour, min_weight_perfect_matching, mst
from .structures import MultiEdgeSet, Tour, WalkWithRepeats


def _check_metric_subset(g: WeightedGraph, vs: list[int]) -> None:
    if len(vs) == g.n:
        if not is_metric(g):
            raise NotMetric("instance violates the triangle inequality")
        return
    w = g.matrix
    for a, b, c in itertools.combinations(vs, 3):
        ab, ac, bc = w[a][b], w[a][c], w[b][c]
        if bc > ab + ac or ac > ab + bc or ab > ac + bc:
            raise NotMetric(f"triple ({a},{b},{c}) violates the triangle inequality")


def shortcut_metric(walk: WalkWithRepeats, g: WeightedGraph, subset: Sequence[int]) -> Tour:
    """Collapse a closed walk to a tour by keeping first occurrences only.

    Requires the walk to visit every subset vertex at least once and no
    vertex outside the subset.  On metric instances each skip replaces a
    detour by a direct edge, so the weight cannot grow; that is checked
    explicitly on every call.
    """
    required = set(subset)
    visited = set(walk.order)
    if visited - required:
        raise IncompleteCover("walk visits vertices outside the subset")
    if required - visited:
        raise IncompleteCover("walk misses subset vertices")
    seq: list[int] = []
    seen: set[int] = set()
    for v in walk.order:
        if v not in seen:
            seen.add(v)
            seq.append(v)
    weight = g.tour_weight(seq)
    safety.check_weight_nonincrease(weight, walk.weight, "shortcut_metric")
    return Tour.canonical(seq, weight)


def christofides(g: WeightedGraph, subset: Sequence[int] | None = None) -> Tour:
    """3/2-approximate tour over a metric vertex subset (default: all).

    Raises :class:`NotMetric` when the induced weights violate the triangle
    inequality; callers that work on near-metric instances must restrict to
    their metric part first.
    """
    vs = sorted(range(g.n) if subset is None else subset)
    if len(set(vs)) != len(vs):
        raise ValueError("subset repeats a vertex")
    _check_metric_subset(g, vs)
    if len(vs) == 1:
        return Tour.canonical(vs, 0)
    if len(vs) == 2:
        return Tour.canonical(vs, 2 * g.w(vs[0], vs[1]))
    tree = mst(vs, g.w)
    degree: dict[int, int] = {v: 0 for v in vs}
    for u, v, _ in tree:
        degree[u] += 1
        degree[v] += 1
    odd = [v for v in vs if degree[v] % 2 == 1]
    matching = min_weight_perfect_matching(odd, g.w)
    multigraph = MultiEdgeSet()
    for u, v, w in tree:
        multigraph.add(u, v, w)
    for u, v, w in matching:
        multigraph.add(u, v, w)
    walk = eulerian_tour(multigraph)
    tour = shortcut_metric(walk, g, vs)
    safety.check_visits_each_once(list(tour.order), vs, "christofides")
    return tour
