"""Seeded instance generators.

Random metric instances come from integer weights closed under shortest
paths.  Planted instances start metric and then raise single edges so the
damage is exactly controllable: raising w(a,b) can only create violating
triangles of the form (a, x, b), so sorting the detour sums w(a,x)+w(x,b)
and placing the new weight just past a strict gap pins the number of
violating vertices precisely.  The q regime plants vertex-disjoint
violating triangles, one per target unit, which forces the minimum
violating set to be exactly one transversal of them.  All randomness
comes from ``random.Random(seed)`` (Mersenne Twister), so equal seeds
reproduce equal instances on any platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, GenerationFailed
from .graph import WeightedGraph, bad_vertices_p, min_violating_set

KINDS = ("randomMetric", "plantedP", "plantedQ")
DEFAULT_WEIGHT_RANGE = (5, 50)
MAX_ATTEMPTS = 200
"""Perturbation retries before a planted build gives up."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one generated instance."""

    kind: str
    n: int
    target: int = 0
    seed: int = 0
    weight_range: tuple[int, int] = DEFAULT_WEIGHT_RANGE

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 3:
            raise ValueError("generated instances need at least three vertices")
        if not 0 <= self.target <= self.n:
            raise ValueError("target must lie in [0, n]")
        lo, hi = self.weight_range
        if lo < 1 or hi < lo:
            raise ValueError("weight range must satisfy 1 <= lo <= hi")


def _metric_base(n: int, lo: int, hi: int, rng: random.Random) -> list[list[int]]:
    """Random symmetric integer weights, closed under shortest paths."""
    mat = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            mat[i][j] = mat[j][i] = rng.randint(lo, hi)
    for k in range(n):
        np.minimum(mat, np.add.outer(mat[:, k], mat[k, :]), out=mat)
    np.fill_diagonal(mat, 0)
    return mat.tolist()


def gen_random_metric(spec: GeneratorSpec) -> WeightedGraph:
    """A random instance satisfying every triangle inequality."""
    if spec.kind != "randomMetric":
        raise ValueError("gen_random_metric expects kind randomMetric")
    lo, hi = spec.weight_range
    rng = random.Random(spec.seed)
    return WeightedGraph(_metric_base(spec.n, lo, hi, rng))


def _plant_p(spec: GeneratorSpec, rng: random.Random) -> WeightedGraph:
    lo, hi = spec.weight_range
    mat = _metric_base(spec.n, lo, hi, rng)
    if spec.target == 0:
        return WeightedGraph(mat)
    if spec.target < 3:
        raise GenerationFailed(
            "violating-vertex counts of 1 or 2 are unrealizable: "
            "any violating triangle brings three vertices"
        )
    n = spec.n
    k = spec.target - 2
    for attempt in range(MAX_ATTEMPTS):
        if attempt and attempt % 25 == 0:
            mat = _metric_base(n, lo, hi, rng)
        a, b = sorted(rng.sample(range(n), 2))
        detours = sorted(mat[a][x] + mat[x][b] for x in range(n) if x not in (a, b))
        if k < len(detours) and detours[k - 1] == detours[k]:
            continue
        cand = [row[:] for row in mat]
        cand[a][b] = cand[b][a] = detours[k - 1] + 1
        g = WeightedGraph(cand)
        if bad_vertices_p(g).size == spec.target:
            return g
    raise GenerationFailed(
        f"no usable edge raise found for p target {spec.target} in {MAX_ATTEMPTS} tries"
    )


def _plant_q(spec: GeneratorSpec, rng: random.Random) -> WeightedGraph:
    lo, hi = spec.weight_range
    base = _metric_base(spec.n, lo, hi, rng)
    if spec.target == 0:
        return WeightedGraph(base)
    n = spec.n
    if 3 * spec.target > n:
        raise GenerationFailed(
            "each planted violating triangle needs three fresh vertices; "
            f"q target {spec.target} does not fit in {n} vertices"
        )
    for attempt in range(MAX_ATTEMPTS):
        if attempt and attempt % 25 == 0:
            base = _metric_base(n, lo, hi, rng)
        mat = [row[:] for row in base]
        used: set[int] = set()
        ok = True
        for _ in range(spec.target):
            free = [v for v in range(n) if v not in used]
            c, x = rng.sample(free, 2)
            detours = sorted(
                (mat[c][y] + mat[y][x], y) for y in range(n) if y not in (c, x)
            )
            s0, y0 = detours[0]
            if y0 in used or (len(detours) > 1 and detours[1][0] == s0):
                ok = False
                break
            mat[c][x] = mat[x][c] = s0 + 1
            used.update((c, x, y0))
        if not ok:
            continue
        g = WeightedGraph(mat)
        try:
            part = min_violating_set(g, budget=spec.target)
        except BudgetExceeded:
            continue
        if part.size == spec.target:
            return g
    raise GenerationFailed(
        f"no disjoint planted triangles for q target {spec.target} in {MAX_ATTEMPTS} tries"
    )


def gen_planted(spec: GeneratorSpec) -> WeightedGraph:
    """A near-metric instance with an exact planted parameter value.

    The achieved value is re-measured after construction; perturbations
    that miss the target are retried with fresh randomness, and a bounded
    number of misses raises :class:`GenerationFailed`.
    """
    rng = random.Random(spec.seed)
    if spec.kind == "plantedP":
        return _plant_p(spec, rng)
    if spec.kind == "plantedQ":
        return _plant_q(spec, rng)
    raise ValueError("gen_planted expects kind plantedP or plantedQ")


def generate(spec: GeneratorSpec) -> WeightedGraph:
    """Dispatch on the spec kind."""
    if spec.kind == "randomMetric":
        return gen_random_metric(spec)
    return gen_planted(spec)


_SUITE_METRIC_SIZES = (6, 7, 8, 9, 10, 11)
_SUITE_P_SHAPES = ((8, 3), (9, 4), (10, 5), (11, 3), (12, 4), (8, 5), (10, 3), (12, 5))
_SUITE_Q_SHAPES = ((8, 1), (9, 2), (10, 3), (9, 1), (8, 2), (10, 1), (10, 2), (9, 3))


def suite_specs(suite: str, count: int, seed: int) -> list[tuple[str, GeneratorSpec]]:
    """Instance ids and generator specs for a named benchmark suite.

    Sizes and targets cycle through fixed shape tables so every run of a
    given suite, count, and seed sees the same instances.
    """
    out: list[tuple[str, GeneratorSpec]] = []
    for i in range(count):
        instance_seed = seed * 1_000_003 + i
        if suite == "metric":
            n = _SUITE_METRIC_SIZES[i % len(_SUITE_METRIC_SIZES)]
            spec = GeneratorSpec(kind="randomMetric", n=n, target=0, seed=instance_seed)
        elif suite == "p":
            n, target = _SUITE_P_SHAPES[i % len(_SUITE_P_SHAPES)]
            spec = GeneratorSpec(kind="plantedP", n=n, target=target, seed=instance_seed)
        elif suite == "q":
            n, target = _SUITE_Q_SHAPES[i % len(_SUITE_Q_SHAPES)]
            spec = GeneratorSpec(kind="plantedQ", n=n, target=target, seed=instance_seed)
        else:
            raise ValueError(f"unknown suite {suite!r}")
        out.append((f"{suite}-{i:04d}", spec))
    return out
