"""Weighted complete graphs, triangle-inequality analysis, and instance files.

The instance model is a complete undirected graph on vertices ``0..n-1``
with symmetric non-negative integer edge weights and a zero diagonal.  All
triangle-inequality reasoning is done with exact integer comparisons; a
triple violates the triangle inequality only when one side is *strictly*
longer than the sum of the other two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, InstanceFormatError


@dataclass(frozen=True)
class TriangleViolation:
    """A triple {a, b, c} (a < b < c) whose long side bypasses ``apex``.

    ``apex`` is the middle vertex of the violated inequality: the edge
    joining the other two vertices is strictly heavier than the two-edge
    detour through ``apex``.
    """

    a: int
    b: int
    c: int
    apex: int

    def vertices(self) -> frozenset[int]:
        return frozenset((self.a, self.b, self.c))


@dataclass(frozen=True)
class VertexPartition:
    """A bad/good split of the vertex set.

    ``kind`` records which notion produced the split: ``"byP"`` marks every
    vertex of every violating triangle bad, ``"byQ"`` marks a minimum set of
    vertices meeting every violating triangle bad.  Only the byP split
    guarantees that each triangle with a good vertex is metric; the byQ
    split guarantees the weaker fact that the good side induces a metric
    subgraph.
    """

    bad: frozenset[int]
    good: frozenset[int]
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in ("byP", "byQ"):
            raise ValueError(f"unknown partition kind {self.kind!r}")
        if self.bad & self.good:
            raise ValueError("bad and good sets overlap")

    @property
    def size(self) -> int:
        return len(self.bad)


class WeightedGraph:
    """Complete graph with symmetric non-negative integer weights."""

    __slots__ = ("n", "_w", "_violations")

    def __init__(self, weights: Sequence[Sequence[int]]):
        n = len(weights)
        if n < 1:
            raise InstanceFormatError("instance needs at least one vertex")
        rows: list[tuple[int, ...]] = []
        for i, row in enumerate(weights):
            if len(row) != n:
                raise InstanceFormatError(f"row {i} has length {len(row)}, expected {n}")
            out = []
            for j, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, int):
                    raise InstanceFormatError(f"weight ({i},{j}) is not an integer: {x!r}")
                if x < 0:
                    raise InstanceFormatError(f"weight ({i},{j}) is negative")
                out.append(x)
            rows.append(tuple(out))
        for i in range(n):
            if rows[i][i] != 0:
                raise InstanceFormatError(f"diagonal entry ({i},{i}) is {rows[i][i]}, expected 0")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InstanceFormatError(f"weights ({i},{j}) and ({j},{i}) differ")
        self.n = n
        self._w = tuple(rows)
        self._violations: tuple[TriangleViolation, ...] | None = None

    def w(self, i: int, j: int) -> int:
        return self._w[i][j]

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """Weight rows as immutable tuples, for hot loops and serialization."""
        return self._w

    def vertices(self) -> range:
        return range(self.n)

    def tour_weight(self, order: Sequence[int]) -> int:
        """Weight of the closed walk visiting ``order`` and returning to start."""
        w = self._w
        total = 0
        for k in range(len(order)):
            total += w[order[k - 1]][order[k]]
        return total

    def path_weight(self, order: Sequence[int]) -> int:
        w = self._w
        return sum(w[order[k]][order[k + 1]] for k in range(len(order) - 1))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeightedGraph) and self._w == other._w

    def __hash__(self) -> int:
        return hash(self._w)

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n})"

    @classmethod
    def from_upper_triangle(cls, n: int, entries: Sequence[Sequence[int]]) -> "WeightedGraph":
        """Build from the strict upper triangle, row i holding w(i,i+1)..w(i,n-1)."""
        if n < 1:
            raise InstanceFormatError("instance needs at least one vertex")
        if len(entries) != max(n - 1, 0):
            raise InstanceFormatError(f"expected {n - 1} weight rows, got {len(entries)}")
        m = [[0] * n for _ in range(n)]
        for i, row in enumerate(entries):
            if len(row) != n - 1 - i:
                raise InstanceFormatError(
                    f"weight row {i} has {len(row)} entries, expected {n - 1 - i}"
                )
            for k, x in enumerate(row):
                j = i + 1 + k
                m[i][j] = x
                m[j][i] = x
        return cls(m)


def violating_triangles(g: WeightedGraph) -> tuple[TriangleViolation, ...]:
    """All violated triangle inequalities, one record per (triple, apex).

    A triple can appear up to three times with different apexes.  Results
    are ordered lexicographically by (a, b, c, apex).  The scan is cached on
    the instance, so repeated analysis is free.
    """
    if g._violations is not None:
        return g._violations
    w = g._w
    found: list[TriangleViolation] = []
    for a, b, c in itertools.combinations(range(g.n), 3):
        ab, ac, bc = w[a][b], w[a][c], w[b][c]
        if bc > ab + ac:
            found.append(TriangleViolation(a, b, c, apex=a))
        if ac > ab + bc:
            found.append(TriangleViolation(a, b, c, apex=b))
        if ab > ac + bc:
            found.append(TriangleViolation(a, b, c, apex=c))
    g._violations = tuple(found)
    return g._violations


def is_metric(g: WeightedGraph) -> bool:
    return not violating_triangles(g)


def bad_vertices_p(g: WeightedGraph) -> VertexPartition:
    """Partition marking every vertex of every violating triangle as bad."""
    bad: set[int] = set()
    for v in violating_triangles(g):
        bad.update((v.a, v.b, v.c))
    good = frozenset(range(g.n)) - bad
    return VertexPartition(bad=frozenset(bad), good=good, kind="byP")


def min_violating_set(g: WeightedGraph, budget: int | None = None) -> VertexPartition:
    """Partition whose bad side is a minimum set meeting every violating triple.

    The search is a hitting-set branch over the distinct vertex triples of
    the violating triangles: pick the first unhit triple and branch on its
    three vertices, with iterative deepening on the solution size.  Among
    all minimum solutions the lexicographically smallest (as a sorted
    tuple) is returned.  ``budget`` bounds the solution size; if every
    violating set is larger, :class:`BudgetExceeded` is raised.
    """
    triples = sorted({tuple(sorted((v.a, v.b, v.c))) for v in violating_triangles(g)})
    all_vertices = frozenset(range(g.n))
    if not triples:
        return VertexPartition(bad=frozenset(), good=all_vertices, kind="byQ")

    limit = len(triples) if budget is None else budget

    def search(k: int, chosen: set[int], solutions: set[frozenset[int]]) -> None:
        unhit = next((t for t in triples if not (chosen & set(t))), None)
        if unhit is None:
            solutions.add(frozenset(chosen))
            return
        if len(chosen) == k:
            return
        for v in unhit:
            chosen.add(v)
            search(k, chosen, solutions)
            chosen.remove(v)

    for k in range(limit + 1):
        solutions: set[frozenset[int]] = set()
        search(k, set(), solutions)
        if solutions:
            best = min(solutions, key=lambda s: (len(s), tuple(sorted(s))))
            return VertexPartition(bad=best, good=all_vertices - best, kind="byQ")
    raise BudgetExceeded(f"no violating set of size <= {limit}")


def parse_instance(text: str) -> WeightedGraph:
    """Parse the plain-text instance format.

    The first data line holds the vertex count ``n``; the next ``n - 1``
    lines hold the strict upper triangle of the weight matrix, line ``i``
    listing ``w(i, i+1) .. w(i, n-1)`` separated by whitespace.  Blank
    lines are skipped and ``#`` starts a comment that runs to end of line.
    """
    tokens_per_line: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens_per_line.append(line.split())
    if not tokens_per_line:
        raise InstanceFormatError("empty instance file")
    head = tokens_per_line[0]
    if len(head) != 1:
        raise InstanceFormatError("first data line must hold exactly the vertex count")
    try:
        n = int(head[0])
    except ValueError as exc:
        raise InstanceFormatError(f"vertex count is not an integer: {head[0]!r}") from exc
    if n < 1:
        raise InstanceFormatError(f"vertex count must be positive, got {n}")
    body = tokens_per_line[1:]
    if len(body) != n - 1:
        raise InstanceFormatError(f"expected {n - 1} weight lines, got {len(body)}")
    entries: list[list[int]] = []
    for i, toks in enumerate(body):
        try:
            row = [int(t) for t in toks]
        except ValueError as exc:
            raise InstanceFormatError(f"non-integer weight on row {i}") from exc
        entries.append(row)
    return WeightedGraph.from_upper_triangle(n, entries)


def format_instance(g: WeightedGraph) -> str:
    """Serialize to the plain-text instance format (inverse of parse_instance)."""
    lines = [str(g.n)]
    for i in range(g.n - 1):
        lines.append(" ".join(str(g._w[i][j]) for j in range(i + 1, g.n)))
    return "\n".join(lines) + "\n"


def load_instance(path: str) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(g: WeightedGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(g))
