"""Edge sets, forests, matchings, tours, and walks used by the solvers.

Edges are stored as ``(i, j, weight)`` triples with ``i < j``.  A
:class:`MultiEdgeSet` additionally allows parallel copies of an edge, which
the solvers need when they double chains or add a matching on top of a
tree.  All containers are plain data with deterministic ordering.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int, int]


def make_edge(u: int, v: int, weight: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v, weight) if u < v else (v, u, weight)


@dataclass(frozen=True)
class EdgeSet:
    """A simple (no parallel copies) set of weighted edges."""

    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        keys = [(u, v) for u, v, _ in self.edges]
        if len(keys) != len(set(keys)):
            raise ValueError("duplicate edge in EdgeSet")

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "EdgeSet":
        return cls(tuple(sorted(edges)))

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for u, v, _ in self.edges:
            out.add(u)
            out.add(v)
        return frozenset(out)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Tree:
    """One tree of a forest: its vertex set and its edges."""

    vertices: frozenset[int]
    edges: EdgeSet

    @property
    def weight(self) -> int:
        return self.edges.total_weight


@dataclass(frozen=True)
class Forest:
    """A collection of vertex-disjoint trees."""

    trees: tuple[Tree, ...]

    @property
    def total_weight(self) -> int:
        return sum(t.weight for t in self.trees)

    def all_edges(self) -> list[Edge]:
        out: list[Edge] = []
        for t in self.trees:
            out.extend(t.edges)
        return out

    def vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for t in self.trees:
            out |= t.vertices
        return frozenset(out)

    def tree_of(self, v: int) -> int:
        """Index of the tree containing vertex v."""
        for idx, t in enumerate(self.trees):
            if v in t.vertices:
                return idx
        raise KeyError(f"vertex {v} not in forest")


@dataclass(frozen=True)
class Matching:
    """A set of vertex-disjoint weighted edges."""

    pairs: tuple[Edge, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for u, v, _ in self.pairs:
            if u in seen or v in seen:
                raise ValueError("matching reuses a vertex")
            seen.add(u)
            seen.add(v)

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.pairs)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


class MultiEdgeSet:
    """A multiset of weighted edges supporting parallel copies.

    Degree bookkeeping counts one per incidence, so a vertex joined to a
    neighbour by two parallel edges has degree two from them.
    """

    __slots__ = ("_count", "_weight_of")

    def __init__(self) -> None:
        self._count: Counter[tuple[int, int]] = Counter()
        self._weight_of: dict[tuple[int, int], int] = {}

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "MultiEdgeSet":
        mes = cls()
        for u, v, w in edges:
            mes.add(u, v, w)
        return mes

    def add(self, u: int, v: int, weight: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in self._weight_of and self._weight_of[key] != weight:
            raise ValueError(f"conflicting weights for edge {key}")
        self._count[key] += 1
        self._weight_of[key] = weight

    def remove(self, u: int, v: int) -> None:
        key = (u, v) if u < v else (v, u)
        if self._count[key] <= 0:
            raise KeyError(f"edge {key} not present")
        self._count[key] -= 1
        if self._count[key] == 0:
            del self._count[key]
            del self._weight_of[key]

    def multiplicity(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        return self._count.get(key, 0)

    def edges(self) -> list[Edge]:
        """All edges with multiplicity, sorted, parallel copies adjacent."""
        out: list[Edge] = []
        for (u, v), c in sorted(self._count.items()):
            out.extend([(u, v, self._weight_of[(u, v)])] * c)
        return out

    @property
    def total_weight(self) -> int:
        return sum(self._weight_of[k] * c for k, c in self._count.items())

    def degrees(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for (u, v), c in self._count.items():
            deg[u] = deg.get(u, 0) + c
            deg[v] = deg.get(v, 0) + c
        return deg

    def vertices(self) -> frozenset[int]:
        return frozenset(self.degrees())

    def odd_vertices(self) -> list[int]:
        return sorted(v for v, d in self.degrees().items() if d % 2 == 1)

    def neighbours(self, v: int) -> list[int]:
        out = []
        for (a, b), c in self._count.items():
            if a == v:
                out.extend([b] * c)
            elif b == v:
                out.extend([a] * c)
        return sorted(out)

    def is_connected(self) -> bool:
        """Connectivity over the vertices that carry at least one edge."""
        verts = self.vertices()
        if not verts:
            return True
        adj: dict[int, set[int]] = {v: set() for v in verts}
        for u, v in self._count:
            adj[u].add(v)
            adj[v].add(u)
        start = min(verts)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(verts)

    def copy(self) -> "MultiEdgeSet":
        mes = MultiEdgeSet()
        mes._count = Counter(self._count)
        mes._weight_of = dict(self._weight_of)
        return mes

    def __len__(self) -> int:
        return sum(self._count.values())


@dataclass(frozen=True)
class Tour:
    """A Hamiltonian cycle over a vertex set, stored in canonical rotation.

    The canonical form starts at the smallest vertex and runs in the
    direction that makes the second entry smaller than the last, so equal
    cycles compare equal regardless of how they were produced.
    """

    order: tuple[int, ...]
    weight: int

    @classmethod
    def canonical(cls, order: Sequence[int], weight: int) -> "Tour":
        seq = list(order)
        if len(seq) != len(set(seq)):
            raise ValueError("tour repeats a vertex")
        if len(seq) >= 2:
            k = seq.index(min(seq))
            seq = seq[k:] + seq[:k]
            if len(seq) >= 3 and seq[1] > seq[-1]:
                seq = [seq[0]] + seq[:0:-1]
        return cls(order=tuple(seq), weight=weight)

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class WalkWithRepeats:
    """A closed walk that may visit vertices several times."""

    order: tuple[int, ...]
    weight: int
