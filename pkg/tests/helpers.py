"""Shared test oracles, written independently of the library code paths."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from neartsp import WeightedGraph


def random_symmetric_matrix(
    n: int, rng: random.Random, lo: int = 1, hi: int = 30
) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.randint(lo, hi)
    return m


def exhaustive_violations(g: WeightedGraph) -> set[tuple[int, int, int, int]]:
    """All (a, b, c, apex) violations by direct scan over ordered triples."""
    out: set[tuple[int, int, int, int]] = set()
    for x, y, z in itertools.permutations(range(g.n), 3):
        if g.w(x, z) > g.w(x, y) + g.w(y, z):
            a, b, c = sorted((x, y, z))
            out.add((a, b, c, y))
    return out


def brute_min_violating_set(g: WeightedGraph) -> frozenset[int]:
    """Smallest hitting set of the violating triples, by subset scan."""
    triples = {frozenset(t[:3]) for t in exhaustive_violations(g)}
    if not triples:
        return frozenset()
    for size in range(1, g.n + 1):
        hits = [
            frozenset(c)
            for c in itertools.combinations(range(g.n), size)
            if all(set(c) & t for t in triples)
        ]
        if hits:
            return min(hits, key=lambda s: tuple(sorted(s)))
    raise AssertionError("unreachable: the full vertex set hits everything")


def all_perfect_matchings(vertices: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    vs = sorted(vertices)
    if not vs:
        yield []
        return
    first, rest = vs[0], vs[1:]
    for i, partner in enumerate(rest):
        for sub in all_perfect_matchings(rest[:i] + rest[i + 1 :]):
            yield [(first, partner)] + sub


def tour_opt_by_permutations(g: WeightedGraph, subset: Sequence[int] | None = None) -> int:
    vs = sorted(range(g.n) if subset is None else subset)
    if len(vs) <= 2:
        return 0 if len(vs) < 2 else 2 * g.w(vs[0], vs[1])
    first, rest = vs[0], vs[1:]
    best = None
    for perm in itertools.permutations(rest):
        order = [first, *perm]
        wt = sum(g.w(order[k - 1], order[k]) for k in range(len(order)))
        if best is None or wt < best:
            best = wt
    return best


def path_opt_by_permutations(g: WeightedGraph, subset: Sequence[int], s: int, t: int) -> int:
    mids = [v for v in subset if v not in (s, t)]
    best = None
    for perm in itertools.permutations(mids):
        order = [s, *perm, t]
        wt = sum(g.w(order[k], order[k + 1]) for k in range(len(order) - 1))
        if best is None or wt < best:
            best = wt
    return best


def spanning_forests(
    vertices: Sequence[int], weight, components: int
) -> Iterator[list[tuple[int, int]]]:
    """All forests with the given component count, as edge pair lists."""
    vs = sorted(vertices)
    pairs = list(itertools.combinations(vs, 2))
    take = len(vs) - components
    for combo in itertools.combinations(pairs, take):
        parent = {v: v for v in vs}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for u, v in combo:
            ru, rv = find(u), find(v)
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
        if acyclic:
            yield list(combo)


def chain_sets_by_insertion(vertices: Sequence[int]) -> set[tuple[tuple[int, ...], ...]]:
    """All groupings into vertex-disjoint paths, by incremental insertion.

    Inserting the next vertex either starts a new path, extends one end of
    an existing path, or joins two path ends through itself.  This covers
    every path grouping exactly once after canonicalization and shares no
    code with the library's partition-based enumeration.
    """

    def canon(chains: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
        fixed = []
        for c in chains:
            fixed.append(c if len(c) < 2 or c[0] < c[-1] else c[::-1])
        return tuple(sorted(fixed))

    vs = sorted(vertices)
    states: set[tuple[tuple[int, ...], ...]] = {()}
    for v in vs:
        nxt: set[tuple[tuple[int, ...], ...]] = set()
        for state in states:
            chains = list(state)
            nxt.add(canon(chains + [(v,)]))
            for i, c in enumerate(chains):
                others = chains[:i] + chains[i + 1 :]
                nxt.add(canon(others + [(v,) + c]))
                nxt.add(canon(others + [c + (v,)]))
                for j, d in enumerate(others):
                    rest = others[:j] + others[j + 1 :]
                    for left in (c, c[::-1]):
                        for right in (d, d[::-1]):
                            nxt.add(canon(rest + [left + (v,) + right]))
        states = nxt
    return states


def fully_canonical_ordered(chains: Sequence[Sequence[int]], f: Sequence[int]):
    """Minimum over all rotations and both directions of an ordered guess."""
    m = len(chains)
    best = None
    seq = [tuple(c) for c in chains]
    fs = list(f)
    for rot in range(m):
        cand = (tuple(seq[rot:] + seq[:rot]), tuple(fs[rot:] + fs[:rot]))
        if best is None or cand < best:
            best = cand
    rev_chains = [tuple(reversed(c)) for c in seq]
    for rot in range(m):
        order = [rev_chains[rot]] + [rev_chains[(rot - k) % m] for k in range(1, m)]
        forder = [fs[(rot - 1 - k) % m] for k in range(m)]
        cand = (tuple(order), tuple(forder))
        if best is None or cand < best:
            best = cand
    return best
